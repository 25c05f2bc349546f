#include "jumpdiff/levy_oracle.hpp"

#include "jumpdiff/errors.hpp"
#include "jumpdiff/quadrature.hpp"
#include "jumpdiff/sampling.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>

namespace jumpdiff {

namespace {

std::mutex planner_mutex;

struct FftwFree
{
  void operator()(void* p) const { fftw_free(p); }
};

// Characteristic function of the Student-t law with `dof` degrees of freedom.
double student_t_cf(double w, double dof)
{
  const double a = std::sqrt(dof) * std::abs(w);
  if (a < 1e-300)
    return 1.0;
  if (a > 700.0)
    return 0.0;
  const double nu2 = 0.5 * dof;
  const double logc = nu2 * std::log(a) - std::lgamma(nu2) - (nu2 - 1.0) * std::log(2.0);
  return std::exp(logc) * boost::math::cyl_bessel_k(nu2, a);
}

struct Exponents
{
  double stable_c = 0.0; // r C(alpha)
  bool has_stable = false;
  bool has_cp = false;
};

Exponents exponents(const LevyRestriction& levy)
{
  if (levy.tail.kind == TailKind::capped)
    throw DomainError("levy oracle: the capped tail is not supported");
  Exponents e;
  if (levy.r != 0.0) {
    e.has_stable = true;
    e.stable_c = levy.r * stable_constant(levy.alpha);
  }
  e.has_cp = levy.tail.kind == TailKind::compound_poisson_t && levy.tail.intensity > 0.0;
  return e;
}

std::complex<double> char_fn(const LevyRestriction& levy, const Exponents& e, double h, double w)
{
  double logmod = -0.5 * levy.sigma2 * h * w * w;
  if (e.has_stable)
    logmod -= h * e.stable_c * std::pow(std::abs(w), levy.alpha);
  if (logmod < -745.0)
    return 0.0;
  if (e.has_cp)
    logmod += levy.tail.intensity * h * (student_t_cf(w, levy.tail.dof) - 1.0);
  return std::polar(std::exp(logmod), levy.mu * h * w);
}

// h rho(y) for |y| large: stable plus first-order compound Poisson tail.
double tail_measure(const LevyRestriction& levy, double h, double y)
{
  const double ay = std::abs(y);
  double v = 0.0;
  if (levy.r != 0.0)
    v += h * levy.r * std::pow(ay, -1.0 - levy.alpha);
  if (levy.tail.kind == TailKind::compound_poisson_t && levy.tail.intensity > 0.0) {
    const double lh = levy.tail.intensity * h;
    v += lh * std::exp(-lh) * student_t_pdf(ay, levy.tail.dof);
  }
  return v;
}

double tail_mass_outside(const LevyRestriction& levy, double h, double L)
{
  double m = 0.0;
  if (levy.r != 0.0)
    m += 2.0 * h * levy.r * std::pow(L, -levy.alpha) / levy.alpha;
  if (levy.tail.kind == TailKind::compound_poisson_t && levy.tail.intensity > 0.0) {
    const double lh = levy.tail.intensity * h;
    boost::math::students_t_distribution<double> t(levy.tail.dof);
    m += 2.0 * lh * std::exp(-lh) * boost::math::cdf(boost::math::complement(t, L));
  }
  return m;
}

} // namespace

std::complex<double> levy_char_fn(const LevyRestriction& levy, double h, double w)
{
  return char_fn(levy, exponents(levy), h, w);
}

LevyMoments levy_moments(const LevyRestriction& levy,
                         const DesignFunction& f,
                         double u,
                         double h,
                         const OracleSettings& settings)
{
  if (!(h > 0.0))
    throw DomainError("levy oracle: h must be positive");
  if (!(u > 0.0))
    throw DomainError("levy oracle: u must be positive");
  if (!(levy.sigma2 >= 0.0 && levy.r >= 0.0))
    throw DomainError("levy oracle: sigma2 and r must be nonnegative");
  const auto e = exponents(levy);
  const auto fu = f.rescaled(u);

  LevyMoments out;
  if (levy.sigma2 == 0.0 && !e.has_stable) {
    if (e.has_cp)
      throw GridResolutionError("levy oracle: compound Poisson alone has an atom; no density to invert");
    const double v = fu(levy.mu * h);
    out.mean = v;
    out.second_moment = v * v;
    out.grid_mass = 1.0;
    return out;
  }

  // Half-span L: Gaussian core plus enough room for the jump tails.
  const double drift = std::abs(levy.mu * h);
  double L = settings.gauss_sigmas * std::sqrt(levy.sigma2 * h);
  const double target = 0.5 * settings.tail_mass;
  if (e.has_stable)
    L = std::max(L, std::pow(2.0 * h * levy.r / (levy.alpha * target), 1.0 / levy.alpha));
  if (e.has_cp) {
    const double lh = levy.tail.intensity * h;
    const double p = target / (2.0 * lh * std::exp(-lh));
    if (p < 0.5) {
      boost::math::students_t_distribution<double> t(levy.tail.dof);
      L = std::max(L, boost::math::quantile(boost::math::complement(t, p)));
    }
  }
  L += drift;

  const std::size_t N = settings.grid_points;
  if (N < 16 || (N & (N - 1)) != 0)
    throw DomainError("levy oracle: grid_points must be a power of two");
  const double dx = 2.0 * L / static_cast<double>(N);
  const double w_nyq = std::numbers::pi / dx;
  if (std::abs(char_fn(levy, e, h, w_nyq)) > settings.cf_floor)
    throw GridResolutionError("levy oracle: characteristic function not resolved at the Nyquist frequency");
  if (dx * fu.scale() > 0.05)
    throw GridResolutionError("levy oracle: grid too coarse for the rescaled design function");

  const std::size_t M = N / 2 + 1;
  std::unique_ptr<fftw_complex[], FftwFree> spec(
    static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * M)));
  std::unique_ptr<double[], FftwFree> dens(static_cast<double*>(fftw_malloc(sizeof(double) * N)));
  if (!spec || !dens)
    throw std::bad_alloc();
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex);
    plan = fftw_plan_dft_c2r_1d(static_cast<int>(N), spec.get(), dens.get(), FFTW_ESTIMATE);
  }
  // p_j = (1/2L) sum_k (-1)^k phi(w_k) exp(-2 pi i k j / N); c2r uses the
  // opposite sign, so feed the conjugate.
  for (std::size_t k = 0; k < M; ++k) {
    const double w = static_cast<double>(k) * std::numbers::pi / L;
    auto c = std::conj(char_fn(levy, e, h, w));
    if (k % 2 == 1)
      c = -c;
    if (k == M - 1)
      c = std::real(c);
    spec[k][0] = c.real();
    spec[k][1] = c.imag();
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex);
    fftw_destroy_plan(plan);
  }

  const double norm = 1.0 / (2.0 * L);
  double pmax = 0.0, pmin = 0.0;
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    const double p = dens[j] * norm;
    pmax = std::max(pmax, p);
    pmin = std::min(pmin, p);
    const double y = -L + static_cast<double>(j) * dx;
    const double v = fu(y);
    s1 += v * p;
    s2 += v * v * p;
  }
  if (pmin < -1e-8 * pmax)
    throw GridResolutionError("levy oracle: negative density dips on the grid");
  s1 *= dx;
  s2 *= dx;

  // Replace the aliased mass of the periodised density by the tail measure.
  if (e.has_stable || e.has_cp) {
    QuadratureSettings qs;
    qs.abs_tol = 1e-16;
    qs.rel_tol = 1e-9;
    const double sc = fu.scale();
    double c1 = 0.0, c2 = 0.0;
    for (int k = 1; k <= settings.fold_periods; ++k) {
      const double c = 2.0 * k * L;
      std::vector<double> pts{ c - L, c - 10.0 / sc, c - 1.0 / sc, c, c + 1.0 / sc, c + 10.0 / sc, c + L };
      std::sort(pts.begin(), pts.end());
      pts.front() = std::max(pts.front(), c - L);
      for (auto& pt : pts)
        pt = std::clamp(pt, c - L, c + L);
      auto diff = [&](double y, int power) {
        auto pw = [power](double v) { return power == 1 ? v : v * v; };
        return pw(fu(y)) + pw(fu(-y)) - pw(fu(y - c)) - pw(fu(c - y));
      };
      c1 += integrate([&](double y) { return diff(y, 1) * tail_measure(levy, h, y); }, pts, qs).value;
      c2 += integrate([&](double y) { return diff(y, 2) * tail_measure(levy, h, y); }, pts, qs).value;
    }
    s1 += c1;
    s2 += c2;
  }

  out.mean = s1;
  out.second_moment = s2;
  out.variance = s2 - s1 * s1;
  out.half_span = L;
  out.grid_mass = 1.0 - tail_mass_outside(levy, h, L - drift);
  if (out.grid_mass < 1.0 - 1e-6)
    throw GridResolutionError("levy oracle: density mass on the grid below 1 - 1e-6");
  return out;
}

double levy_expectation(const LevyRestriction& levy,
                        const DesignFunction& f,
                        double u,
                        double h,
                        const OracleSettings& settings)
{
  return levy_moments(levy, f, u, h, settings).mean;
}

} // namespace jumpdiff
