#include "jumpdiff/functionals.hpp"

#include "jumpdiff/errors.hpp"

#include <algorithm>
#include <cmath>

namespace jumpdiff {

namespace {

void check_alpha(double alpha)
{
  if (!(alpha > 0.0 && alpha < 2.0))
    throw DomainError("stable index must lie in (0, 2), got " + std::to_string(alpha));
}

void check_positive(double v, const char* what)
{
  if (!(v > 0.0) || !std::isfinite(v))
    throw DomainError(std::string(what) + " must be positive and finite");
}

// Decay exponent of rho(x, z) as z -> infinity.
double tail_decay(const ModelSpec& model, double x)
{
  const auto& j = model.jumps;
  double beta = INFINITY;
  if (j.tail.kind == TailKind::capped)
    return j.tail.alpha0;
  if (j.r(x) != 0.0)
    beta = j.alpha(x);
  if (j.tail.kind == TailKind::compound_poisson_t && j.tail.intensity > 0.0)
    beta = std::min(beta, j.tail.dof);
  return std::isfinite(beta) ? beta : 2.0;
}

} // namespace

double folded_increment(const DesignFunction& f, double z)
{
  if (std::abs(f.scale() * z) < 1e-3) {
    const double z2 = z * z;
    return f.derivative(2, 0.0) * z2 + f.derivative(4, 0.0) * z2 * z2 / 12.0;
  }
  return f(z) + f(-z) - 2.0 * f(0.0);
}

QuadratureResult frac_functional(const DesignFunction& f,
                                 double alpha,
                                 const QuadratureSettings& settings)
{
  check_alpha(alpha);
  auto g = [&f, alpha](double z) { return folded_increment(f, z) * std::pow(z, -1.0 - alpha); };
  const double zeta = f.vanish_radius();
  const double u = f.scale();
  return integrate_half_line(g, zeta, { 1.0 / u, 10.0 / u, 1.0 }, 1.0 - alpha, alpha, settings);
}

double jump_gen_star(const ModelSpec& model,
                     const DesignFunction& f,
                     double u,
                     double x,
                     const QuadratureSettings& settings)
{
  if (!(u >= 1.0))
    throw DomainError("jump_gen_star: u must be >= 1");
  const auto fu = f.rescaled(u);
  const double a = model.jumps.alpha(x);
  auto g = [&](double z) { return folded_increment(fu, z) * jump_density(model, x, z); };
  const double scale = fu.scale();
  return integrate_half_line(g, fu.vanish_radius(), { 1.0 / scale, 10.0 / scale, 1.0 },
                             1.0 - a, tail_decay(model, x), settings)
    .value;
}

double gen_star(const ModelSpec& model,
                const DesignFunction& f,
                double u,
                double x,
                const QuadratureSettings& settings)
{
  const auto fu = f.rescaled(u);
  return model.mu(x) * fu.derivative(1, 0.0) +
         0.5 * model.sigma2(x) * fu.derivative(2, 0.0) +
         jump_gen_star(model, f, u, x, settings);
}

double variance_factor_s2(double gamma,
                          double alpha,
                          const DesignFunction& f,
                          const QuadratureSettings& settings)
{
  check_alpha(alpha);
  if (!(gamma > 0.0) || gamma == 1.0 || !std::isfinite(gamma))
    throw DomainError("variance_factor_s2: gamma must be positive and != 1");
  const double c = std::pow(gamma, -alpha);
  auto d = [&f, gamma, c](double z) { return f(z) - c * f(gamma * z); };
  auto g = [&](double z) {
    const double dp = d(z), dm = d(-z);
    return (dp * dp + dm * dm) * std::pow(z, -1.0 - alpha);
  };
  const double zeta = f.vanish_radius();
  const double lower = std::min(zeta, zeta / gamma);
  const double u = f.scale();
  const double lg = std::log(gamma);
  const auto res = integrate_half_line(
    g, lower, { zeta, zeta / gamma, 1.0 / u, 1.0 / (u * gamma), 1.0 }, 1.0 - alpha, alpha, settings);
  return res.value / (lg * lg);
}

double alpha_clt_sd(double gamma,
                    double alpha,
                    double r,
                    double m_hat,
                    const DesignFunction& f,
                    double G2_int,
                    double Tb_ualpha)
{
  check_positive(r, "alpha_clt_sd: r");
  check_positive(m_hat, "alpha_clt_sd: m_hat");
  check_positive(G2_int, "alpha_clt_sd: kernel integral");
  check_positive(Tb_ualpha, "alpha_clt_sd: rate factor");
  const double fa = frac_functional(f, alpha).value;
  if (fa == 0.0)
    throw DomainError("alpha_clt_sd: f^[alpha](0) vanishes");
  const double s2 = G2_int * variance_factor_s2(gamma, alpha, f) / (r * m_hat * fa * fa);
  return std::sqrt(s2 / Tb_ualpha);
}

double drift_clt_sd(const ModelSpec& model,
                    const DesignFunction& f,
                    double x,
                    double m_hat,
                    double G2_int,
                    double Tb)
{
  check_positive(m_hat, "drift_clt_sd: m_hat");
  check_positive(G2_int, "drift_clt_sd: kernel integral");
  check_positive(Tb, "drift_clt_sd: rate factor");
  const double d1 = f.derivative(1, 0.0);
  if (d1 == 0.0)
    throw DomainError("drift_clt_sd: f'(0) must be nonzero");
  const double v = gen_star(model, square(f), 1.0, x) / (d1 * d1) * G2_int / m_hat;
  return std::sqrt(v / Tb);
}

double filtered_drift_clt_sd(const ModelSpec& model,
                             double x,
                             double m_hat,
                             double G2_int,
                             double Tb)
{
  check_positive(m_hat, "filtered_drift_clt_sd: m_hat");
  check_positive(G2_int, "filtered_drift_clt_sd: kernel integral");
  check_positive(Tb, "filtered_drift_clt_sd: rate factor");
  return std::sqrt(model.sigma2(x) * G2_int / m_hat / Tb);
}

} // namespace jumpdiff
