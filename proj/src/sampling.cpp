#include "jumpdiff/sampling.hpp"

#include "jumpdiff/errors.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace jumpdiff {

std::uint64_t splitmix64(std::uint64_t& state)
{
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

std::mt19937_64 make_engine(std::uint64_t master, std::uint64_t index)
{
  std::uint64_t state = master;
  const std::uint64_t a = splitmix64(state);
  state = a ^ (index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL);
  std::array<std::uint32_t, 8> words{};
  for (std::size_t i = 0; i < words.size(); i += 2) {
    const std::uint64_t w = splitmix64(state);
    words[i] = static_cast<std::uint32_t>(w);
    words[i + 1] = static_cast<std::uint32_t>(w >> 32);
  }
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

void check_alpha(double alpha)
{
  if (!(alpha > 0.0 && alpha < 2.0))
    throw DomainError("stable index must lie in (0, 2), got " + std::to_string(alpha));
  if (std::abs(alpha - 1.0) <= 1e-3)
    throw DomainError("stable index within 1e-3 of 1 is not supported");
}

} // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
  : master_seed_(master_seed)
  , stream_index_(stream_index)
  , engine_(make_engine(master_seed, stream_index))
{}

double RngStream::uniform()
{
  // 53 random bits, shifted off zero.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t RngStream::poisson(double mean)
{
  if (!(mean >= 0.0))
    throw DomainError("poisson: mean must be >= 0");
  if (mean == 0.0)
    return 0;
  if (mean < 10.0) {
    const double u = uniform();
    double p = std::exp(-mean);
    double cdf = p;
    std::uint64_t k = 0;
    while (u > cdf && k < 1000) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
    }
    return k;
  }
  std::poisson_distribution<std::uint64_t> d(mean);
  return d(engine_);
}

double RngStream::student_t(double dof)
{
  std::gamma_distribution<double> chi(0.5 * dof, 2.0);
  const double z = normal();
  return z / std::sqrt(chi(engine_) / dof);
}

double stable_constant_closed_form(double alpha)
{
  check_alpha(alpha);
  return -2.0 * std::tgamma(-alpha) * std::cos(0.5 * std::numbers::pi * alpha);
}

double stable_constant(double alpha, const QuadratureSettings& settings)
{
  check_alpha(alpha);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  constexpr int periods = 200;
  // 1 - cos z = 2 sin^2(z/2) avoids cancellation near zero.
  auto g = [alpha](double z) {
    if (z < 1e-6)
      return 0.5 * std::pow(z, 1.0 - alpha) * (1.0 - z * z / 12.0);
    const double s = std::sin(0.5 * z);
    return 2.0 * s * s * std::pow(z, -1.0 - alpha);
  };
  const double k = std::ceil(2.0 / (2.0 - alpha));
  auto near = [&](double t) {
    if (t <= 0.0)
      return 0.0;
    const double z = std::pow(t, k);
    if (z < 1e-6)
      return 0.5 * k * std::pow(t, k * (2.0 - alpha) - 1.0);
    return g(z) * k * std::pow(t, k - 1.0);
  };
  QuadratureSettings inner = settings;
  inner.abs_tol = settings.abs_tol / 4.0;
  double value = integrate(near, { 0.0, 1.0 }, inner).value;
  std::vector<double> pts{ 1.0 };
  for (int i = 1; i <= periods; ++i)
    pts.push_back(two_pi * i);
  value += integrate(g, pts, inner).value;

  // Beyond Z = 2 pi K: int z^-s dz minus the cosine part, integrated by parts
  // (sin Z = 0, cos Z = 1).
  const double Z = two_pi * periods;
  const double s = 1.0 + alpha;
  const double plain = std::pow(Z, -alpha) / alpha;
  const double osc = s * std::pow(Z, -s - 1.0) - s * (s + 1.0) * (s + 2.0) * std::pow(Z, -s - 3.0);
  value += plain - osc;
  return 2.0 * value;
}

double sample_sas(double alpha, double scale, RngStream& rng)
{
  if (!(scale >= 0.0))
    throw DomainError("sample_sas: scale must be >= 0");
  if (!(alpha > 0.0 && alpha < 2.0))
    throw DomainError("sample_sas: index must lie in (0, 2)");
  if (scale == 0.0)
    return 0.0;
  const double v = std::numbers::pi * (rng.uniform() - 0.5);
  const double w = rng.exponential();
  const double x = std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
                   std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
  return scale * x;
}

double stable_scale(double alpha, double r, double dt)
{
  if (r == 0.0)
    return 0.0;
  return std::pow(dt * r * stable_constant_closed_form(alpha), 1.0 / alpha);
}

double stable_increment(const ModelSpec& model, double x, double dt, RngStream& rng)
{
  if (!(dt > 0.0))
    throw DomainError("stable_increment: dt must be > 0");
  const double r = model.jumps.r(x);
  if (r == 0.0)
    return 0.0;
  const double a = model.jumps.alpha(x);
  return sample_sas(a, stable_scale(a, r, dt), rng);
}

double sample_tail_jumps(const TailSpec& tail, double dt, RngStream& rng)
{
  if (!(dt > 0.0))
    throw DomainError("sample_tail_jumps: dt must be > 0");
  switch (tail.kind) {
    case TailKind::pure_stable:
      return 0.0;
    case TailKind::compound_poisson_t: {
      const auto n = rng.poisson(tail.intensity * dt);
      double sum = 0.0;
      for (std::uint64_t i = 0; i < n; ++i)
        sum += rng.student_t(tail.dof);
      return sum;
    }
    case TailKind::capped: {
      const auto n = rng.poisson(2.0 * dt);
      double sum = 0.0;
      for (std::uint64_t i = 0; i < n; ++i) {
        const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        sum += sign * std::pow(rng.uniform(), -1.0 / tail.alpha0);
      }
      return sum;
    }
  }
  return 0.0;
}

double sample_tail_jumps(const ModelSpec& model, double dt, RngStream& rng)
{
  return sample_tail_jumps(model.jumps.tail, dt, rng);
}

} // namespace jumpdiff
