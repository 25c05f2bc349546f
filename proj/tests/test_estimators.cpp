#include <doctest.h>

#include "jumpdiff/errors.hpp"
#include "jumpdiff/estimators.hpp"
#include "jumpdiff/sampling.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

using namespace jumpdiff;

namespace {

// Increments of a pure stable Levy process over h, all levels at `x`.
Increments stable_sample(double alpha, double r, double h, std::size_t n, double x = 0.0)
{
  RngStream rng(101, static_cast<std::uint64_t>(alpha * 1000));
  const double scale = stable_scale(alpha, r, h);
  std::vector<double> level(n, x), delta(n);
  for (auto& d : delta)
    d = sample_sas(alpha, scale, rng);
  return Increments(level, delta, h);
}

// Levels uniform on [-2, 2] and Gaussian increments with drift -x.
Increments gaussian_sample(double sigma2, double h, std::size_t n)
{
  RngStream rng(202, 0);
  std::vector<double> level(n), delta(n);
  for (std::size_t i = 0; i < n; ++i) {
    level[i] = -2.0 + 4.0 * rng.uniform();
    delta[i] = -level[i] * h + std::sqrt(sigma2 * h) * rng.normal();
  }
  return Increments(level, delta, h);
}

EstimatorConfig explicit_u(double u)
{
  EstimatorConfig c;
  c.u_rule.kind = URule::Kind::explicit_value;
  c.u_rule.value = u;
  return c;
}

} // namespace

TEST_CASE("kernels")
{
  using boost::math::quadrature::gauss_kronrod;
  for (auto shape : { KernelShape::epanechnikov, KernelShape::uniform, KernelShape::triangular }) {
    KernelSpec k;
    k.shape = shape;
    k.bandwidth = 0.3;
    const double mass = gauss_kronrod<double, 31>::integrate([&](double y) { return k.unit(y); }, -1.0, 0.0) +
                        gauss_kronrod<double, 31>::integrate([&](double y) { return k.unit(y); }, 0.0, 1.0);
    const double g2 = 2 * gauss_kronrod<double, 31>::integrate([&](double y) { return k.unit(y) * k.unit(y); }, 0.0, 1.0);
    INFO(to_string(shape));
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(k.integral_g2() == doctest::Approx(g2).epsilon(1e-14));
    CHECK(k(0.2) == k.unit(0.2 / 0.3) / 0.3);
    CHECK(k(0.31) == 0.0);
    CHECK(kernel_shape_from_string(to_string(shape)) == shape);
  }
  CHECK_THROWS_AS(kernel_shape_from_string("gaussian"), ValidationError);
}

TEST_CASE("u rule")
{
  URule r;
  CHECK(r.resolve(10.0, 0.5, 1e-4) == doctest::Approx(std::pow(10.0 * 0.5 * 1e-8, -0.07)).epsilon(1e-15));
  CHECK(r.resolve(10.0, 0.5, 1e-4) == doctest::Approx(3.2439).epsilon(1e-4));
  r.kind = URule::Kind::explicit_value;
  r.value = 12.0;
  CHECK(r.resolve(1.0, 1.0, 1.0) == 12.0);

  auto c = explicit_u(1.0);
  c.u_rule.kind = URule::Kind::power;
  c.u_rule.value = 0.1;
  const Increments inc(std::vector<double>(10, 0.0), std::vector<double>(10, 0.0), 1.0);
  CHECK_THROWS_AS(resolve_u(c, inc), ValidationError);
}

TEST_CASE("configuration validation")
{
  auto field_of = [](const EstimatorConfig& c) {
    try {
      c.validate();
    } catch (const ValidationError& e) {
      return e.field();
    }
    return std::string();
  };
  EstimatorConfig c;
  CHECK(field_of(c).empty());
  c.f_ja = "drift_erf";
  CHECK(field_of(c) == "estimator.f_ja");
  c = EstimatorConfig{};
  c.f_drift = "missing";
  CHECK(field_of(c) == "estimator.f_drift");
  c = EstimatorConfig{};
  c.f_sigma2 = "ja_bump";
  CHECK(field_of(c) == "estimator.f_sigma2");
  c = EstimatorConfig{};
  c.gamma = 1.0;
  CHECK(field_of(c) == "estimator.gamma");
  c = EstimatorConfig{};
  c.kernel.bandwidth = 0.0;
  CHECK(field_of(c) == "estimator.bandwidth");
  c = EstimatorConfig{};
  c.x_grid.clear();
  CHECK(field_of(c) == "estimator.x_grid");
}

TEST_CASE("density estimate")
{
  const std::vector<double> level{ -1.0, -0.2, 0.0, 0.1, 0.45, 3.0 };
  const Increments inc(level, std::vector<double>(level.size(), 0.0), 0.1);
  KernelSpec k;
  k.bandwidth = 0.5;
  double s = 0.0;
  for (double l : level)
    if (std::abs(l) <= 0.5)
      s += 0.75 * (1 - (l / 0.5) * (l / 0.5)) / 0.5;
  CHECK(density_hat(inc, k, 0.0) == doctest::Approx(s / 6.0).epsilon(1e-15));
  CHECK(density_hat(inc, k, 10.0) == 0.0);
}

TEST_CASE("jump activity estimate on stable increments")
{
  for (double a : { 1.5, 1.8 }) {
    // u h^(1/alpha) must be small for the small-time expansion to hold
    const auto inc = stable_sample(a, 1.0, 1e-7, 1000000);
    auto c = explicit_u(50.0);
    const auto p = alpha_hat(inc, c, 0.0);
    INFO("alpha = " << a << ", estimate = " << p.value << ", sd = " << p.sd);
    REQUIRE(p.ok());
    CHECK(p.count == 1000000);
    CHECK(std::abs(p.value - a) < 4 * p.sd + 0.02);
    CHECK(p.sd < 0.1);

    // the internal scale exponent cancels
    const auto base = alpha_ratio(inc, c.kernel, design_function_by_name("ja_bump"), 2.0, 50.0, 0.0);
    for (double e : { 0.5, 1.3, 1.9 })
      CHECK(alpha_ratio(inc, c.kernel, design_function_by_name("ja_bump"), 2.0, 50.0, 0.0, 10, e).value ==
            base.value);
    CHECK(base.value == p.value);
  }
}

TEST_CASE("plug-in sd tracks the replicate spread")
{
  const double a = 1.8, h = 1e-7;
  const int reps = 40;
  const std::size_t n = 200000;
  const auto c = explicit_u(50.0);
  std::vector<double> est;
  double sd_sum = 0.0;
  for (int rep = 0; rep < reps; ++rep) {
    RngStream rng(303, static_cast<std::uint64_t>(rep));
    const double scale = stable_scale(a, 1.0, h);
    std::vector<double> level(n), delta(n);
    for (std::size_t i = 0; i < n; ++i) {
      level[i] = rng.uniform() - 0.5;
      delta[i] = sample_sas(a, scale, rng);
    }
    const auto p = alpha_hat(Increments(level, delta, h), c, 0.0);
    REQUIRE(p.ok());
    est.push_back(p.value);
    sd_sum += p.sd;
  }
  double m = 0.0, v = 0.0;
  for (double e : est)
    m += e / reps;
  for (double e : est)
    v += (e - m) * (e - m) / (reps - 1);
  const double ratio = std::sqrt(v) / (sd_sum / reps);
  INFO("empirical / plug-in = " << ratio);
  CHECK(ratio > 0.6);
  CHECK(ratio < 1.6);
}

TEST_CASE("ratio estimators ignore observations outside the window")
{
  auto inc = stable_sample(1.7, 1.0, 1e-4, 50000);
  auto level = inc.level();
  auto delta = inc.delta();
  RngStream rng(5, 5);
  for (int i = 0; i < 20000; ++i) {
    level.push_back(3.0 + rng.uniform());
    delta.push_back(rng.normal());
  }
  const Increments more(level, delta, inc.mesh());
  const auto c = explicit_u(10.0);
  CHECK(alpha_hat(more, c, 0.0).value == alpha_hat(inc, c, 0.0).value);
  CHECK(mu_hat(more, c, 0.0).value == mu_hat(inc, c, 0.0).value);
  CHECK(sigma2_hat(more, c, 0.0, 20.0).value == sigma2_hat(inc, c, 0.0, 20.0).value);
  CHECK(density_hat(more, c.kernel, 0.0) < density_hat(inc, c.kernel, 0.0));
}

TEST_CASE("jump intensity estimate")
{
  const auto inc = stable_sample(1.6, 0.7, 1e-7, 1000000);
  auto c = explicit_u(50.0);
  c.normalize_rstar_by_mhat = true;
  const auto p = rstar_hat(inc, c, 0.0);
  REQUIRE(p.ok());
  CHECK(std::abs(p.value - 0.7) < 4 * p.sd + 0.05);
  const auto pa = alpha_hat(inc, c, 0.0);
  CHECK(p.sd == doctest::Approx(std::abs(p.value) * std::log(50.0) * pa.sd).epsilon(1e-14));

  c.normalize_rstar_by_mhat = false;
  const auto q = rstar_hat(inc, c, 0.0);
  CHECK(q.value == doctest::Approx(p.value * p.mhat).epsilon(1e-12));
}

TEST_CASE("drift estimates")
{
  const auto inc = gaussian_sample(1.0, 1e-3, 400000);
  const auto c = explicit_u(10.0);
  for (double x : { -1.0, 0.0, 1.0 }) {
    const auto p = mu_hat(inc, c, x);
    const auto pf = mu_hat(inc, c, x, 10.0);
    INFO("x = " << x);
    REQUIRE(p.ok());
    CHECK(std::abs(p.value + x) < 4 * p.sd + 0.05);
    CHECK(std::abs(pf.value + x) < 4 * pf.sd + 0.05);
    CHECK(p.mhat == doctest::Approx(density_hat(inc, c.kernel, x)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(mu_hat(inc, c, 0.0, 0.5), DomainError);
}

TEST_CASE("volatility estimate")
{
  const auto inc = gaussian_sample(2.0, 1e-6, 200000);
  const auto c = explicit_u(10.0);
  for (double x : { -1.0, 0.0, 1.0 }) {
    const auto p = sigma2_hat(inc, c, x, 20.0);
    INFO("x = " << x);
    REQUIRE(p.ok());
    CHECK(std::abs(p.value - 2.0) < 4 * p.sd + 0.01);
  }
  CHECK_THROWS_AS(sigma2_hat(inc, c, 0.0, 1.0), DomainError);
}

TEST_CASE("failure statuses")
{
  const auto c = explicit_u(10.0);
  const Increments far(std::vector<double>(100, 5.0), std::vector<double>(100, 0.1), 1e-3);
  CHECK(alpha_hat(far, c, 0.0).status == EstimateStatus::degenerate_denominator);
  CHECK(mu_hat(far, c, 0.0).status == EstimateStatus::degenerate_denominator);

  const Increments few(std::vector<double>(5, 0.0), std::vector<double>(5, 0.1), 1e-3);
  CHECK(alpha_hat(few, c, 0.0).status == EstimateStatus::degenerate_denominator);

  // increments too small for the bump to see
  const Increments quiet(std::vector<double>(100, 0.0), std::vector<double>(100, 1e-5), 1e-3);
  CHECK(alpha_hat(quiet, c, 0.0).status == EstimateStatus::log_domain_violation);
  CHECK(rstar_hat(quiet, c, 0.0).status == EstimateStatus::log_domain_violation);

  // only f(u dX) vanishes: the clamped estimate sits at the upper end
  std::vector<double> d(100, 0.0075);
  const Increments edge(std::vector<double>(100, 0.0), d, 1e-3);
  auto cc = c;
  cc.clamp_alpha = true;
  const auto p = alpha_hat(edge, cc, 0.0);
  CHECK(p.value == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(p.value < 2.0);
  CHECK(alpha_hat(edge, c, 0.0).status == EstimateStatus::log_domain_violation);
}

TEST_CASE("curves")
{
  const auto inc = stable_sample(1.7, 1.0, 1e-4, 50000);
  auto c = explicit_u(10.0);
  c.x_grid = { -0.1, 0.0, 0.2 };
  const auto curves = estimate_curves(inc, c, curve_names());
  CHECK(curves.size() == 5);
  for (const auto& [name, curve] : curves) {
    CHECK(curve.size() == 3);
    CHECK(curve[1].x == 0.0);
  }
  CHECK(curves.at("alpha")[0].value == alpha_hat(inc, c, -0.1).value);
  CHECK_THROWS_AS(estimate_curves(inc, c, { "beta" }), ValidationError);
}

TEST_CASE("rate audit")
{
  const auto a = audit_rates(10.0, 0.5, 1e-4, 3.0, 1.9, 1.9);
  CHECK(a.p_bias_generator == doctest::Approx(10 * 0.5 * 1e-8 * std::pow(3.0, 6.1)).epsilon(1e-14));
  CHECK(a.p_bias_perturbation == doctest::Approx(10 * 0.5 * std::pow(3.0, -1.9)).epsilon(1e-14));
  CHECK(a.p_bias_kernel == doctest::Approx(10 * 0.125 * std::pow(3.0, 1.9) * std::log(3.0) * std::log(3.0)).epsilon(1e-14));
  CHECK(a.warnings.size() == 1);
}
