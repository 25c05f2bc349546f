#include <doctest.h>

#include "jumpdiff/errors.hpp"
#include "jumpdiff/functionals.hpp"
#include "jumpdiff/levy_oracle.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

using namespace jumpdiff;

namespace {

DesignFunction cosine(double w)
{
  return DesignFunction(
    "cos", FunctionClass::F_doubleprime, 0.0,
    { [w](double x) { return std::cos(w * x); }, [w](double x) { return -w * std::sin(w * x); },
      [w](double x) { return -w * w * std::cos(w * x); },
      [w](double x) { return w * w * w * std::sin(w * x); },
      [w](double x) { return w * w * w * w * std::cos(w * x); } });
}

double c_alpha(double a)
{
  return 2.0 / a * std::tgamma(1.0 - a) * std::cos(0.5 * std::numbers::pi * a);
}

// Re E exp(i w T) for T ~ t(dof), by quadrature over 1000 periods.
double t_cf_oracle(double w, double dof)
{
  const double period = 2 * std::numbers::pi / w;
  double s = 0;
  for (int k = 0; k < 1000; ++k)
    s += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [&](double z) { return std::cos(w * z) * student_t_pdf(z, dof); }, k * period, (k + 1) * period, 10,
      1e-14);
  return 2 * s;
}

// E f(m + s N) by Gauss-Kronrod over +-12 sd.
double gauss_expectation(const DesignFunction& f, double m, double s)
{
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
    [&](double z) {
      return f(m + s * z) * std::exp(-0.5 * z * z) / std::sqrt(2 * std::numbers::pi);
    },
    -12.0, 12.0, 20, 1e-14);
}

} // namespace

TEST_CASE("characteristic function")
{
  LevyRestriction g;
  g.mu = 0.3;
  g.sigma2 = 2.0;
  g.r = 0.0;
  const auto phi = levy_char_fn(g, 0.5, 1.7);
  const auto expect = std::exp(std::complex<double>(-0.5 * 2.0 * 0.5 * 1.7 * 1.7, 0.3 * 0.5 * 1.7));
  CHECK(std::abs(phi - expect) < 1e-15);

  LevyRestriction s;
  s.alpha = 1.8;
  s.r = 1.3;
  CHECK(levy_char_fn(s, 0.1, 2.0).real() ==
        doctest::Approx(std::exp(-0.1 * 1.3 * c_alpha(1.8) * std::pow(2.0, 1.8))).epsilon(1e-11));
  CHECK(levy_char_fn(s, 0.1, -2.0) == levy_char_fn(s, 0.1, 2.0));

  LevyRestriction t;
  t.r = 0.0;
  t.tail.kind = TailKind::compound_poisson_t;
  t.tail.dof = 1.2;
  t.tail.intensity = 1.0;
  for (double w : { 0.5, 2.0 }) {
    const double expect_t = std::exp(0.7 * (t_cf_oracle(w, 1.2) - 1.0));
    CHECK(std::abs(levy_char_fn(t, 0.7, w).real() - expect_t) < 2e-8);
    CHECK(std::abs(levy_char_fn(t, 0.7, w).imag()) < 1e-15);
  }
  CHECK(levy_char_fn(t, 0.7, 0.0) == std::complex<double>(1.0, 0.0));
}

TEST_CASE("gaussian moments")
{
  LevyRestriction g;
  g.mu = -1.0;
  g.sigma2 = 1.0;
  g.r = 0.0;
  const auto f = builtin_drift_f();
  for (double h : { 1e-3, 1e-2, 0.1 })
    for (double u : { 1.0, 5.0 }) {
      const auto fu = rescale(f, u);
      const auto mom = levy_moments(g, f, u, h);
      const double m = gauss_expectation(fu, -h, std::sqrt(h));
      const double m2 = gauss_expectation(square(fu), -h, std::sqrt(h));
      INFO("h = " << h << ", u = " << u);
      CHECK(mom.mean == doctest::Approx(m).epsilon(1e-9));
      CHECK(mom.second_moment == doctest::Approx(m2).epsilon(1e-9));
      CHECK(mom.variance == doctest::Approx(m2 - m * m).epsilon(1e-8));
      CHECK(mom.grid_mass == 1.0);
    }
}

TEST_CASE("moments of a cosine recover the characteristic function")
{
  // Without the aliasing correction the error is bounded by twice the jump
  // mass outside the span.
  OracleSettings plain;
  plain.fold_periods = 0;
  LevyRestriction l;
  l.mu = 0.2;
  l.sigma2 = 0.5;
  l.alpha = 1.8;
  l.r = 1.0;
  l.tail.kind = TailKind::compound_poisson_t;
  l.tail.dof = 1.2;
  l.tail.intensity = 1.0;
  for (double h : { 1e-3, 1e-2 })
    for (double w : { 1.0, 7.0 }) {
      const auto mom = levy_moments(l, cosine(w), 1.0, h, plain);
      INFO("h = " << h << ", w = " << w);
      const double bound = 2 * (1 - mom.grid_mass) + 1e-10;
      CHECK(std::abs(mom.mean - levy_char_fn(l, h, w).real()) < bound);
      CHECK(std::abs(mom.second_moment - 0.5 * (1 + levy_char_fn(l, h, 2 * w).real())) < bound);
      CHECK(mom.grid_mass > 1 - 1e-6);
    }

  LevyRestriction s;
  s.alpha = 1.8;
  s.r = 1.0;
  s.sigma2 = 0.0;
  const auto mom = levy_moments(s, cosine(3.0), 1.0, 1e-3, plain);
  CHECK(std::abs(mom.mean - std::exp(-1e-3 * c_alpha(1.8) * std::pow(3.0, 1.8))) < 2 * (1 - mom.grid_mass));
}

TEST_CASE("aliasing correction agrees with a wider grid")
{
  const auto l = freeze(build_example_model(), 0.0);
  OracleSettings wide;
  wide.grid_points = std::size_t{ 1 } << 22;
  wide.tail_mass = 1e-8;
  for (double u : { 1.0, 3.0 }) {
    const auto f = builtin_drift_f();
    const auto a = levy_moments(l, f, u, 1e-3);
    const auto b = levy_moments(l, f, u, 1e-3, wide);
    INFO("u = " << u);
    CHECK(b.half_span > a.half_span);
    CHECK(std::abs(a.mean - b.mean) < 1e-10);
    CHECK(std::abs(a.second_moment - b.second_moment) < 1e-10);
  }
}

TEST_CASE("small-time expansion")
{
  const auto m = build_example_model();
  const auto l = freeze(m, 0.0);
  const auto model = as_model(l);
  const auto f = builtin_ja_f();
  const double gen = gen_star(model, f, 1.0, 0.0);
  double prev = INFINITY;
  for (double h : { 1e-2, 1e-3, 1e-4 }) {
    const double err = std::abs(levy_expectation(l, f, 1.0, h) - h * gen);
    CHECK(err < prev * 0.1);
    prev = err;
  }
}

TEST_CASE("unsupported laws")
{
  const auto f = builtin_drift_f();
  const auto capped = freeze(build_capped_model(1.8, StateFunction::constant(1.5), StateFunction::constant(0.0),
                                                StateFunction::constant(1.0)),
                             0.0);
  CHECK_THROWS_AS(levy_moments(capped, f, 1.0, 1e-3), DomainError);

  LevyRestriction cp;
  cp.r = 0.0;
  cp.sigma2 = 0.0;
  cp.tail.kind = TailKind::compound_poisson_t;
  cp.tail.intensity = 1.0;
  CHECK_THROWS_AS(levy_moments(cp, f, 1.0, 1e-3), GridResolutionError);

  LevyRestriction g;
  g.sigma2 = 1.0;
  g.r = 0.0;
  OracleSettings coarse;
  coarse.grid_points = 64;
  CHECK_THROWS_AS(levy_moments(g, f, 100.0, 1.0, coarse), GridResolutionError);
}
