#include "jumpdiff/model.hpp"

#include "jumpdiff/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace jumpdiff {

std::string to_string(TailKind kind)
{
  switch (kind) {
    case TailKind::pure_stable:
      return "pure_stable";
    case TailKind::capped:
      return "capped";
    case TailKind::compound_poisson_t:
      return "compound_poisson_t";
  }
  return "unknown";
}

double student_t_pdf(double z, double dof)
{
  const double lc = std::lgamma(0.5 * (dof + 1.0)) - std::lgamma(0.5 * dof) -
                    0.5 * std::log(dof * std::numbers::pi);
  return std::exp(lc - 0.5 * (dof + 1.0) * std::log1p(z * z / dof));
}

ModelSpec build_example_model()
{
  ModelSpec m;
  m.name = "example";
  m.mu = make_formula("linear", { { "intercept", 0.0 }, { "slope", -1.0 } });
  m.sigma2 = StateFunction::constant(1.0);
  m.jumps.alpha = make_formula("arctan_sq", { { "base", 1.9 }, { "scale", 1.0 } });
  m.jumps.r = StateFunction::constant(1.0);
  // The t component is |z|^(1+alpha) small at 0 and |z|^(alpha-1.2) at
  // infinity relative to the stable core, so any delta >= alpha - 1.2 works.
  m.jumps.delta = make_formula("arctan_sq", { { "base", 0.75 * 1.9 }, { "scale", 0.75 } });
  m.jumps.tail.kind = TailKind::compound_poisson_t;
  m.jumps.tail.dof = 1.2;
  m.jumps.tail.intensity = 1.0;
  m.jumps.tail_exponent = 1.2;
  // On |z| >= 1: |z|^(-1-alpha) <= |z|^(-2.2) and the t(1.2) density is
  // below 0.41 |z|^(-2.2).
  m.jumps.density_bound = 1.5;
  return m;
}

ModelSpec build_capped_model(double alpha0,
                             const StateFunction& alpha,
                             const StateFunction& mu,
                             const StateFunction& sigma2)
{
  if (!(alpha0 > 0.0 && alpha0 < 2.0))
    throw ValidationError("alpha0", "must lie in (0, 2)");
  for (double x : audit_x_grid()) {
    const double a = alpha(x);
    if (!(a > 0.0))
      throw ValidationError("alpha", "must be positive on the audit grid");
    if (!(a < alpha0))
      throw ValidationError("alpha", "must stay below alpha0 on the audit grid (x = " +
                                       std::to_string(x) + ")");
  }
  ModelSpec m;
  m.name = "capped";
  m.mu = mu;
  m.sigma2 = sigma2;
  m.jumps.alpha = alpha;
  m.jumps.r = alpha;
  m.jumps.delta = alpha;
  m.jumps.tail.kind = TailKind::capped;
  m.jumps.tail.alpha0 = alpha0;
  m.jumps.tail_exponent = alpha0;
  m.jumps.density_bound = alpha0;
  return m;
}

double tail_density(const TailSpec& tail, double z)
{
  const double az = std::abs(z);
  switch (tail.kind) {
    case TailKind::pure_stable:
      return 0.0;
    case TailKind::capped:
      return az > 1.0 ? tail.alpha0 * std::pow(az, -1.0 - tail.alpha0) : 0.0;
    case TailKind::compound_poisson_t:
      return tail.intensity * student_t_pdf(az, tail.dof);
  }
  return 0.0;
}

double jump_density(const ModelSpec& model, double x, double z)
{
  if (z == 0.0)
    throw DomainError("jump_density: z = 0 is a non-integrable singularity");
  const auto& j = model.jumps;
  const double az = std::abs(z);
  const double a = j.alpha(x);
  if (j.tail.kind == TailKind::capped) {
    if (az > 1.0)
      return tail_density(j.tail, az);
    return a * std::pow(az, -1.0 - a);
  }
  const double r = j.r(x);
  double core = 0.0;
  if (r != 0.0) {
    core = r * std::pow(az, -1.0 - a);
    if (j.g)
      core *= 1.0 + j.g(x, z);
  }
  return core + tail_density(j.tail, az);
}

std::vector<double> audit_x_grid()
{
  std::vector<double> xs(101);
  for (int i = 0; i <= 100; ++i)
    xs[i] = -5.0 + 0.1 * i;
  return xs;
}

std::vector<double> audit_z_grid(std::size_t points)
{
  std::vector<double> zs(points);
  const double l0 = std::log(1e-3), l1 = std::log(100.0);
  for (std::size_t i = 0; i < points; ++i)
    zs[i] = std::exp(l0 + (l1 - l0) * static_cast<double>(i) / static_cast<double>(points - 1));
  return zs;
}

namespace {

double derivative_gap(const StateFunction& f, double x)
{
  double worst = 0.0;
  if (f.has_analytic_d1()) {
    const double h = StateFunction::fd_step;
    const double fd = (f(x + h) - f(x - h)) / (2.0 * h);
    worst = std::max(worst, std::abs(f.d1(x) - fd) / std::max(1.0, std::abs(fd)));
  }
  if (f.has_analytic_d2()) {
    const double h = 1e-4;
    const double fd = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
    worst = std::max(worst, std::abs(f.d2(x) - fd) / std::max(1.0, std::abs(fd)));
  }
  return worst;
}

} // namespace

ModelAudit audit_model(const ModelSpec& model)
{
  ModelAudit a;
  const auto& j = model.jumps;
  const auto xs = audit_x_grid();
  const auto zs = audit_z_grid();
  a.alpha_min = a.sigma2_min = a.r_min = INFINITY;
  a.alpha_max = a.delta_excess = -INFINITY;

  for (double x : xs) {
    const double al = j.alpha(x);
    a.alpha_min = std::min(a.alpha_min, al);
    a.alpha_max = std::max(a.alpha_max, al);
    a.sigma2_min = std::min(a.sigma2_min, model.sigma2(x));
    a.r_min = std::min(a.r_min, j.r(x));
    a.delta_excess = std::max(a.delta_excess, j.delta(x) - al);
    for (const auto* f : { &model.mu, &model.sigma2, &j.alpha, &j.r, &j.delta })
      a.derivative_mismatch = std::max(a.derivative_mismatch, derivative_gap(*f, x));
  }

  for (std::size_t i = 0; i < xs.size(); i += 2) {
    const double x = xs[i];
    const double dl = j.delta(x);
    for (double z : zs) {
      a.symmetry_residual =
        std::max(a.symmetry_residual, std::abs(jump_density(model, x, z) - jump_density(model, x, -z)));
      if (z >= 1.0) {
        const double bound = j.density_bound * std::pow(z, -1.0 - j.tail_exponent);
        a.tail_bound_ratio = std::max(a.tail_bound_ratio, jump_density(model, x, z) / bound);
      }
      if (j.g) {
        const double gp = j.g(x, z), gm = j.g(x, -z);
        a.perturbation_asymmetry = std::max(a.perturbation_asymmetry, std::abs(gp - gm));
        if (z <= 1.0) {
          const double bound = j.perturbation_bound * std::pow(z, dl);
          a.perturbation_ratio = std::max(a.perturbation_ratio, std::abs(gp) / bound);
        }
      }
    }
  }

  auto flag = [&](bool bad, const std::string& msg) {
    if (bad)
      a.violations.push_back(msg);
  };
  flag(!(a.alpha_min > 0.0 && a.alpha_max < 2.0), "alpha leaves (0, 2)");
  flag(!(a.sigma2_min >= 0.0), "sigma2 is negative");
  flag(!(a.r_min >= 0.0), "r is negative");
  flag(!(a.delta_excess <= 0.0), "delta exceeds alpha");
  flag(a.symmetry_residual != 0.0, "jump density is not symmetric in z");
  flag(!(a.tail_bound_ratio <= 1.0), "tail bound C_rho |z|^(-1-tau) violated");
  flag(a.perturbation_asymmetry != 0.0, "perturbation g is not symmetric in z");
  flag(!(a.perturbation_ratio <= 1.0), "perturbation bound C_g |z|^delta violated");
  flag(!(a.derivative_mismatch <= 1e-4), "analytic derivatives disagree with central differences");
  return a;
}

void validate_model(const ModelSpec& model)
{
  const auto a = audit_model(model);
  if (!(a.alpha_min > 0.0 && a.alpha_max < 2.0))
    throw ValidationError("model.alpha", "must lie in (0, 2) on the audit grid");
  if (!(a.sigma2_min >= 0.0))
    throw ValidationError("model.sigma2", "must be nonnegative on the audit grid");
  if (!(a.r_min >= 0.0))
    throw ValidationError("model.r", "must be nonnegative on the audit grid");
  if (a.symmetry_residual != 0.0 || a.perturbation_asymmetry != 0.0)
    throw ValidationError("model.jumps", "jump density must be symmetric in z");
  const auto& t = model.jumps.tail;
  if (t.kind == TailKind::compound_poisson_t && !(t.intensity >= 0.0 && t.dof > 0.0))
    throw ValidationError("model.tail", "intensity must be >= 0 and dof > 0");
  if (t.kind == TailKind::capped && !(t.alpha0 > 0.0 && t.alpha0 < 2.0))
    throw ValidationError("model.tail.alpha0", "must lie in (0, 2)");
}

LevyRestriction freeze(const ModelSpec& model, double x)
{
  LevyRestriction l;
  l.mu = model.mu(x);
  l.sigma2 = model.sigma2(x);
  l.alpha = model.jumps.alpha(x);
  l.r = model.jumps.r(x);
  l.tail = model.jumps.tail;
  return l;
}

ModelSpec as_model(const LevyRestriction& levy)
{
  ModelSpec m;
  m.name = "levy";
  m.mu = StateFunction::constant(levy.mu);
  m.sigma2 = StateFunction::constant(levy.sigma2);
  m.jumps.alpha = StateFunction::constant(levy.alpha);
  m.jumps.r = StateFunction::constant(levy.r);
  m.jumps.delta = StateFunction::constant(levy.alpha);
  m.jumps.tail = levy.tail;
  switch (levy.tail.kind) {
    case TailKind::pure_stable:
      m.jumps.tail_exponent = levy.alpha;
      m.jumps.density_bound = std::max(levy.r, 1e-300);
      break;
    case TailKind::capped:
      m.jumps.tail_exponent = levy.tail.alpha0;
      m.jumps.density_bound = levy.tail.alpha0;
      break;
    case TailKind::compound_poisson_t:
      m.jumps.tail_exponent = std::min(levy.alpha, levy.tail.dof);
      m.jumps.density_bound = levy.r + levy.tail.intensity;
      break;
  }
  return m;
}

} // namespace jumpdiff
