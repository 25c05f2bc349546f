#include "jumpdiff/estimators.hpp"

#include "jumpdiff/errors.hpp"
#include "jumpdiff/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace jumpdiff {

std::string to_string(KernelShape shape)
{
  switch (shape) {
    case KernelShape::epanechnikov:
      return "epanechnikov";
    case KernelShape::uniform:
      return "uniform";
    case KernelShape::triangular:
      return "triangular";
  }
  return "unknown";
}

KernelShape kernel_shape_from_string(const std::string& name)
{
  if (name == "epanechnikov")
    return KernelShape::epanechnikov;
  if (name == "uniform")
    return KernelShape::uniform;
  if (name == "triangular")
    return KernelShape::triangular;
  throw ValidationError("estimator.kernel", "unknown kernel '" + name + "'");
}

std::string to_string(EstimateStatus status)
{
  switch (status) {
    case EstimateStatus::ok:
      return "ok";
    case EstimateStatus::degenerate_denominator:
      return "degenerate_denominator";
    case EstimateStatus::log_domain_violation:
      return "log_domain_violation";
  }
  return "unknown";
}

double KernelSpec::unit(double y) const
{
  const double a = std::abs(y);
  if (a > 1.0)
    return 0.0;
  switch (shape) {
    case KernelShape::epanechnikov:
      return 0.75 * (1.0 - y * y);
    case KernelShape::uniform:
      return 0.5;
    case KernelShape::triangular:
      return 1.0 - a;
  }
  return 0.0;
}

double KernelSpec::integral_g2() const
{
  switch (shape) {
    case KernelShape::epanechnikov:
      return 0.6;
    case KernelShape::uniform:
      return 0.5;
    case KernelShape::triangular:
      return 2.0 / 3.0;
  }
  return 0.0;
}

double URule::resolve(double T, double b, double h) const
{
  if (kind == Kind::explicit_value)
    return value;
  return std::pow(T * b * h * h, -value);
}

void EstimatorConfig::validate() const
{
  if (!(kernel.bandwidth > 0.0) || !std::isfinite(kernel.bandwidth))
    throw ValidationError("estimator.bandwidth", "must be positive and finite");
  if (!(gamma > 0.0) || gamma == 1.0 || !std::isfinite(gamma))
    throw ValidationError("estimator.gamma", "must be positive, finite and != 1");
  if (u_rule.kind == URule::Kind::explicit_value && !(u_rule.value >= 1.0))
    throw ValidationError("estimator.u_rule.value", "explicit u must be >= 1");
  if (u_rule.kind == URule::Kind::power && !(u_rule.value >= 0.0 && std::isfinite(u_rule.value)))
    throw ValidationError("estimator.u_rule.exponent", "must be finite and >= 0");
  if (x_grid.empty())
    throw ValidationError("estimator.x_grid", "must not be empty");
  for (double x : x_grid)
    if (!std::isfinite(x))
      throw ValidationError("estimator.x_grid", "entries must be finite");
  if (!(u_filtered >= 1.0))
    throw ValidationError("estimator.u_filtered", "must be >= 1");
  if (!(u_sigma2 > 1.0))
    throw ValidationError("estimator.u_sigma2", "must be > 1");
  if (min_count < 1)
    throw ValidationError("estimator.min_count", "must be >= 1");
  auto check_f = [](const std::string& name, const char* field, FunctionClass want) {
    DesignFunction f = [&] {
      try {
        return design_function_by_name(name);
      } catch (const ValidationError&) {
        throw ValidationError(field, "unknown design function '" + name + "'");
      }
    }();
    if (f.klass() != want)
      throw ValidationError(field, "design function '" + name + "' must be of class " + to_string(want));
  };
  check_f(f_ja, "estimator.f_ja", FunctionClass::F);
  check_f(f_drift, "estimator.f_drift", FunctionClass::F_prime);
  check_f(f_sigma2, "estimator.f_sigma2", FunctionClass::F_doubleprime);
}

Increments::Increments(const PathSample& path)
  : mesh_(path.mesh())
{
  const auto& v = path.values;
  if (v.size() < 2)
    throw ValidationError("path", "need at least two observations");
  level_.assign(v.begin(), v.end() - 1);
  delta_.resize(level_.size());
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    delta_[i] = v[i + 1] - v[i];
}

Increments::Increments(std::vector<double> level, std::vector<double> delta, double mesh)
  : level_(std::move(level))
  , delta_(std::move(delta))
  , mesh_(mesh)
{
  if (level_.size() != delta_.size() || level_.empty())
    throw ValidationError("path", "levels and increments must have equal nonzero length");
  if (!(mesh_ > 0.0))
    throw ValidationError("path", "mesh must be positive");
}

namespace {

// Visits the observations inside the kernel window, in index order.
template<class Fn>
std::size_t for_window(const Increments& inc, const KernelSpec& k, double x, Fn&& fn)
{
  const auto& lv = inc.level();
  const auto& dl = inc.delta();
  const double b = k.bandwidth;
  std::size_t count = 0;
  for (std::size_t i = 0; i < lv.size(); ++i) {
    const double d = lv[i] - x;
    if (std::abs(d) > b)
      continue;
    ++count;
    fn(k(d), dl[i]);
  }
  return count;
}

struct AlphaSums
{
  double sw = 0.0;
  double s1 = 0.0;
  double sg = 0.0;
  std::size_t count = 0;
};

AlphaSums alpha_sums(const Increments& inc,
                     const KernelSpec& kernel,
                     const DesignFunction& f,
                     double gamma,
                     double u,
                     double x)
{
  const auto fu = f.rescaled(u);
  const auto fg = fu.rescaled(gamma);
  AlphaSums s;
  s.count = for_window(inc, kernel, x, [&](double w, double d) {
    s.sw += w;
    s.s1 += w * fu(d);
    s.sg += w * fg(d);
  });
  return s;
}

PointEstimate alpha_from_sums(const AlphaSums& s,
                              double gamma,
                              double x,
                              double n,
                              std::size_t min_count)
{
  PointEstimate p;
  p.x = x;
  p.count = s.count;
  p.mhat = s.sw / n;
  if (s.count < min_count || !(s.sw > 0.0)) {
    p.status = EstimateStatus::degenerate_denominator;
    return p;
  }
  if (!(s.s1 > 0.0) || !(s.sg > 0.0)) {
    p.status = EstimateStatus::log_domain_violation;
    return p;
  }
  p.value = -std::log(s.s1 / s.sg) / std::log(gamma);
  p.status = EstimateStatus::ok;
  return p;
}

// Level at which plug-in functionals are evaluated for a raw alpha estimate.
double plugin_alpha(double a)
{
  return std::clamp(a, 0.05, 1.995);
}

constexpr double clamp_eps = 1e-6;

// Nadaraya-Watson mean of F over the window with its sandwich standard error.
PointEstimate nw_mean(const Increments& inc,
                      const KernelSpec& kernel,
                      double x,
                      std::size_t min_count,
                      const std::function<double(double)>& F)
{
  std::vector<std::pair<double, double>> terms;
  double sw = 0.0, sf = 0.0;
  const std::size_t count = for_window(inc, kernel, x, [&](double w, double d) {
    const double v = F(d);
    terms.emplace_back(w, v);
    sw += w;
    sf += w * v;
  });
  PointEstimate p;
  p.x = x;
  p.count = count;
  p.mhat = sw / static_cast<double>(inc.size());
  if (count < min_count || !(sw > 0.0)) {
    p.status = EstimateStatus::degenerate_denominator;
    return p;
  }
  p.value = sf / sw;
  double ss = 0.0;
  for (const auto& [w, v] : terms)
    ss += w * w * (v - p.value) * (v - p.value);
  p.sd = std::sqrt(ss) / sw;
  p.status = EstimateStatus::ok;
  return p;
}

} // namespace

double density_hat(const Increments& inc, const KernelSpec& kernel, double x)
{
  double sw = 0.0;
  for_window(inc, kernel, x, [&](double w, double) { sw += w; });
  return sw / static_cast<double>(inc.size());
}

double density_hat(const PathSample& path, const KernelSpec& kernel, double x)
{
  return density_hat(Increments(path), kernel, x);
}

double resolve_u(const EstimatorConfig& config, const Increments& inc)
{
  const double u = config.u_rule.resolve(inc.horizon(), config.kernel.bandwidth, inc.mesh());
  if (!(u >= 1.0) || !std::isfinite(u))
    throw ValidationError("estimator.u_rule", "resolved u = " + std::to_string(u) + " is below 1");
  return u;
}

PointEstimate ratio_stat(const Increments& inc,
                         const EstimatorConfig& config,
                         const DesignFunction& f,
                         double u,
                         double a,
                         double x)
{
  const auto fu = f.rescaled(u);
  double sw = 0.0, sf = 0.0;
  PointEstimate p;
  p.x = x;
  p.count = for_window(inc, config.kernel, x, [&](double w, double d) {
    sw += w;
    sf += w * fu(d);
  });
  p.mhat = sw / static_cast<double>(inc.size());
  if (p.count < config.min_count || !(sw > 0.0)) {
    p.status = EstimateStatus::degenerate_denominator;
    return p;
  }
  p.value = sf / (sw * inc.mesh() * std::pow(u, a));
  p.status = EstimateStatus::ok;
  return p;
}

PointEstimate alpha_ratio(const Increments& inc,
                          const KernelSpec& kernel,
                          const DesignFunction& f,
                          double gamma,
                          double u,
                          double x,
                          std::size_t min_count,
                          double a)
{
  // The common factor h u^a of both ratio statistics cancels; the estimate is
  // formed from the raw kernel sums.
  (void)a;
  const auto s = alpha_sums(inc, kernel, f, gamma, u, x);
  return alpha_from_sums(s, gamma, x, static_cast<double>(inc.size()), min_count);
}

PointEstimate alpha_hat(const Increments& inc, const EstimatorConfig& config, double x)
{
  const auto f = design_function_by_name(config.f_ja);
  const double u = resolve_u(config, inc);
  const auto s = alpha_sums(inc, config.kernel, f, config.gamma, u, x);
  auto p = alpha_from_sums(s, config.gamma, x, static_cast<double>(inc.size()), config.min_count);

  if (p.status == EstimateStatus::log_domain_violation && config.clamp_alpha && s.sw > 0.0) {
    if (s.s1 <= 0.0 && s.sg > 0.0)
      p.value = 2.0 - clamp_eps;
    else if (s.sg <= 0.0 && s.s1 > 0.0)
      p.value = clamp_eps;
  }
  if (!p.ok())
    return p;

  const double ap = plugin_alpha(p.value);
  const double h = inc.mesh();
  const double fa = frac_functional(f, ap).value;
  const double r_hat = s.s1 / (s.sw * h * std::pow(u, ap) * fa);
  const double Tb = inc.horizon() * config.kernel.bandwidth;
  try {
    p.sd = alpha_clt_sd(config.gamma, ap, r_hat, p.mhat, f, config.kernel.integral_g2(),
                        Tb * std::pow(u, ap));
  } catch (const DomainError&) {
    p.sd = std::numeric_limits<double>::quiet_NaN();
  }
  if (!(p.sd > 0.0) || !std::isfinite(p.sd))
    p.status = EstimateStatus::degenerate_denominator;
  if (config.clamp_alpha)
    p.value = std::clamp(p.value, clamp_eps, 2.0 - clamp_eps);
  return p;
}

PointEstimate rstar_hat(const Increments& inc, const EstimatorConfig& config, double x)
{
  auto pa = alpha_hat(inc, config, x);
  PointEstimate p;
  p.x = x;
  p.count = pa.count;
  p.mhat = pa.mhat;
  p.status = pa.status;
  if (!pa.ok())
    return p;
  double a = pa.value;
  if (!(a > 0.0 && a < 2.0)) {
    if (!config.clamp_alpha) {
      p.status = EstimateStatus::log_domain_violation;
      return p;
    }
    a = std::clamp(a, clamp_eps, 2.0 - clamp_eps);
  }

  const auto f = design_function_by_name(config.f_ja);
  const double u = resolve_u(config, inc);
  const auto fu = f.rescaled(u);
  double sw = 0.0, sf = 0.0;
  for_window(inc, config.kernel, x, [&](double w, double d) {
    sw += w;
    sf += w * fu(d);
  });
  const double denom = config.normalize_rstar_by_mhat ? sw : static_cast<double>(inc.size());
  const double fa = frac_functional(f, a).value;
  p.value = sf / (denom * inc.mesh() * std::pow(u, a) * fa);
  p.sd = std::abs(p.value) * std::log(u) * pa.sd;
  if (!(p.sd > 0.0) || !std::isfinite(p.sd))
    p.status = EstimateStatus::degenerate_denominator;
  return p;
}

PointEstimate mu_hat(const Increments& inc, const EstimatorConfig& config, double x, double u)
{
  if (!(u >= 1.0))
    throw DomainError("mu_hat: u must be >= 1");
  const auto f = design_function_by_name(config.f_drift).rescaled(u);
  const double norm = inc.mesh() * f.derivative(1, 0.0);
  return nw_mean(inc, config.kernel, x, config.min_count, [&](double d) { return f(d) / norm; });
}

PointEstimate sigma2_hat(const Increments& inc, const EstimatorConfig& config, double x, double u)
{
  if (!(u > 1.0))
    throw DomainError("sigma2_hat: u must be > 1");
  const auto f = design_function_by_name(config.f_sigma2).rescaled(u);
  const double norm = inc.mesh() * 0.5 * f.derivative(2, 0.0);
  return nw_mean(inc, config.kernel, x, config.min_count, [&](double d) { return f(d) / norm; });
}

std::vector<std::string> curve_names()
{
  return { "alpha", "rstar", "mu", "mu_filtered", "sigma2" };
}

std::map<std::string, CurveEstimate> estimate_curves(const Increments& inc,
                                                     const EstimatorConfig& config,
                                                     const std::vector<std::string>& curves)
{
  std::map<std::string, CurveEstimate> out;
  for (const auto& name : curves) {
    CurveEstimate c;
    c.reserve(config.x_grid.size());
    for (double x : config.x_grid) {
      if (name == "alpha")
        c.push_back(alpha_hat(inc, config, x));
      else if (name == "rstar")
        c.push_back(rstar_hat(inc, config, x));
      else if (name == "mu")
        c.push_back(mu_hat(inc, config, x, 1.0));
      else if (name == "mu_filtered")
        c.push_back(mu_hat(inc, config, x, config.u_filtered));
      else if (name == "sigma2")
        c.push_back(sigma2_hat(inc, config, x, config.u_sigma2));
      else
        throw ValidationError("outputs", "unknown curve '" + name + "'");
    }
    out.emplace(name, std::move(c));
  }
  return out;
}

RateAudit audit_rates(double T, double b, double h, double u, double alpha, double delta)
{
  RateAudit a;
  a.u = u;
  a.p_bias_generator = T * b * h * h * std::pow(u, 8.0 - alpha);
  a.p_bias_perturbation = T * b * std::pow(u, alpha - 2.0 * delta);
  const double lu = std::log(u);
  a.p_bias_kernel = T * b * b * b * std::pow(u, alpha) * lu * lu;
  auto warn = [&](double v, const std::string& what) {
    if (v > 1.0)
      a.warnings.push_back(what + " = " + std::to_string(v) + " exceeds 1");
  };
  warn(a.p_bias_generator, "T b h^2 u^(8-alpha)");
  warn(a.p_bias_perturbation, "T b u^(alpha-2 delta)");
  warn(a.p_bias_kernel, "T b^3 u^alpha (log u)^2");
  return a;
}

} // namespace jumpdiff
