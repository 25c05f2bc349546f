#include "jumpdiff/design.hpp"

#include "jumpdiff/errors.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace jumpdiff {

std::string to_string(FunctionClass klass)
{
  switch (klass) {
    case FunctionClass::F:
      return "F";
    case FunctionClass::F_prime:
      return "F_prime";
    case FunctionClass::F_doubleprime:
      return "F_doubleprime";
  }
  return "unknown";
}

DesignFunction::DesignFunction(std::string name,
                               FunctionClass klass,
                               double vanish_radius,
                               std::array<Fn, 5> fns)
  : base_(std::make_shared<const Base>(
      Base{ std::move(name), klass, vanish_radius, std::move(fns) }))
{
  for (const auto& fn : base_->fns)
    if (!fn)
      throw ValidationError(base_->name, "all four derivatives must be supplied");
  if (!(vanish_radius >= 0.0))
    throw ValidationError(base_->name, "vanish radius must be >= 0");
}

double DesignFunction::derivative(int k, double x) const
{
  if (k < 0 || k > 4)
    throw DomainError("DesignFunction::derivative: order must be 0..4");
  return std::pow(scale_, k) * base_->fns[k](scale_ * x);
}

DesignFunction DesignFunction::rescaled(double u) const
{
  if (!(u > 0.0) || !std::isfinite(u))
    throw DomainError("rescale: u must be positive and finite");
  return DesignFunction(base_, scale_ * u);
}

DesignFunction rescale(const DesignFunction& f, double u)
{
  return f.rescaled(u);
}

DesignFunction builtin_drift_f()
{
  constexpr double c = 0.88622692545275801365; // sqrt(pi)/2
  return DesignFunction(
    "drift_erf",
    FunctionClass::F_prime,
    0.0,
    { [](double x) { return c * std::erf(x); },
      [](double x) { return std::exp(-x * x); },
      [](double x) { return -2.0 * x * std::exp(-x * x); },
      [](double x) { return (4.0 * x * x - 2.0) * std::exp(-x * x); },
      [](double x) { return (12.0 * x - 8.0 * x * x * x) * std::exp(-x * x); } });
}

DesignFunction builtin_ja_f(double radius)
{
  if (!(radius >= 0.0))
    throw ValidationError("ja_bump.radius", "must be >= 0");
  // phi(s) = exp(-1/s); phi^(k)(s) = phi(s) P_k(1/s).
  auto make = [radius](int k) {
    return [radius, k](double x) {
      const double s = std::abs(x) - radius;
      if (s <= 1e-12)
        return 0.0;
      const double t = 1.0 / s;
      const double phi = std::exp(-t);
      if (phi == 0.0)
        return 0.0;
      const double t2 = t * t;
      double p = 1.0;
      switch (k) {
        case 1:
          p = t2;
          break;
        case 2:
          p = t2 * t * (t - 2.0);
          break;
        case 3:
          p = t2 * t2 * (t2 - 6.0 * t + 6.0);
          break;
        case 4:
          p = t2 * t2 * t * (t * t2 - 12.0 * t2 + 36.0 * t - 24.0);
          break;
        default:
          break;
      }
      const double sign = (x < 0.0 && k % 2 == 1) ? -1.0 : 1.0;
      return sign * phi * p;
    };
  };
  return DesignFunction("ja_bump", FunctionClass::F, radius,
                        { make(0), make(1), make(2), make(3), make(4) });
}

DesignFunction builtin_sigma2_f()
{
  // f^(k)(x) = P_k(x) exp(-x^2)
  return DesignFunction(
    "sigma2_bump",
    FunctionClass::F_doubleprime,
    0.0,
    { [](double x) { return x * x * std::exp(-x * x); },
      [](double x) { return (2.0 * x - 2.0 * x * x * x) * std::exp(-x * x); },
      [](double x) {
        const double x2 = x * x;
        return (2.0 - 10.0 * x2 + 4.0 * x2 * x2) * std::exp(-x2);
      },
      [](double x) {
        const double x2 = x * x;
        return x * (-24.0 + 36.0 * x2 - 8.0 * x2 * x2) * std::exp(-x2);
      },
      [](double x) {
        const double x2 = x * x;
        return (-24.0 + 156.0 * x2 - 112.0 * x2 * x2 + 16.0 * x2 * x2 * x2) * std::exp(-x2);
      } });
}

DesignFunction zero_function(FunctionClass klass)
{
  auto z = [](double) { return 0.0; };
  return DesignFunction("zero", klass, 0.0, { z, z, z, z, z });
}

DesignFunction square(const DesignFunction& scaled)
{
  const auto f = scaled.unscaled();
  FunctionClass klass = FunctionClass::F;
  if (f.derivative(1, 0.0) != 0.0)
    klass = FunctionClass::F_doubleprime;
  auto d = [f](int k, double x) { return f.derivative(k, x); };
  return DesignFunction(
    f.name() + "^2",
    klass,
    f.vanish_radius(),
    { [d](double x) {
        const double v = d(0, x);
        return v * v;
      },
      [d](double x) { return 2.0 * d(0, x) * d(1, x); },
      [d](double x) {
        const double d1 = d(1, x);
        return 2.0 * d1 * d1 + 2.0 * d(0, x) * d(2, x);
      },
      [d](double x) { return 6.0 * d(1, x) * d(2, x) + 2.0 * d(0, x) * d(3, x); },
      [d](double x) {
        const double d2 = d(2, x);
        return 6.0 * d2 * d2 + 8.0 * d(1, x) * d(3, x) + 2.0 * d(0, x) * d(4, x);
      } })
    .rescaled(scaled.scale());
}

namespace {

struct Registry
{
  std::mutex mutex;
  std::map<std::string, std::function<DesignFunction()>> factories{
    { "drift_erf", [] { return builtin_drift_f(); } },
    { "ja_bump", [] { return builtin_ja_f(); } },
    { "sigma2_bump", [] { return builtin_sigma2_f(); } },
  };
};

Registry& registry()
{
  static Registry r;
  return r;
}

} // namespace

DesignFunction design_function_by_name(const std::string& name)
{
  auto& reg = registry();
  std::function<DesignFunction()> factory;
  {
    std::lock_guard lock(reg.mutex);
    auto it = reg.factories.find(name);
    if (it == reg.factories.end())
      throw ValidationError("design_function", "unknown design function '" + name + "'");
    factory = it->second;
  }
  return factory();
}

void register_design_function(const std::string& name,
                              std::function<DesignFunction()> factory)
{
  if (!factory)
    throw ValidationError("design_function", "factory must be callable");
  auto& reg = registry();
  std::lock_guard lock(reg.mutex);
  reg.factories[name] = std::move(factory);
}

std::vector<std::string> design_function_names()
{
  auto& reg = registry();
  std::lock_guard lock(reg.mutex);
  std::vector<std::string> names;
  for (const auto& [k, v] : reg.factories)
    names.push_back(k);
  return names;
}

std::vector<double> norm_grid()
{
  constexpr int n = 10000;
  const double l0 = std::log(1e-6), l1 = std::log(50.0);
  std::vector<double> xs;
  xs.reserve(2 * n + 1);
  xs.push_back(0.0);
  for (int i = 0; i < n; ++i) {
    const double x = std::exp(l0 + (l1 - l0) * i / (n - 1.0));
    xs.push_back(x);
    xs.push_back(-x);
  }
  return xs;
}

double weighted_norm(const DesignFunction& f, int k, double p)
{
  double sup = 0.0;
  for (double x : norm_grid())
    sup = std::max(sup, std::abs(f.derivative(k, x)) * std::pow(std::max(std::abs(x), 1.0), p));
  return sup;
}

ClassAudit check_class(const DesignFunction& f)
{
  ClassAudit a;
  a.f0 = f(0.0);
  a.d1_0 = f.derivative(1, 0.0);
  a.d2_0 = f.derivative(2, 0.0);
  const auto grid = norm_grid();
  constexpr std::array<double, 3> ps = { 1.0, 3.0, 5.0 };
  for (double x : grid) {
    const double v = f(x);
    a.sup_norm = std::max(a.sup_norm, std::abs(v));
    if (x > 0.0) {
      const double w = f(-x);
      a.oddness_residual = std::max(a.oddness_residual, std::abs(v + w));
      a.evenness_residual = std::max(a.evenness_residual, std::abs(v - w));
    }
    const double weight = std::max(std::abs(x), 1.0);
    for (int k = 0; k <= 4; ++k) {
      const double dk = std::abs(f.derivative(k, x));
      for (std::size_t j = 0; j < ps.size(); ++j)
        a.norms[k][j] = std::max(a.norms[k][j], dk * std::pow(weight, ps[j]));
    }
  }

  auto flag = [&](bool bad, const std::string& msg) {
    if (bad)
      a.violations.push_back(msg);
  };
  flag(a.f0 != 0.0, "f(0) != 0");
  flag(!std::isfinite(a.sup_norm), "f is unbounded on the audit grid");
  switch (f.klass()) {
    case FunctionClass::F:
      flag(a.d1_0 != 0.0 || a.d2_0 != 0.0, "class F needs f'(0) = f''(0) = 0");
      break;
    case FunctionClass::F_prime:
      flag(a.oddness_residual != 0.0, "class F' needs an odd function");
      flag(a.d1_0 == 0.0, "class F' needs f'(0) != 0");
      break;
    case FunctionClass::F_doubleprime:
      flag(a.d1_0 != 0.0, "class F'' needs f'(0) = 0");
      flag(a.d2_0 == 0.0, "class F'' needs f''(0) != 0");
      break;
  }
  return a;
}

} // namespace jumpdiff
