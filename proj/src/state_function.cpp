#include "jumpdiff/state_function.hpp"

#include "jumpdiff/errors.hpp"

#include <cmath>
#include <numbers>

namespace jumpdiff {

StateFunction::StateFunction()
  : StateFunction([](double) { return 0.0; },
                  [](double) { return 0.0; },
                  [](double) { return 0.0; },
                  "zero")
{}

StateFunction::StateFunction(Fn f, Fn d1, Fn d2, std::string name)
  : f_(std::move(f))
  , d1_(std::move(d1))
  , d2_(std::move(d2))
  , name_(std::move(name))
{
  if (!f_)
    throw ValidationError(name_, "state function must be callable");
}

StateFunction StateFunction::constant(double c)
{
  return StateFunction([c](double) { return c; },
                       [](double) { return 0.0; },
                       [](double) { return 0.0; },
                       "constant");
}

double StateFunction::d1(double x) const
{
  if (d1_)
    return d1_(x);
  return (f_(x + fd_step) - f_(x - fd_step)) / (2.0 * fd_step);
}

double StateFunction::d2(double x) const
{
  if (d2_)
    return d2_(x);
  return (f_(x + fd_step) - 2.0 * f_(x) + f_(x - fd_step)) / (fd_step * fd_step);
}

std::vector<std::string> formula_kinds()
{
  return { "constant", "linear", "arctan_sq", "tanh" };
}

StateFunction make_formula(const std::string& kind,
                           const std::map<std::string, double>& params,
                           const std::string& field)
{
  auto get = [&](const char* key) {
    auto it = params.find(key);
    if (it == params.end())
      throw ValidationError(field + "." + key, "required by formula '" + kind + "'");
    if (!std::isfinite(it->second))
      throw ValidationError(field + "." + key, "must be finite");
    return it->second;
  };

  if (kind == "constant") {
    const double c = get("value");
    return StateFunction(
      [c](double) { return c; }, [](double) { return 0.0; },
      [](double) { return 0.0; }, "constant");
  }
  if (kind == "linear") {
    const double a = get("intercept"), b = get("slope");
    return StateFunction(
      [a, b](double x) { return a + b * x; }, [b](double) { return b; },
      [](double) { return 0.0; }, "linear");
  }
  if (kind == "arctan_sq") {
    const double base = get("base"), s = get("scale");
    constexpr double pi2 = std::numbers::pi * std::numbers::pi;
    return StateFunction(
      [base, s](double x) {
        const double a = std::atan(x);
        return base - s * a * a / pi2;
      },
      [s](double x) { return -2.0 * s * std::atan(x) / ((1.0 + x * x) * pi2); },
      [s](double x) {
        const double q = 1.0 + x * x;
        return -2.0 * s * (1.0 - 2.0 * x * std::atan(x)) / (q * q * pi2);
      },
      "arctan_sq");
  }
  if (kind == "tanh") {
    const double c = get("center"), a = get("amplitude"), k = get("rate");
    return StateFunction(
      [c, a, k](double x) { return c + a * std::tanh(k * x); },
      [a, k](double x) {
        const double t = std::tanh(k * x);
        return a * k * (1.0 - t * t);
      },
      [a, k](double x) {
        const double t = std::tanh(k * x);
        return -2.0 * a * k * k * t * (1.0 - t * t);
      },
      "tanh");
  }
  throw ValidationError(field + ".kind", "unknown formula '" + kind + "'");
}

} // namespace jumpdiff
