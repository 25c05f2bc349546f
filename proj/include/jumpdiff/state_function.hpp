#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace jumpdiff {

//! A scalar coefficient x -> f(x) with first and second derivatives.
//!
//! Missing derivatives fall back to central differences with step 1e-5.
class StateFunction
{
public:
  using Fn = std::function<double(double)>;

  //! The zero function.
  StateFunction();
  StateFunction(Fn f, Fn d1 = {}, Fn d2 = {}, std::string name = "custom");

  static StateFunction constant(double c);

  double operator()(double x) const { return f_(x); }
  double d1(double x) const;
  double d2(double x) const;

  bool has_analytic_d1() const { return static_cast<bool>(d1_); }
  bool has_analytic_d2() const { return static_cast<bool>(d2_); }
  const std::string& name() const { return name_; }

  static constexpr double fd_step = 1e-5;

private:
  Fn f_, d1_, d2_;
  std::string name_;
};

//! Names of the built-in coefficient formulas accepted by `make_formula`.
std::vector<std::string> formula_kinds();

//! Builds a coefficient from the fixed formula registry:
//!   constant     {value}
//!   linear       {intercept, slope}
//!   arctan_sq    {base, scale}            base - scale*atan(x)^2/pi^2
//!   tanh         {center, amplitude, rate} center + amplitude*tanh(rate*x)
//! Unknown kinds or missing parameters throw ValidationError naming `field`.
StateFunction make_formula(const std::string& kind,
                           const std::map<std::string, double>& params,
                           const std::string& field = "formula");

} // namespace jumpdiff
