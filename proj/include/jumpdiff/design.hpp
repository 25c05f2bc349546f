#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace jumpdiff {

enum class FunctionClass
{
  F,            // f(0) = f'(0) = f''(0) = 0
  F_prime,      // odd, f'(0) != 0
  F_doubleprime // f'(0) = 0, f''(0) != 0
};

std::string to_string(FunctionClass klass);

//! A bounded test function with analytic derivatives up to order four,
//! possibly rescaled as f_u(x) = f(ux).
class DesignFunction
{
public:
  using Fn = std::function<double(double)>;

  //! `fns[k]` is the k-th derivative at scale one, k = 0..4.
  DesignFunction(std::string name,
                 FunctionClass klass,
                 double vanish_radius,
                 std::array<Fn, 5> fns);

  double operator()(double x) const { return base_->fns[0](scale_ * x); }

  //! k-th derivative of the rescaled function, u^k f^(k)(ux), k = 0..4.
  double derivative(int k, double x) const;

  FunctionClass klass() const { return base_->klass; }
  const std::string& name() const { return base_->name; }
  double scale() const { return scale_; }
  //! Radius on which the rescaled function vanishes identically.
  double vanish_radius() const { return base_->vanish / scale_; }

  DesignFunction rescaled(double u) const;
  //! The same function at scale one.
  DesignFunction unscaled() const { return DesignFunction(base_, 1.0); }

private:
  struct Base
  {
    std::string name;
    FunctionClass klass;
    double vanish;
    std::array<Fn, 5> fns;
  };
  DesignFunction(std::shared_ptr<const Base> base, double scale)
    : base_(std::move(base))
    , scale_(scale)
  {}

  std::shared_ptr<const Base> base_;
  double scale_ = 1.0;
};

//! f(x) = int_0^x exp(-y^2) dy, class F'.
DesignFunction builtin_drift_f();
//! exp(-1/(|x| - radius)) for |x| > radius, 0 otherwise; class F.
DesignFunction builtin_ja_f(double radius = 0.1);
//! x^2 exp(-x^2), class F'' with f''(0) = 2.
DesignFunction builtin_sigma2_f();
//! The zero function, tagged with the given class.
DesignFunction zero_function(FunctionClass klass = FunctionClass::F);

//! f_u(x) = f(ux). Throws DomainError unless u > 0.
DesignFunction rescale(const DesignFunction& f, double u);

//! x -> f(x)^2 with product-rule derivatives; square(f_u) = square(f)_u.
DesignFunction square(const DesignFunction& f);

//! Registry lookup: "drift_erf", "ja_bump", "sigma2_bump" and anything added
//! through `register_design_function`. Throws ValidationError if unknown.
DesignFunction design_function_by_name(const std::string& name);
void register_design_function(const std::string& name,
                              std::function<DesignFunction()> factory);
std::vector<std::string> design_function_names();

//! Audit grid for weighted norms: 0 and +-x for 1e4 log-spaced x in [1e-6, 50].
std::vector<double> norm_grid();

//! sup_x |f^(k)(x)| (|x| v 1)^p over `norm_grid()`.
double weighted_norm(const DesignFunction& f, int k, double p);

struct ClassAudit
{
  double f0 = 0.0;
  double d1_0 = 0.0;
  double d2_0 = 0.0;
  double oddness_residual = 0.0;  // max |f(z) + f(-z)|
  double evenness_residual = 0.0; // max |f(z) - f(-z)|
  double sup_norm = 0.0;
  //! norms[k][j] = ||f^(k)||_{inf,p} for p = 1, 3, 5.
  std::array<std::array<double, 3>, 5> norms{};
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

ClassAudit check_class(const DesignFunction& f);

} // namespace jumpdiff
