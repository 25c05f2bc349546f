#pragma once

#include "jumpdiff/design.hpp"
#include "jumpdiff/simulator.hpp"

#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace jumpdiff {

enum class KernelShape
{
  epanechnikov,
  uniform,
  triangular
};

std::string to_string(KernelShape shape);
KernelShape kernel_shape_from_string(const std::string& name);

struct KernelSpec
{
  KernelShape shape = KernelShape::epanechnikov;
  double bandwidth = 0.5;

  //! Unit kernel G on [-1, 1].
  double unit(double y) const;
  //! G_b(d) = G(d / b) / b.
  double operator()(double d) const { return unit(d / bandwidth) / bandwidth; }
  //! int G(y)^2 dy.
  double integral_g2() const;
};

//! u = value (explicit) or u = (T b h^2)^(-value) (power rule).
struct URule
{
  enum class Kind
  {
    explicit_value,
    power
  };
  Kind kind = Kind::power;
  double value = 0.07;

  double resolve(double T, double b, double h) const;
};

struct EstimatorConfig
{
  KernelSpec kernel;
  double gamma = 2.0;
  URule u_rule;
  std::vector<double> x_grid{ -1.0, 0.0, 1.0 };
  std::string f_ja = "ja_bump";
  std::string f_drift = "drift_erf";
  std::string f_sigma2 = "sigma2_bump";
  double u_filtered = 10.0;
  double u_sigma2 = 20.0;
  bool clamp_alpha = false;
  bool normalize_rstar_by_mhat = false;
  std::size_t min_count = 10;

  //! Throws ValidationError naming the offending field.
  void validate() const;
};

enum class EstimateStatus
{
  ok,
  degenerate_denominator,
  log_domain_violation
};

std::string to_string(EstimateStatus status);

struct PointEstimate
{
  double x = 0.0;
  double value = std::numeric_limits<double>::quiet_NaN();
  double sd = std::numeric_limits<double>::quiet_NaN();
  double mhat = 0.0;
  std::size_t count = 0;
  EstimateStatus status = EstimateStatus::degenerate_denominator;

  bool ok() const { return status == EstimateStatus::ok; }
};

using CurveEstimate = std::vector<PointEstimate>;

//! Levels X_{t_i} and increments X_{t_{i+1}} - X_{t_i}, i < n.
class Increments
{
public:
  explicit Increments(const PathSample& path);
  Increments(std::vector<double> level, std::vector<double> delta, double mesh);

  const std::vector<double>& level() const { return level_; }
  const std::vector<double>& delta() const { return delta_; }
  double mesh() const { return mesh_; }
  std::size_t size() const { return level_.size(); }
  double horizon() const { return static_cast<double>(size()) * mesh_; }

private:
  std::vector<double> level_, delta_;
  double mesh_;
};

//! (1/n) sum G_b(X_{t_i} - x).
double density_hat(const Increments& inc, const KernelSpec& kernel, double x);
double density_hat(const PathSample& path, const KernelSpec& kernel, double x);

//! The resolved u for a configuration and sample.
double resolve_u(const EstimatorConfig& config, const Increments& inc);

//! sum f(u dX) G_b / (sum G_b h u^a). The NW ratio of transformed increments.
PointEstimate ratio_stat(const Increments& inc,
                         const EstimatorConfig& config,
                         const DesignFunction& f,
                         double u,
                         double a,
                         double x);

//! -log(R(x) / R(x, gamma)) / log gamma from the kernel sums with f and f(gamma .),
//! without plug-in sd. `a` is the internal scale exponent; it cancels.
PointEstimate alpha_ratio(const Increments& inc,
                          const KernelSpec& kernel,
                          const DesignFunction& f,
                          double gamma,
                          double u,
                          double x,
                          std::size_t min_count = 10,
                          double a = 0.0);

PointEstimate alpha_hat(const Increments& inc, const EstimatorConfig& config, double x);
PointEstimate rstar_hat(const Increments& inc, const EstimatorConfig& config, double x);
PointEstimate mu_hat(const Increments& inc, const EstimatorConfig& config, double x, double u = 1.0);
PointEstimate sigma2_hat(const Increments& inc, const EstimatorConfig& config, double x, double u);

//! Curves by name: "alpha", "rstar", "mu", "mu_filtered", "sigma2".
std::vector<std::string> curve_names();
std::map<std::string, CurveEstimate> estimate_curves(const Increments& inc,
                                                     const EstimatorConfig& config,
                                                     const std::vector<std::string>& curves);

//! Rate-condition products T b h^2 u^(8-alpha), T b u^(alpha-2 delta) and
//! T b^3 u^alpha (log u)^2; each should be small.
struct RateAudit
{
  double u = 0.0;
  double p_bias_generator = 0.0;
  double p_bias_perturbation = 0.0;
  double p_bias_kernel = 0.0;
  std::vector<std::string> warnings;
};

RateAudit audit_rates(double T, double b, double h, double u, double alpha, double delta);

} // namespace jumpdiff
