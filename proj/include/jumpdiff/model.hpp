#pragma once

#include "jumpdiff/state_function.hpp"

#include <functional>
#include <string>
#include <vector>

namespace jumpdiff {

enum class TailKind
{
  pure_stable,
  capped,
  compound_poisson_t
};

std::string to_string(TailKind kind);

//! Large-jump component on top of the stable-like core.
struct TailSpec
{
  TailKind kind = TailKind::pure_stable;
  double alpha0 = 0.0;    // capped: index of the driving measure
  double dof = 1.2;       // compound_poisson_t: Student-t degrees of freedom
  double intensity = 0.0; // compound_poisson_t: jump rate
};

using Perturbation = std::function<double(double x, double z)>;

struct StableLikeJumpSpec
{
  StateFunction alpha;
  StateFunction r;
  StateFunction delta;
  Perturbation g;                  // empty means g = 0
  double perturbation_bound = 0.0; // C_g
  TailSpec tail;
  double tail_exponent = 1.0;      // tau
  double density_bound = 1.0;      // C_rho
};

struct ModelSpec
{
  std::string name = "custom";
  StateFunction mu;
  StateFunction sigma2;
  StableLikeJumpSpec jumps;
  double p_D = 0.0;
  double p_V = 0.0;
};

//! Drift -x, unit diffusion, density |z|^(-1-alpha(x)) with
//! alpha(x) = 1.9 - atan(x)^2/pi^2, plus compound Poisson Student-t(1.2) jumps
//! at unit rate.
ModelSpec build_example_model();

//! Push-forward model: density alpha(x)|z|^(-1-alpha(x)) on |z| <= 1 and
//! alpha0|z|^(-1-alpha0) beyond. Requires alpha(x) < alpha0 on the audit grid.
ModelSpec build_capped_model(double alpha0,
                             const StateFunction& alpha,
                             const StateFunction& mu,
                             const StateFunction& sigma2);

//! rho(x, z) including the tail component. Throws DomainError at z = 0.
double jump_density(const ModelSpec& model, double x, double z);

//! Density of the large-jump component alone (zero for pure_stable).
double tail_density(const TailSpec& tail, double z);

double student_t_pdf(double z, double dof);

//! Audit grids: x in [-5, 5] with 101 points, |z| in [1e-3, 100] log-spaced.
std::vector<double> audit_x_grid();
std::vector<double> audit_z_grid(std::size_t points = 50);

struct ModelAudit
{
  double alpha_min = 0.0;
  double alpha_max = 0.0;
  double sigma2_min = 0.0;
  double r_min = 0.0;
  double delta_excess = 0.0;        // max(delta - alpha), must be <= 0
  double symmetry_residual = 0.0;   // max |rho(x,z) - rho(x,-z)|
  double tail_bound_ratio = 0.0;    // max rho / (C_rho |z|^(-1-tau)) on |z| in [1,100]
  double perturbation_asymmetry = 0.0;
  double perturbation_ratio = 0.0;  // max |g| / (C_g |z|^delta)
  double derivative_mismatch = 0.0; // worst relative mismatch vs central differences
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

ModelAudit audit_model(const ModelSpec& model);

//! Throws ValidationError on hard violations (alpha outside (0,2), negative
//! sigma2 or r, asymmetric density).
void validate_model(const ModelSpec& model);

//! Constant-coefficient (Levy) restriction of a model at a fixed state.
struct LevyRestriction
{
  double mu = 0.0;
  double sigma2 = 0.0;
  double alpha = 1.5;
  double r = 0.0;
  TailSpec tail;
};

LevyRestriction freeze(const ModelSpec& model, double x);

//! A model with constant coefficients equal to the restriction.
ModelSpec as_model(const LevyRestriction& levy);

} // namespace jumpdiff
