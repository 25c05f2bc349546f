#pragma once

#include "jumpdiff/model.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace jumpdiff {

struct SimulationPlan
{
  double horizon = 10.0;
  double mesh = 1e-4;
  int substeps = 4;
  std::optional<double> burn_in; // defaults to horizon / 2
  double x0 = 0.0;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;

  //! Number of observation steps n = round(T / h).
  std::size_t steps() const;
  double resolved_burn_in() const { return burn_in.value_or(0.5 * horizon); }
  //! Throws ValidationError naming the offending field.
  void validate() const;
};

//! Observations X_{t_i}, t_i = i h, i = 0..n.
struct PathSample
{
  std::vector<double> values;
  SimulationPlan plan;

  std::size_t size() const { return values.size(); }
  double mesh() const { return plan.mesh; }
  double time(std::size_t i) const { return static_cast<double>(i) * plan.mesh; }
  std::vector<double> times() const;
};

//! Euler scheme with `substeps` refinements per observation step and coefficients
//! frozen over each substep. Throws SimulationError if |X| exceeds 1e12 or
//! becomes non-finite.
PathSample simulate(const ModelSpec& model, const SimulationPlan& plan);

} // namespace jumpdiff
