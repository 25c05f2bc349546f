#include "jumpdiff/simulator.hpp"

#include "jumpdiff/errors.hpp"
#include "jumpdiff/sampling.hpp"

#include <cmath>

namespace jumpdiff {

std::size_t SimulationPlan::steps() const
{
  return static_cast<std::size_t>(std::llround(horizon / mesh));
}

void SimulationPlan::validate() const
{
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw ValidationError("simulation.horizon", "must be positive and finite");
  if (!(mesh > 0.0) || !(mesh <= horizon))
    throw ValidationError("simulation.mesh", "must satisfy 0 < mesh <= horizon");
  if (substeps < 1)
    throw ValidationError("simulation.substeps", "must be >= 1");
  if (burn_in && !(*burn_in >= 0.0 && std::isfinite(*burn_in)))
    throw ValidationError("simulation.burn_in", "must be finite and >= 0");
  if (!std::isfinite(x0))
    throw ValidationError("simulation.x0", "must be finite");
  if (steps() < 1)
    throw ValidationError("simulation.mesh", "horizon / mesh must round to at least one step");
}

std::vector<double> PathSample::times() const
{
  std::vector<double> t(values.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    t[i] = time(i);
  return t;
}

PathSample simulate(const ModelSpec& model, const SimulationPlan& plan)
{
  plan.validate();
  validate_model(model);
  if (model.jumps.g)
    throw ValidationError("model.jumps.g", "the simulator supports g = 0 only");

  const auto& mu = model.mu;
  const auto& sigma2 = model.sigma2;
  const auto& tail = model.jumps.tail;

  RngStream rng(plan.seed, plan.stream);
  const double dt = plan.mesh / plan.substeps;
  const double sqdt = std::sqrt(dt);
  const std::size_t n = plan.steps();
  const auto burn = static_cast<std::size_t>(std::llround(plan.resolved_burn_in() / dt));

  double x = plan.x0;
  std::size_t step = 0;
  auto advance = [&] {
    const double s2 = sigma2(x);
    double dx = mu(x) * dt;
    if (s2 > 0.0)
      dx += std::sqrt(s2) * sqdt * rng.normal();
    dx += stable_increment(model, x, dt, rng);
    if (tail.kind != TailKind::pure_stable)
      dx += sample_tail_jumps(tail, dt, rng);
    x += dx;
    if (!std::isfinite(x) || std::abs(x) > 1e12)
      throw SimulationError("state overflow (|X| > 1e12 or non-finite)", step);
    ++step;
  };

  for (std::size_t i = 0; i < burn; ++i)
    advance();

  PathSample path;
  path.plan = plan;
  path.plan.burn_in = plan.resolved_burn_in();
  path.values.reserve(n + 1);
  path.values.push_back(x);
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < plan.substeps; ++k)
      advance();
    path.values.push_back(x);
  }
  return path;
}

} // namespace jumpdiff
