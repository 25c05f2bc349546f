#include "jumpdiff/harness.hpp"

#include "jumpdiff/errors.hpp"
#include "jumpdiff/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jumpdiff {

unsigned resolve_threads(unsigned requested)
{
  if (requested > 0)
    return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

double quantile_sorted(const std::vector<double>& sorted, double p)
{
  if (sorted.empty())
    return std::numeric_limits<double>::quiet_NaN();
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

QuantileCurves aggregate(const std::vector<CurveEstimate>& reps)
{
  if (reps.empty())
    throw DomainError("aggregate: no replications");
  const std::size_t nx = reps.front().size();
  for (const auto& r : reps)
    if (r.size() != nx)
      throw DomainError("aggregate: replications disagree on the grid");

  QuantileCurves out(nx);
  for (std::size_t j = 0; j < nx; ++j) {
    std::vector<double> v, sd;
    for (const auto& r : reps) {
      if (r[j].ok()) {
        v.push_back(r[j].value);
        sd.push_back(r[j].sd);
      }
    }
    auto& q = out[j];
    q.x = reps.front()[j].x;
    q.n_total = reps.size();
    q.n_valid = v.size();
    if (2 * v.size() < reps.size())
      throw std::runtime_error("more than half of the replications failed at x = " +
                               std::to_string(q.x) + " (" + std::to_string(v.size()) + " of " +
                               std::to_string(reps.size()) + " valid)");
    double mean = 0.0;
    for (double a : v)
      mean += a;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double a : v)
      ss += (a - mean) * (a - mean);
    q.mean = mean;
    q.sd_emp = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    std::sort(v.begin(), v.end());
    std::sort(sd.begin(), sd.end());
    q.q25 = quantile_sorted(v, 0.25);
    q.q50 = quantile_sorted(v, 0.5);
    q.q75 = quantile_sorted(v, 0.75);
    q.sd_asym = quantile_sorted(sd, 0.5);
  }
  return out;
}

void ExperimentPlan::validate() const
{
  simulation.validate();
  estimator.validate();
  if (replications < 1)
    throw ValidationError("experiment.replications", "must be >= 1");
  const auto names = curve_names();
  for (const auto& c : curves)
    if (std::find(names.begin(), names.end(), c) == names.end())
      throw ValidationError("experiment.outputs", "unknown curve '" + c + "'");
}

std::map<std::string, QuantileCurves> run_experiment(const ModelSpec& model,
                                                     const ExperimentPlan& plan,
                                                     unsigned threads)
{
  plan.validate();
  validate_model(model);
  using Rep = std::map<std::string, CurveEstimate>;
  const std::function<Rep(std::size_t)> job = [&](std::size_t i) {
    SimulationPlan sp = plan.simulation;
    sp.stream = i;
    const auto path = simulate(model, sp);
    return estimate_curves(Increments(path), plan.estimator, plan.curves);
  };
  const auto reps = run_replications(plan.replications, threads, job);

  std::map<std::string, QuantileCurves> out;
  for (const auto& c : plan.curves) {
    std::vector<CurveEstimate> per;
    per.reserve(reps.size());
    for (const auto& r : reps)
      per.push_back(r.at(c));
    out.emplace(c, aggregate(per));
  }
  return out;
}

LogLogFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y)
{
  if (x.size() != y.size())
    throw DomainError("loglog_fit: size mismatch");
  if (x.size() < 2)
    throw DomainError("loglog_fit: regression undefined for fewer than two points");
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw DomainError("loglog_fit: data must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0)
    throw DomainError("loglog_fit: regression undefined for repeated x");
  LogLogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (n > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = ly[i] - fit.intercept - fit.slope * lx[i];
      rss += e * e;
    }
    fit.slope_se = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  }
  return fit;
}

Prop1Result prop1_slope_experiment(const LevyRestriction& levy,
                                   const DesignFunction& f,
                                   double u,
                                   const std::vector<double>& h_grid,
                                   const OracleSettings& settings)
{
  if (h_grid.size() < 2)
    throw DomainError("prop1_slope_experiment: need at least two mesh values");
  const auto model = as_model(levy);
  const double g1 = gen_star(model, f, u, 0.0);
  const double g2 = gen_star(model, square(f), u, 0.0);
  Prop1Result res;
  res.h = h_grid;
  for (double h : h_grid) {
    const auto m = levy_moments(levy, f, u, h, settings);
    res.mean_error.push_back(std::abs(m.mean - h * g1));
    res.var_error.push_back(std::abs(m.variance - h * g2));
  }
  res.mean_fit = loglog_fit(res.h, res.mean_error);
  res.var_fit = loglog_fit(res.h, res.var_error);
  return res;
}

S2Contour s2_contour(const DesignFunction& f,
                     const std::vector<double>& gammas,
                     const std::vector<double>& alphas)
{
  S2Contour c;
  c.gammas = gammas;
  c.alphas = alphas;
  c.s2.assign(gammas.size(), std::vector<double>(alphas.size()));
  for (std::size_t i = 0; i < gammas.size(); ++i)
    for (std::size_t j = 0; j < alphas.size(); ++j)
      c.s2[i][j] = variance_factor_s2(gammas[i], alphas[j], f);
  return c;
}

} // namespace jumpdiff
