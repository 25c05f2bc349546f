#pragma once

#include "jumpdiff/estimators.hpp"
#include "jumpdiff/levy_oracle.hpp"
#include "jumpdiff/model.hpp"
#include "jumpdiff/simulator.hpp"

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <map>
#include <string>
#include <thread>
#include <vector>

namespace jumpdiff {

//! 0 means one worker per hardware thread.
unsigned resolve_threads(unsigned requested);

//! Runs job(0..R-1) on a worker pool; results are returned in index order.
//! If jobs throw, the exception of the lowest failing index is rethrown.
template<class T>
std::vector<T> run_replications(std::size_t R,
                                unsigned threads,
                                const std::function<T(std::size_t)>& job)
{
  std::vector<T> results(R);
  std::vector<std::exception_ptr> errors(R);
  std::atomic<std::size_t> next{ 0 };
  auto worker = [&] {
    for (std::size_t i = next++; i < R; i = next++) {
      try {
        results[i] = job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(R)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t)
    pool.emplace_back(worker);
  worker();
  for (auto& t : pool)
    t.join();
  for (auto& e : errors)
    if (e)
      std::rethrow_exception(e);
  return results;
}

//! Type-7 quantile of sorted data.
double quantile_sorted(const std::vector<double>& sorted, double p);

struct QuantilePoint
{
  double x = 0.0;
  double q25 = 0.0;
  double q50 = 0.0;
  double q75 = 0.0;
  double mean = 0.0;
  double sd_emp = 0.0;
  double sd_asym = 0.0; // median of the per-replication plug-in sd
  std::size_t n_valid = 0;
  std::size_t n_total = 0;
};

using QuantileCurves = std::vector<QuantilePoint>;

//! Pointwise quantiles over replications, using only status-ok entries.
//! Throws std::runtime_error if more than half of the replications fail at
//! any grid point.
QuantileCurves aggregate(const std::vector<CurveEstimate>& replications);

struct ExperimentPlan
{
  SimulationPlan simulation; // seed is the master seed; stream = replication index
  EstimatorConfig estimator;
  std::size_t replications = 200;
  std::vector<std::string> curves{ "alpha" };

  void validate() const;
};

//! simulate -> estimate for each replication, then aggregate per curve.
std::map<std::string, QuantileCurves> run_experiment(const ModelSpec& model,
                                                     const ExperimentPlan& plan,
                                                     unsigned threads = 0);

struct LogLogFit
{
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
};

//! OLS of log y on log x. Throws DomainError for fewer than two points or
//! nonpositive data.
LogLogFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

struct Prop1Result
{
  std::vector<double> h;
  std::vector<double> mean_error; // |E f_u(X_h) - h A* f_u|
  std::vector<double> var_error;  // |Var f_u(X_h) - h A* f_u^2|
  LogLogFit mean_fit;
  LogLogFit var_fit;
};

Prop1Result prop1_slope_experiment(const LevyRestriction& levy,
                                   const DesignFunction& f,
                                   double u,
                                   const std::vector<double>& h_grid,
                                   const OracleSettings& settings = {});

struct S2Contour
{
  std::vector<double> gammas;
  std::vector<double> alphas;
  std::vector<std::vector<double>> s2; // s2[i][j] at (gammas[i], alphas[j])
};

S2Contour s2_contour(const DesignFunction& f,
                     const std::vector<double>& gammas,
                     const std::vector<double>& alphas);

} // namespace jumpdiff
