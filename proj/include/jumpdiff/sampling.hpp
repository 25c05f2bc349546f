#pragma once

#include "jumpdiff/model.hpp"
#include "jumpdiff/quadrature.hpp"

#include <cstdint>
#include <random>

namespace jumpdiff {

//! A reproducible random stream. Each (master_seed, stream_index) pair seeds
//! its own engine through a SplitMix64 expansion.
class RngStream
{
public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  //! Uniform on the open interval (0, 1).
  double uniform();
  double normal() { return normal_(engine_); }
  double exponential() { return -std::log(uniform()); }
  //! Poisson count; inverse transform for small means.
  std::uint64_t poisson(double mean);
  double student_t(double dof);

  std::mt19937_64& engine() { return engine_; }

private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

std::uint64_t splitmix64(std::uint64_t& state);

//! C(alpha) = int (1 - cos z)|z|^(-1-alpha) dz by adaptive quadrature.
//! Throws DomainError outside (0, 2) or within 1e-3 of alpha = 1.
double stable_constant(double alpha, const QuadratureSettings& settings = {});

//! Closed form -2 Gamma(-alpha) cos(pi alpha / 2), same domain.
double stable_constant_closed_form(double alpha);

//! Symmetric alpha-stable draw with characteristic function
//! exp(-scale^alpha |u|^alpha) (Chambers-Mallows-Stuck).
double sample_sas(double alpha, double scale, RngStream& rng);

//! Jump increment over dt with coefficients frozen at x: SaS with
//! scale (dt r(x) C(alpha(x)))^(1/alpha(x)).
double stable_increment(const ModelSpec& model, double x, double dt, RngStream& rng);

//! Stable scale matching the Levy density r|z|^(-1-alpha) over dt.
double stable_scale(double alpha, double r, double dt);

//! Sum of the large jumps over dt: Poisson(lambda dt) Student-t sizes for
//! compound_poisson_t, Poisson(2 dt) Pareto(alpha0) sizes for capped.
double sample_tail_jumps(const ModelSpec& model, double dt, RngStream& rng);
double sample_tail_jumps(const TailSpec& tail, double dt, RngStream& rng);

} // namespace jumpdiff
