#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace jumpdiff {

struct QuadratureSettings
{
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  std::size_t max_intervals = 4000;
};

struct QuadratureResult
{
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
};

using Integrand = std::function<double(double)>;

//! Global adaptive Gauss-Kronrod (21 points) over the pieces [p0,p1], ...,
//! [p_{m-1},p_m]. Throws QuadratureError when the tolerance is not met.
QuadratureResult integrate(const Integrand& f,
                           const std::vector<double>& points,
                           const QuadratureSettings& settings = {});

//! Integral of g over (lower, inf).
//!
//! `breaks` are interior split points (> lower). When lower == 0 the first
//! piece is mapped by z = b t^k so that an integrand behaving like z^beta0
//! near zero becomes smooth; the last piece is mapped by z = b t^-k for an
//! integrand decaying like z^(-1-beta_tail).
QuadratureResult integrate_half_line(const Integrand& g,
                                     double lower,
                                     std::vector<double> breaks,
                                     double beta0,
                                     double beta_tail,
                                     const QuadratureSettings& settings = {});

} // namespace jumpdiff
