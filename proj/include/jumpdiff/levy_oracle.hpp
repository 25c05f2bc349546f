#pragma once

#include "jumpdiff/design.hpp"
#include "jumpdiff/model.hpp"

#include <complex>
#include <cstddef>

namespace jumpdiff {

struct OracleSettings
{
  std::size_t grid_points = std::size_t{ 1 } << 20;
  double tail_mass = 1e-7;     // jump mass allowed outside the span
  double gauss_sigmas = 12.0;  // Gaussian half-width in standard deviations
  double cf_floor = 1e-12;     // |phi| allowed at the Nyquist frequency
  int fold_periods = 256;      // periods used by the aliasing correction
};

struct LevyMoments
{
  double mean = 0.0;          // E f_u(X_h - X_0)
  double second_moment = 0.0; // E f_u(X_h - X_0)^2
  double variance = 0.0;
  double half_span = 0.0;     // L, the grid covers [-L, L)
  double grid_mass = 0.0;     // 1 - mass of the jump tails outside the span
};

//! E exp(i w (X_h - X_0)) for the Levy restriction.
std::complex<double> levy_char_fn(const LevyRestriction& levy, double h, double w);

//! Moments of f_u(X_h - X_0) by Fourier inversion on an FFT grid, with the
//! periodisation error outside the span corrected from the tail density.
//! Throws GridResolutionError when the grid cannot resolve the law and
//! DomainError for the capped tail.
LevyMoments levy_moments(const LevyRestriction& levy,
                         const DesignFunction& f,
                         double u,
                         double h,
                         const OracleSettings& settings = {});

double levy_expectation(const LevyRestriction& levy,
                        const DesignFunction& f,
                        double u,
                        double h,
                        const OracleSettings& settings = {});

} // namespace jumpdiff
