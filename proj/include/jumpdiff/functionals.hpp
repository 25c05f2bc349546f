#pragma once

#include "jumpdiff/design.hpp"
#include "jumpdiff/model.hpp"
#include "jumpdiff/quadrature.hpp"

namespace jumpdiff {

//! f(z) + f(-z) - 2 f(0): the compensated integrand folded onto z > 0.
//! Uses the even Taylor terms when |scale * z| < 1e-3.
double folded_increment(const DesignFunction& f, double z);

//! f^[alpha](0) = int (f(z) - f(0) - f'(0) z 1{|z|<=1}) |z|^(-1-alpha) dz.
QuadratureResult frac_functional(const DesignFunction& f,
                                 double alpha,
                                 const QuadratureSettings& settings = {});

//! Compensated integral of f_u against rho(x, .).
double jump_gen_star(const ModelSpec& model,
                     const DesignFunction& f,
                     double u,
                     double x,
                     const QuadratureSettings& settings = {});

//! u mu(x) f'(0) + u^2 sigma2(x) f''(0) / 2 + jump_gen_star(model, f, u, x).
double gen_star(const ModelSpec& model,
                const DesignFunction& f,
                double u,
                double x,
                const QuadratureSettings& settings = {});

//! (log gamma)^-2 int (f(z) - gamma^-alpha f(gamma z))^2 |z|^(-1-alpha) dz.
double variance_factor_s2(double gamma,
                          double alpha,
                          const DesignFunction& f,
                          const QuadratureSettings& settings = {});

//! sqrt(s2_gamma / (T b u^alpha)) with
//! s2_gamma = G2 s2(gamma, alpha, f) / (r m f^[alpha](0)^2).
double alpha_clt_sd(double gamma,
                    double alpha,
                    double r,
                    double m_hat,
                    const DesignFunction& f,
                    double G2_int,
                    double Tb_ualpha);

//! sqrt(V / (T b)) with V = A*f^2(x) / f'(0)^2 * G2 / m.
double drift_clt_sd(const ModelSpec& model,
                    const DesignFunction& f,
                    double x,
                    double m_hat,
                    double G2_int,
                    double Tb);

//! sqrt(V / (T b)) with V = sigma2(x) G2 / m.
double filtered_drift_clt_sd(const ModelSpec& model,
                             double x,
                             double m_hat,
                             double G2_int,
                             double Tb);

} // namespace jumpdiff
