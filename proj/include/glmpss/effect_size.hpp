#pragma once

#include <optional>

#include <Eigen/Dense>

#include "glmpss/design_draws.hpp"

namespace glmpss {

// Weighted least-squares projection of eta onto the adjustor columns:
// kappa solves E[w z z'] kappa = E[w eta z], and eta_z = Z kappa, so the
// residual eta - eta_z is w-orthogonal to every adjustor column.
struct Projection {
    Eigen::VectorXd kappa;
    Eigen::VectorXd eta_z;
};

Projection weighted_projection(const DesignDraws& draws);

// The full set of effect-size quantities for one design:
//   phi       = 2 * sd(eta - eta_z)
//   f2        = E[w (eta - eta_z)^2]              (exact noncentrality rate)
//   pseudo_r2 = m / (1 + m),  m = E[(mu - mu_z)^2 / v]
//   f2_phi    = w1 phi^2 / 4                      (phi-based approximation)
//   f2_r      = pseudo_r2 / (1 - pseudo_r2) = m   (R2-based approximation)
//   re_*      = (f2 - f2_*) / f2_*, not defined when the denominator is zero
// w1 is the information weight at eta = g(E[mu]) unless an override is given.
struct EffectSummary {
    double phi = 0;
    double pseudo_r2 = 0;
    double f2 = 0;
    double f2_phi = 0;
    double f2_r = 0;
    double mean_y = 0;
    double w1 = 0;
    std::optional<double> re_phi;
    std::optional<double> re_r;
};

EffectSummary effect_sizes_from_draws(const DesignDraws& draws,
                                      std::optional<double> w1_override = {});

double f2_phi_approx(double phi, double w1);
double f2_r_approx(double pseudo_r2);

struct RelativeErrors {
    std::optional<double> re_phi;
    std::optional<double> re_r;
};

RelativeErrors relative_errors(double f2, double f2_phi, double f2_r);

}  // namespace glmpss
