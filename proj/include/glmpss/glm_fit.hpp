#pragma once

#include <vector>

#include <Eigen/Dense>

#include "glmpss/family_link.hpp"

namespace glmpss {

struct FitResult {
    // Coefficients in the caller's column order (adjustors first, then
    // predictors, by convention of every caller in this codebase).
    Eigen::VectorXd coefficients;
    // Expected information at the fitted coefficients, sum_i w_i x_i x_i'
    // (i.e. n times the average per-observation information).
    Eigen::MatrixXd information;
    bool converged = false;
    int iterations = 0;
    // Log-likelihood (up to additive constants) after each IRLS update;
    // step-halving keeps this non-decreasing.
    std::vector<double> objective_trace;
};

// IRLS fit of a GLM with the given design matrix (n x d, first column 1).
// Starts from an intercept-only fit (empirical logit for logit links,
// boundary-adjusted g(mean) otherwise), halves steps that do not improve the
// objective (up to 10 times), and stops when the relative coefficient change
// falls below 1e-10 or the score norm below 1e-8. A rank-deficient weighted
// Gram matrix (condition estimate above 1e12) raises NumericError; hitting
// max_iterations returns converged = false rather than throwing.
FitResult irls_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                   const FamilyLink& fl, int max_iterations = 100);

// Schur complement of the adjustor block: given the (q+p)-dimensional
// information with adjustors first, returns the p x p conditional information
// of the predictors, I_bb - I_ba I_aa^{-1} I_ab.
Eigen::MatrixXd conditional_information(const Eigen::MatrixXd& information,
                                        int n_adjustors, int n_predictors);

struct WaldResult {
    double statistic;
    int df;
    double p_value;
    bool reject;
};

// Wald test that the coefficients at predictor_indices are jointly zero:
// statistic = beta_S' (I_SS - I_SC I_CC^{-1} I_CS) beta_S, referred to the
// central chi-square with |S| degrees of freedom.
WaldResult wald_test(const FitResult& fit,
                     const std::vector<int>& predictor_indices, double alpha);

// Pearson moment estimate of the dispersion: mean of (y - mu)^2 / v1(mu) with
// n - d degrees of freedom, where v1 is the variance function at unit
// dispersion. Estimates sigma^2 for Normal and 1/k for Gamma/InverseGaussian.
double pearson_dispersion(const Eigen::MatrixXd& design,
                          const Eigen::VectorXd& y, const FamilyLink& fl,
                          const Eigen::VectorXd& coefficients);

}  // namespace glmpss
