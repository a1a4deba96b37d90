#pragma once

namespace glmpss::special {

// Standard normal CDF, absolute error below 1e-12 over the full double range.
double normal_cdf(double z);

// Inverse of normal_cdf on (0, 1); round-trips through normal_cdf to 1e-10.
double normal_quantile(double p);

// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);

// Central chi-square CDF with df degrees of freedom, computed via gamma_p.
double chi2_cdf(double x, double df);

// CDF of the noncentral chi-square distribution with df degrees of freedom
// and noncentrality ncp >= 0, evaluated at x (0 for x <= 0).
double noncentral_chi2_cdf(double x, int df, double ncp);

// Density of the same distribution; exposed for quantile refinement and tests.
double noncentral_chi2_pdf(double x, int df, double ncp);

// Quantile q in (0, 1): returns x with noncentral_chi2_cdf(x) = q within 1e-9.
double noncentral_chi2_quantile(double q, int df, double ncp);

// Regularized incomplete beta I_x(a, b), x in [0, 1], a, b > 0.
double incomplete_beta(double x, double a, double b);

// Inverse of incomplete_beta in x: absolute error at most 1e-10.
double beta_quantile(double u, double a, double b);

namespace detail {
// Lanczos log-gamma for x > 0, at least 13 significant digits. Internal
// helper behind the functions above, exposed here for white-box tests only.
double log_gamma(double x);

// incomplete_beta / beta_quantile with the log of the complete beta function
// precomputed; the per-(a,b) constant dominates the cost in quantile-transform
// loops, so samplers hoist it out of their inner loops.
double incomplete_beta_pre(double x, double a, double b, double log_beta_ab);
double beta_quantile_pre(double u, double a, double b, double log_beta_ab);
}  // namespace detail

}  // namespace glmpss::special
