#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "glmpss/design_draws.hpp"

namespace glmpss {

// An empirical design: n observed covariate rows split into adjustors z
// (first column 1) and predictors x, with coefficient vectors for both.
// Rows are equally weighted.
struct EmpiricalDesign {
    FamilyLink fl{Family::Normal, Link::Identity, 1.0};
    Eigen::MatrixXd z;  // n x q, column 0 all ones
    Eigen::MatrixXd x;  // n x p
    Eigen::VectorXd lambda;
    Eigen::VectorXd beta;

    Eigen::VectorXd eta() const;
    // Equal-mass draws over the rows; validates eta against the link domain.
    DesignDraws draws() const;
    void validate() const;
};

// Scale factor delta such that the design with beta replaced by delta*beta
// has f2 = target_f2 (within 1e-8). f2 is nondecreasing in delta >= 0;
// found by bracketed bisection. Throws NumericError if beta carries no
// effect (f2 identically 0) or if eta exits the link domain before the
// target is reached (reporting the last feasible delta).
double rescale_beta_to_f2(const EmpiricalDesign& design, double target_f2);

struct PowerSim {
    double rejection_rate = 0;
    double mc_stderr = 0;
    int fit_failures = 0;
    int replicates = 0;
};

// Finite-sample rejection rate of the size-alpha Wald test on the predictor
// block: each replicate resamples n rows with replacement from the design,
// generates outcomes at the design's coefficients, refits, and tests
// beta = 0. Replicates that fail to converge (including separated logistic
// fits, any |coefficient| > 15 at convergence failure) or hit a singular
// resample are excluded and counted in fit_failures. Gamma and
// InverseGaussian tests plug in the Pearson estimate of the shape,
// Normal the Pearson estimate of sigma^2.
//
// The replicate stream is keyed by the replicate index alone, and rows are
// canonicalized (sorted) before resampling, so the result is invariant to
// permuting the input rows and to the host's thread count.
PowerSim simulate_power(const EmpiricalDesign& design, int n, int replicates,
                        double alpha, std::uint64_t seed);

}  // namespace glmpss
