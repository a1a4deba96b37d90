#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "glmpss/scenario.hpp"

namespace glmpss {

struct ParamRange {
    std::string name;
    double lo, hi;
};

// The 8 scenario parameters varied in a sensitivity study, with family- and
// link-specific ranges for the scale and reference-mean parameters. Order:
// a_x, b_x, a_z, b_z, s_x, s_z, ref_mean, rho.
std::vector<ParamRange> sensitivity_ranges(const FamilyLink& fl);

// Latin hypercube sample: n rows, one column per range. Every column is
// stratified exactly (one point per stratum of width (hi-lo)/n), strata are
// assigned by independent uniform permutations, and the point is uniform
// within its stratum.
Eigen::MatrixXd lhs_sample(const std::vector<std::pair<double, double>>& ranges,
                           int n, RngStream& rng);

// Partial rank correlation coefficients of response against each parameter
// column: rank-transform everything (average ranks for ties), residualize
// the parameter and the response on the remaining parameters (with
// intercept), and correlate the residuals.
Eigen::VectorXd prcc(const Eigen::MatrixXd& params,
                     const Eigen::VectorXd& response);

// Quantile of a sample, linear interpolation of order statistics (type 7).
double quantile_type7(std::vector<double> values, double p);

struct MeasureSummary {
    bool zero_marker = false;  // every defined value is 0 (to 1e-10)
    int n_used = 0;
    int n_dropped = 0;
    double mean = 0, min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};

MeasureSummary summarize_measure(
    const std::vector<std::optional<double>>& values);

struct SensitivityResult {
    std::vector<ParamRange> ranges;
    Eigen::MatrixXd params;  // n_draws x 8
    std::vector<ScenarioRow> rows;
    std::vector<std::optional<double>> re_phi, re_r;  // percent
    int failed_scenarios = 0;
    MeasureSummary phi_summary, r_summary;  // of the percent errors
    std::optional<Eigen::VectorXd> prcc_phi, prcc_r;  // absent if zero_marker
};

// LHS sweep of the scenario parameter space for one family/link: n_draws
// configurations, each evaluated at n_mc Monte Carlo draws. Relative errors
// are summarized in percent; draws whose scenario fails link-domain
// validation or whose relative error is not defined are dropped from the
// affected summaries and counted.
SensitivityResult run_sensitivity(const FamilyLink& fl, int n_draws, int n_mc,
                                  std::uint64_t seed);

}  // namespace glmpss
