#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "glmpss/effect_size.hpp"
#include "glmpss/finite_sample.hpp"

namespace glmpss {

struct DesignCsvSpec {
    std::string path;
    std::vector<std::string> z_cols;  // adjustors beyond the intercept
    std::vector<std::string> x_cols;  // tested predictors
    std::string y_col;                // optional response column
    // lambda (intercept first) then beta; fitted from y when absent.
    std::optional<Eigen::VectorXd> coefficients;
    FamilyLink fl{Family::Normal, Link::Identity, 1.0};
    // Replace fl's dispersion parameter with the Pearson estimate from the
    // fitted response (Normal, Gamma, InverseGaussian only).
    bool estimate_aux = false;
};

// Load an empirical design from CSV. The intercept column is implicit. With
// coefficients given they are used as-is; otherwise the response column is
// required and the coefficients come from an IRLS fit. Malformed cells,
// missing columns and responses outside the family support raise IngestError
// naming the row and column.
EmpiricalDesign load_design_csv(const DesignCsvSpec& spec);

EffectSummary compute_empirical_effects(const EmpiricalDesign& design);

// Full command-line entry point. Returns the process exit code:
// 0 success, 2 configuration error, 3 ingestion error, 4 numerical error,
// 5 non-convergence.
int run_cli(const std::vector<std::string>& args);

}  // namespace glmpss
