#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "glmpss/design_draws.hpp"
#include "glmpss/effect_size.hpp"
#include "glmpss/rng.hpp"

namespace glmpss {

// A two-covariate Monte Carlo design: Beta-distributed adjustor B_z and
// predictor B_x (Gaussian copula, correlation rho), centered and scaled so
// that each contributes s_z^2 / s_x^2 of linear-predictor variance around
// the reference intercept iota = g(ref_mean):
//
//   eta = iota + c_z (B_z - E B_z) + c_x (B_x - E B_x),   c_i = s_i / sd(B_i)
//
// The adjustor vector is z = (1, B_z); draws carry equal mass 1/n_mc.
struct ScenarioConfig {
    FamilyLink fl{Family::Normal, Link::Identity, 1.0};
    double a_x = 1, b_x = 1;
    double a_z = 1, b_z = 1;
    double s_x = 0, s_z = 0;  // standard deviations of the eta contributions
    double rho = 0;
    double ref_mean = 0;
    int n_mc = 50000;
    std::uint64_t seed = 0;
    // Evaluate w1 at iota instead of at g(E[mu]).
    bool w1_at_ref_mean = false;
};

struct ScenarioResult {
    ScenarioConfig config;
    EffectSummary effects;
    std::uint64_t stream_id;
    // Condition estimate (eigenvalue ratio) of E[w z z'].
    double moment_condition = 0;
};

// Stream id = hash of the parameter tuple (family/link/aux, shapes, scales,
// rho, ref_mean, n_mc), so every distinct cell of any sweep gets its own
// stream and adding grid axes never perturbs existing cells.
std::uint64_t scenario_stream_id(const ScenarioConfig& cfg);

// Draw the design. Throws ConfigError for invalid parameters and NumericError
// (reporting the violating draw count) if any eta exits the link domain.
DesignDraws build_scenario(const ScenarioConfig& cfg, RngStream& rng);

ScenarioResult run_scenario(const ScenarioConfig& cfg);

// One scenario evaluated for a CSV row: either effects, or the number of
// domain-violating draws for a scenario that failed validation.
struct ScenarioRow {
    ScenarioConfig config;
    std::optional<EffectSummary> effects;
    int dropped_rows = 0;
};

ScenarioRow evaluate_scenario_row(const ScenarioConfig& cfg);

struct SweepAxis {
    std::string name;  // a_x, b_x, a_z, b_z, s_x, s_z, rho, ref_mean
    std::vector<double> values;
};

// Cartesian product sweep (first axis slowest), one CSV row per cell in a
// fixed column order; relative errors that are not defined and the effect
// columns of domain-failed cells are written as the NA token. Returns the
// number of data rows written. Output is byte-identical for a given
// (base config, axes) regardless of host or thread count.
long sweep_grid(const ScenarioConfig& base, const std::vector<SweepAxis>& axes,
                std::ostream& out);

const std::vector<std::string>& scenario_csv_columns();
void write_scenario_csv_header(std::ostream& out);
void write_scenario_csv_row(std::ostream& out, const ScenarioRow& row);

}  // namespace glmpss
