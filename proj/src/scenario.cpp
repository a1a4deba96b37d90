#include "glmpss/scenario.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include <Eigen/Eigenvalues>

#include "glmpss/csv.hpp"
#include "glmpss/samplers.hpp"

namespace glmpss {

namespace {

void validate_config(const ScenarioConfig& cfg) {
    for (double shape : {cfg.a_x, cfg.b_x, cfg.a_z, cfg.b_z}) {
        if (!(shape > 0) || !std::isfinite(shape)) {
            throw ConfigError("scenario Beta shapes must be positive and finite");
        }
    }
    for (double s : {cfg.s_x, cfg.s_z}) {
        if (!(s >= 0) || !std::isfinite(s)) {
            throw ConfigError("scenario scales s_x, s_z must be >= 0");
        }
    }
    if (!(cfg.rho > -1.0) || !(cfg.rho < 1.0)) {
        throw ConfigError("scenario copula correlation must lie in (-1, 1)");
    }
    if (!cfg.fl.mean_in_domain(cfg.ref_mean)) {
        throw ConfigError("scenario reference mean " +
                          std::to_string(cfg.ref_mean) +
                          " outside the mean domain of " + cfg.fl.name());
    }
    if (cfg.n_mc < 1) {
        throw ConfigError("scenario n_mc must be >= 1");
    }
}

double beta_mean(double a, double b) { return a / (a + b); }

double beta_sd(double a, double b) {
    double s = a + b;
    return std::sqrt(a * b / (s * s * (s + 1.0)));
}

struct RawScenario {
    Eigen::MatrixXd z;
    Eigen::VectorXd eta;
    double iota = 0;
    int violations = 0;
};

RawScenario raw_scenario(const ScenarioConfig& cfg, RngStream& rng) {
    validate_config(cfg);
    RawScenario raw;
    raw.iota = cfg.fl.link_value(cfg.ref_mean);
    const double cx = cfg.s_x > 0 ? cfg.s_x / beta_sd(cfg.a_x, cfg.b_x) : 0.0;
    const double cz = cfg.s_z > 0 ? cfg.s_z / beta_sd(cfg.a_z, cfg.b_z) : 0.0;
    const double mx = beta_mean(cfg.a_x, cfg.b_x);
    const double mz = beta_mean(cfg.a_z, cfg.b_z);
    auto pairs = sample_correlated_betas(cfg.n_mc, cfg.a_x, cfg.b_x, cfg.a_z,
                                         cfg.b_z, cfg.rho, rng);
    raw.z.resize(cfg.n_mc, 2);
    raw.eta.resize(cfg.n_mc);
    for (int i = 0; i < cfg.n_mc; ++i) {
        raw.z(i, 0) = 1.0;
        raw.z(i, 1) = pairs[i].z;
        raw.eta[i] =
            raw.iota + cz * (pairs[i].z - mz) + cx * (pairs[i].x - mx);
        if (!cfg.fl.eta_in_domain(raw.eta[i])) {
            ++raw.violations;
        }
    }
    return raw;
}

double moment_condition_estimate(const DesignDraws& draws) {
    const auto& fl = draws.family_link();
    const auto& eta = draws.eta();
    const auto& mass = draws.mass();
    Eigen::VectorXd mw(draws.size());
    for (Eigen::Index i = 0; i < draws.size(); ++i) {
        mw[i] = mass[i] * fl.eval(eta[i]).w;
    }
    Eigen::MatrixXd m = draws.z().transpose() * mw.asDiagonal() * draws.z();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    double lo = es.eigenvalues().minCoeff();
    double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0)) {
        return std::numeric_limits<double>::infinity();
    }
    return hi / lo;
}

void mix_into(std::uint64_t& h, std::uint64_t v) {
    h = mix64(h ^ (v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2)));
}

void mix_double(std::uint64_t& h, double v) {
    mix_into(h, std::bit_cast<std::uint64_t>(v));
}

}  // namespace

std::uint64_t scenario_stream_id(const ScenarioConfig& cfg) {
    std::uint64_t h = 0x5CE5A9D0EB1C933FULL;
    mix_into(h, static_cast<std::uint64_t>(cfg.fl.family()));
    mix_into(h, static_cast<std::uint64_t>(cfg.fl.link()));
    mix_double(h, cfg.fl.aux());
    mix_double(h, cfg.a_x);
    mix_double(h, cfg.b_x);
    mix_double(h, cfg.a_z);
    mix_double(h, cfg.b_z);
    mix_double(h, cfg.s_x);
    mix_double(h, cfg.s_z);
    mix_double(h, cfg.rho);
    mix_double(h, cfg.ref_mean);
    mix_into(h, static_cast<std::uint64_t>(cfg.n_mc));
    return h;
}

DesignDraws build_scenario(const ScenarioConfig& cfg, RngStream& rng) {
    RawScenario raw = raw_scenario(cfg, rng);
    if (raw.violations > 0) {
        throw NumericError("scenario for " + cfg.fl.name() + ": " +
                           std::to_string(raw.violations) + " of " +
                           std::to_string(cfg.n_mc) +
                           " draws fall outside the link domain");
    }
    return DesignDraws::equal_mass(cfg.fl, std::move(raw.z),
                                   std::move(raw.eta));
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    ScenarioResult out;
    out.config = cfg;
    out.stream_id = scenario_stream_id(cfg);
    RngStream rng(cfg.seed, out.stream_id);
    DesignDraws draws = build_scenario(cfg, rng);
    std::optional<double> w1_override;
    if (cfg.w1_at_ref_mean) {
        w1_override = cfg.fl.eval(cfg.fl.link_value(cfg.ref_mean)).w;
    }
    out.effects = effect_sizes_from_draws(draws, w1_override);
    out.moment_condition = moment_condition_estimate(draws);
    return out;
}

ScenarioRow evaluate_scenario_row(const ScenarioConfig& cfg) {
    ScenarioRow row;
    row.config = cfg;
    RngStream rng(cfg.seed, scenario_stream_id(cfg));
    RawScenario raw = raw_scenario(cfg, rng);
    if (raw.violations > 0) {
        row.dropped_rows = raw.violations;
        return row;
    }
    try {
        DesignDraws draws = DesignDraws::equal_mass(cfg.fl, std::move(raw.z),
                                                    std::move(raw.eta));
        std::optional<double> w1_override;
        if (cfg.w1_at_ref_mean) {
            w1_override = cfg.fl.eval(cfg.fl.link_value(cfg.ref_mean)).w;
        }
        row.effects = effect_sizes_from_draws(draws, w1_override);
    } catch (const NumericError&) {
        row.effects.reset();
    }
    return row;
}

const std::vector<std::string>& scenario_csv_columns() {
    static const std::vector<std::string> cols = {
        "family", "link",     "aux",  "a_x",    "b_x",   "a_z",
        "b_z",    "s_x",      "s_z",  "rho",    "ref_mean", "n_mc",
        "seed",   "phi",      "pseudo_r2", "f2", "f2_phi", "f2_r",
        "re_phi", "re_r",     "mean_y", "dropped_rows"};
    return cols;
}

void write_scenario_csv_header(std::ostream& out) {
    const auto& cols = scenario_csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
        out << (i ? "," : "") << cols[i];
    }
    out << "\n";
}

void write_scenario_csv_row(std::ostream& out, const ScenarioRow& row) {
    const auto& cfg = row.config;
    auto opt = [](const std::optional<double>& v) {
        return v ? format_full(*v) : std::string(kNaToken);
    };
    out << cfg.fl.family_name() << ',' << cfg.fl.link_name() << ','
        << format_full(cfg.fl.aux()) << ',' << format_full(cfg.a_x) << ','
        << format_full(cfg.b_x) << ',' << format_full(cfg.a_z) << ','
        << format_full(cfg.b_z) << ',' << format_full(cfg.s_x) << ','
        << format_full(cfg.s_z) << ',' << format_full(cfg.rho) << ','
        << format_full(cfg.ref_mean) << ',' << cfg.n_mc << ',' << cfg.seed
        << ',';
    if (row.effects) {
        const auto& e = *row.effects;
        out << format_full(e.phi) << ',' << format_full(e.pseudo_r2) << ','
            << format_full(e.f2) << ',' << format_full(e.f2_phi) << ','
            << format_full(e.f2_r) << ',' << opt(e.re_phi) << ','
            << opt(e.re_r) << ',' << format_full(e.mean_y);
    } else {
        for (int i = 0; i < 8; ++i) {
            out << (i ? "," : "") << kNaToken;
        }
    }
    out << ',' << row.dropped_rows << "\n";
}

long sweep_grid(const ScenarioConfig& base, const std::vector<SweepAxis>& axes,
                std::ostream& out) {
    static const std::vector<std::string> valid = {
        "a_x", "b_x", "a_z", "b_z", "s_x", "s_z", "rho", "ref_mean"};
    for (std::size_t i = 0; i < axes.size(); ++i) {
        if (std::find(valid.begin(), valid.end(), axes[i].name) ==
            valid.end()) {
            throw ConfigError("unknown sweep axis '" + axes[i].name + "'");
        }
        if (axes[i].values.empty()) {
            throw ConfigError("sweep axis '" + axes[i].name + "' has no values");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (axes[j].name == axes[i].name) {
                throw ConfigError("duplicate sweep axis '" + axes[i].name +
                                  "'");
            }
        }
    }
    write_scenario_csv_header(out);
    std::vector<std::size_t> idx(axes.size(), 0);
    long rows = 0;
    for (;;) {
        ScenarioConfig cfg = base;
        for (std::size_t a = 0; a < axes.size(); ++a) {
            double v = axes[a].values[idx[a]];
            const std::string& name = axes[a].name;
            if (name == "a_x") cfg.a_x = v;
            else if (name == "b_x") cfg.b_x = v;
            else if (name == "a_z") cfg.a_z = v;
            else if (name == "b_z") cfg.b_z = v;
            else if (name == "s_x") cfg.s_x = v;
            else if (name == "s_z") cfg.s_z = v;
            else if (name == "rho") cfg.rho = v;
            else cfg.ref_mean = v;
        }
        write_scenario_csv_row(out, evaluate_scenario_row(cfg));
        ++rows;
        // Advance the last axis fastest.
        std::size_t a = axes.size();
        for (; a > 0; --a) {
            if (++idx[a - 1] < axes[a - 1].values.size()) {
                break;
            }
            idx[a - 1] = 0;
        }
        if (a == 0 || axes.empty()) {
            break;
        }
    }
    return rows;
}

}  // namespace glmpss
