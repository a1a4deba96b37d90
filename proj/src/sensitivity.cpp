#include "glmpss/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/QR>

#include "glmpss/errors.hpp"

namespace glmpss {

std::vector<ParamRange> sensitivity_ranges(const FamilyLink& fl) {
    // Shape and correlation ranges are shared; the eta scales and the
    // reference mean depend on where each family/link keeps its means.
    double s_lo, s_hi, ref_lo, ref_hi;
    switch (fl.family()) {
        case Family::Bernoulli:
            if (fl.link() == Link::Logit) {
                s_lo = std::sqrt(0.01);
                s_hi = std::sqrt(0.09);
            } else {
                s_lo = std::sqrt(0.0002);
                s_hi = std::sqrt(0.0018);
            }
            ref_lo = 0.15;
            ref_hi = 0.35;
            break;
        case Family::Poisson:
            s_lo = std::sqrt(0.002);
            s_hi = std::sqrt(0.018);
            ref_lo = 0.5;
            ref_hi = 1.5;
            break;
        case Family::Gamma:
            s_lo = std::sqrt(0.001);
            s_hi = std::sqrt(0.009);
            ref_lo = 2.0;
            ref_hi = 6.0;
            break;
        default:
            throw ConfigError("no sensitivity ranges defined for " + fl.name());
    }
    return {
        {"a_x", 0.5, 1.5}, {"b_x", 0.5, 1.5},       {"a_z", 0.5, 1.5},
        {"b_z", 0.5, 1.5}, {"s_x", s_lo, s_hi},     {"s_z", s_lo, s_hi},
        {"ref_mean", ref_lo, ref_hi}, {"rho", -0.25, 0.25},
    };
}

Eigen::MatrixXd lhs_sample(const std::vector<std::pair<double, double>>& ranges,
                           int n, RngStream& rng) {
    const auto k = static_cast<Eigen::Index>(ranges.size());
    if (n < 1 || k < 1) {
        throw ConfigError("lhs_sample requires n >= 1 and at least one range");
    }
    for (const auto& [lo, hi] : ranges) {
        if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
            throw ConfigError("lhs_sample requires finite ranges with lo < hi");
        }
    }
    Eigen::MatrixXd out(n, k);
    std::vector<int> strata(n);
    for (Eigen::Index j = 0; j < k; ++j) {
        // One point per stratum, uniform within it; the stratum order is an
        // independent uniform permutation per parameter (Fisher-Yates).
        for (int i = 0; i < n; ++i) {
            out(i, j) = rng.next_uniform();
        }
        std::iota(strata.begin(), strata.end(), 0);
        for (int i = n - 1; i > 0; --i) {
            auto pick = static_cast<int>(rng.next_uniform() * (i + 1));
            if (pick > i) pick = i;
            std::swap(strata[i], strata[pick]);
        }
        const auto [lo, hi] = ranges[j];
        const double width = (hi - lo) / n;
        for (int i = 0; i < n; ++i) {
            out(i, j) = lo + (strata[i] + out(i, j)) * width;
        }
    }
    return out;
}

namespace {

// Average ranks (ties share the mean of their positions), 1-based.
Eigen::VectorXd average_ranks(const Eigen::VectorXd& v) {
    const auto n = static_cast<int>(v.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return v[a] < v[b]; });
    Eigen::VectorXd ranks(n);
    int i = 0;
    while (i < n) {
        int j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) {
            ++j;
        }
        double mean_rank = 0.5 * (i + j) + 1.0;
        for (int t = i; t <= j; ++t) {
            ranks[order[t]] = mean_rank;
        }
        i = j + 1;
    }
    return ranks;
}

}  // namespace

Eigen::VectorXd prcc(const Eigen::MatrixXd& params,
                     const Eigen::VectorXd& response) {
    const Eigen::Index n = params.rows();
    const Eigen::Index k = params.cols();
    if (response.size() != n) {
        throw NumericError("prcc: parameter rows and response length differ");
    }
    if (n < k + 3) {
        throw NumericError("prcc: not enough observations for " +
                           std::to_string(k) + " parameters");
    }
    double spread = response.maxCoeff() - response.minCoeff();
    if (!(spread > 0)) {
        throw NumericError("prcc: response is constant");
    }
    Eigen::MatrixXd rp(n, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        rp.col(j) = average_ranks(params.col(j));
    }
    Eigen::VectorXd ry = average_ranks(response);

    Eigen::VectorXd out(k);
    Eigen::MatrixXd others(n, k);  // intercept + the k-1 remaining columns
    for (Eigen::Index j = 0; j < k; ++j) {
        others.col(0).setOnes();
        Eigen::Index c = 1;
        for (Eigen::Index t = 0; t < k; ++t) {
            if (t != j) {
                others.col(c++) = rp.col(t);
            }
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(others);
        Eigen::VectorXd u = rp.col(j) - others * qr.solve(rp.col(j));
        Eigen::VectorXd v = ry - others * qr.solve(ry);
        double denom = std::sqrt(u.squaredNorm() * v.squaredNorm());
        if (!(denom > 0)) {
            throw NumericError("prcc: rank residuals are degenerate");
        }
        out[j] = u.dot(v) / denom;
    }
    return out;
}

double quantile_type7(std::vector<double> values, double p) {
    if (values.empty()) {
        throw NumericError("quantile of an empty sample");
    }
    if (!(p >= 0) || !(p <= 1)) {
        throw NumericError("quantile level must lie in [0, 1]");
    }
    std::sort(values.begin(), values.end());
    const auto n = static_cast<double>(values.size());
    double h = (n - 1.0) * p;
    auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= values.size()) {
        return values.back();
    }
    return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

MeasureSummary summarize_measure(
    const std::vector<std::optional<double>>& values) {
    MeasureSummary out;
    std::vector<double> defined;
    defined.reserve(values.size());
    for (const auto& v : values) {
        if (v) {
            defined.push_back(*v);
        } else {
            ++out.n_dropped;
        }
    }
    out.n_used = static_cast<int>(defined.size());
    if (defined.empty()) {
        out.zero_marker = true;
        return out;
    }
    out.zero_marker = std::all_of(defined.begin(), defined.end(), [](double v) {
        return std::fabs(v) <= 1e-10;
    });
    out.mean = std::accumulate(defined.begin(), defined.end(), 0.0) /
               static_cast<double>(defined.size());
    out.min = *std::min_element(defined.begin(), defined.end());
    out.max = *std::max_element(defined.begin(), defined.end());
    out.q1 = quantile_type7(defined, 0.25);
    out.median = quantile_type7(defined, 0.5);
    out.q3 = quantile_type7(defined, 0.75);
    return out;
}

SensitivityResult run_sensitivity(const FamilyLink& fl, int n_draws, int n_mc,
                                  std::uint64_t seed) {
    if (n_draws < 12) {
        throw ConfigError("run_sensitivity requires at least 12 draws");
    }
    if (n_mc < 1) {
        throw ConfigError("run_sensitivity requires n_mc >= 1");
    }
    SensitivityResult out;
    out.ranges = sensitivity_ranges(fl);
    std::vector<std::pair<double, double>> bounds;
    bounds.reserve(out.ranges.size());
    for (const auto& r : out.ranges) {
        bounds.emplace_back(r.lo, r.hi);
    }
    // Stream 0 of the seed drives the hypercube; each scenario then uses its
    // own parameter-hashed stream.
    RngStream lhs_rng(seed, 0);
    out.params = lhs_sample(bounds, n_draws, lhs_rng);

    out.rows.reserve(n_draws);
    out.re_phi.reserve(n_draws);
    out.re_r.reserve(n_draws);
    for (int i = 0; i < n_draws; ++i) {
        ScenarioConfig cfg;
        cfg.fl = fl;
        cfg.a_x = out.params(i, 0);
        cfg.b_x = out.params(i, 1);
        cfg.a_z = out.params(i, 2);
        cfg.b_z = out.params(i, 3);
        cfg.s_x = out.params(i, 4);
        cfg.s_z = out.params(i, 5);
        cfg.ref_mean = out.params(i, 6);
        cfg.rho = out.params(i, 7);
        cfg.n_mc = n_mc;
        cfg.seed = seed;
        ScenarioRow row = evaluate_scenario_row(cfg);
        if (!row.effects) {
            ++out.failed_scenarios;
            out.re_phi.emplace_back();
            out.re_r.emplace_back();
        } else {
            auto pct = [](const std::optional<double>& v) {
                return v ? std::optional<double>(*v * 100.0) : std::nullopt;
            };
            out.re_phi.push_back(pct(row.effects->re_phi));
            out.re_r.push_back(pct(row.effects->re_r));
        }
        out.rows.push_back(std::move(row));
    }
    out.phi_summary = summarize_measure(out.re_phi);
    out.r_summary = summarize_measure(out.re_r);

    // PRCC over the draws where the response is defined; skipped entirely
    // for a measure that is identically zero (no variation to attribute).
    auto prcc_for = [&](const std::vector<std::optional<double>>& re,
                        const MeasureSummary& summary)
        -> std::optional<Eigen::VectorXd> {
        if (summary.zero_marker || summary.n_used < 12) {
            return std::nullopt;
        }
        Eigen::MatrixXd p(summary.n_used, out.params.cols());
        Eigen::VectorXd y(summary.n_used);
        Eigen::Index r = 0;
        for (int i = 0; i < n_draws; ++i) {
            if (re[i]) {
                p.row(r) = out.params.row(i);
                y[r] = *re[i];
                ++r;
            }
        }
        return prcc(p, y);
    };
    out.prcc_phi = prcc_for(out.re_phi, out.phi_summary);
    out.prcc_r = prcc_for(out.re_r, out.r_summary);
    return out;
}

}  // namespace glmpss
