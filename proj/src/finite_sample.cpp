#include "glmpss/finite_sample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "glmpss/effect_size.hpp"
#include "glmpss/glm_fit.hpp"
#include "glmpss/samplers.hpp"

namespace glmpss {

Eigen::VectorXd EmpiricalDesign::eta() const {
    return z * lambda + x * beta;
}

void EmpiricalDesign::validate() const {
    const Eigen::Index n = z.rows();
    if (n < 1) {
        throw NumericError("empirical design has no rows");
    }
    if (x.rows() != n) {
        throw NumericError("empirical design: z and x row counts differ");
    }
    if (z.cols() < 1 || x.cols() < 1) {
        throw NumericError(
            "empirical design needs the intercept column and at least one "
            "predictor");
    }
    if (lambda.size() != z.cols() || beta.size() != x.cols()) {
        throw NumericError(
            "empirical design: coefficient lengths do not match the columns");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (z(i, 0) != 1.0) {
            throw NumericError("empirical design: z column 0 must be 1 (row " +
                               std::to_string(i) + ")");
        }
    }
    Eigen::VectorXd e = eta();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!fl.eta_in_domain(e[i])) {
            throw NumericError("empirical design: eta " + std::to_string(e[i]) +
                               " at row " + std::to_string(i) +
                               " outside the domain of " + fl.name());
        }
    }
}

DesignDraws EmpiricalDesign::draws() const {
    validate();
    return DesignDraws::equal_mass(fl, z, eta());
}

namespace {

// f2 of the design with beta scaled by delta; nullopt when any eta (or its
// projection) exits the link domain.
std::optional<double> f2_at_scale(const EmpiricalDesign& design, double delta) {
    Eigen::VectorXd eta = design.z * design.lambda +
                          delta * (design.x * design.beta);
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        if (!design.fl.eta_in_domain(eta[i])) {
            return std::nullopt;
        }
    }
    try {
        DesignDraws draws =
            DesignDraws::equal_mass(design.fl, design.z, std::move(eta));
        return effect_sizes_from_draws(draws).f2;
    } catch (const NumericError&) {
        return std::nullopt;
    }
}

}  // namespace

double rescale_beta_to_f2(const EmpiricalDesign& design, double target_f2) {
    design.validate();
    if (!(target_f2 > 0) || !std::isfinite(target_f2)) {
        throw NumericError("rescale_beta_to_f2 requires target f2 > 0");
    }
    std::optional<double> at_one = f2_at_scale(design, 1.0);
    if (!at_one) {
        throw NumericError("rescale_beta_to_f2: design is infeasible as given");
    }
    if (!(*at_one > 0)) {
        throw NumericError(
            "rescale_beta_to_f2: beta carries no effect (f2 = 0 at every "
            "scale)");
    }
    if (*at_one == target_f2) {
        return 1.0;
    }
    // Bracket the target. f2 is nondecreasing in delta with f2(0) = 0.
    double lo = 0.0, hi = 1.0;
    double best_feasible = 0.0, best_f2 = 0.0;
    if (*at_one >= target_f2) {
        best_feasible = 1.0;
        best_f2 = *at_one;
    } else {
        lo = 1.0;
        best_feasible = 1.0;
        best_f2 = *at_one;
        for (;;) {
            hi *= 2.0;
            if (hi > 1e9) {
                throw ConvergenceError(
                    "rescale_beta_to_f2: target not bracketed below delta = "
                    "1e9");
            }
            std::optional<double> f = f2_at_scale(design, hi);
            if (!f || *f >= target_f2) {
                break;  // bracketed, or hit the domain boundary
            }
            lo = hi;
            best_feasible = hi;
            best_f2 = *f;
        }
    }
    // Bisection; infeasible midpoints shrink from above (larger delta only
    // spreads eta further, so the feasible set is an interval at 0).
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        std::optional<double> f = f2_at_scale(design, mid);
        if (!f) {
            hi = mid;
            continue;
        }
        if (std::fabs(*f - target_f2) < std::fabs(best_f2 - target_f2)) {
            best_feasible = mid;
            best_f2 = *f;
        }
        if (*f < target_f2) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (std::fabs(*f - target_f2) <= 1e-10 * std::max(1.0, target_f2) &&
            hi - lo <= 1e-12 * (1.0 + hi)) {
            return mid;
        }
    }
    if (std::fabs(best_f2 - target_f2) > 1e-8) {
        throw NumericError(
            "rescale_beta_to_f2: eta leaves the link domain before the target "
            "is reached (last feasible delta " +
            std::to_string(best_feasible) + ", f2 " + std::to_string(best_f2) +
            ")");
    }
    return best_feasible;
}

PowerSim simulate_power(const EmpiricalDesign& design, int n, int replicates,
                        double alpha, std::uint64_t seed) {
    design.validate();
    const auto q = static_cast<int>(design.z.cols());
    const auto p = static_cast<int>(design.x.cols());
    if (n < q + p + 10) {
        throw ConfigError("simulate_power requires n >= columns + 10");
    }
    if (replicates < 1) {
        throw ConfigError("simulate_power requires at least one replicate");
    }
    if (!(alpha > 0) || !(alpha < 1)) {
        throw ConfigError("simulate_power requires alpha in (0, 1)");
    }

    // Canonical row order: replicate streams are keyed by replicate index
    // alone, so sorting the rows first makes the result invariant to how the
    // caller happened to order them.
    const Eigen::Index rows = design.z.rows();
    std::vector<int> order(rows);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        for (Eigen::Index j = 1; j < design.z.cols(); ++j) {
            if (design.z(a, j) != design.z(b, j)) {
                return design.z(a, j) < design.z(b, j);
            }
        }
        for (Eigen::Index j = 0; j < design.x.cols(); ++j) {
            if (design.x(a, j) != design.x(b, j)) {
                return design.x(a, j) < design.x(b, j);
            }
        }
        return false;
    });
    Eigen::MatrixXd pool(rows, q + p);
    Eigen::VectorXd mu(rows);
    Eigen::VectorXd eta = design.eta();
    for (Eigen::Index i = 0; i < rows; ++i) {
        pool.row(i).head(q) = design.z.row(order[i]);
        pool.row(i).tail(p) = design.x.row(order[i]);
        mu[i] = design.fl.inverse_link(eta[order[i]]);
    }

    // Coefficients of Normal/Gamma/InverseGaussian fits do not depend on the
    // dispersion, so fit at unit dispersion and rescale the information by
    // the Pearson plug-in estimate afterwards (w is proportional to 1/sigma^2
    // and k across all their links).
    const bool estimates_dispersion = design.fl.family() == Family::Normal ||
                                      design.fl.family() == Family::Gamma ||
                                      design.fl.family() ==
                                          Family::InverseGaussian;
    FamilyLink fit_fl(design.fl.family(), design.fl.link(), 1.0);
    std::vector<int> test_idx(p);
    std::iota(test_idx.begin(), test_idx.end(), q);

    PowerSim out;
    out.replicates = replicates;
    long rejects = 0;
    Eigen::MatrixXd d(n, q + p);
    Eigen::VectorXd y(n);
    for (int rep = 0; rep < replicates; ++rep) {
        RngStream rng(seed, static_cast<std::uint64_t>(rep));
        for (int i = 0; i < n; ++i) {
            auto pick = static_cast<Eigen::Index>(rng.next_uniform() *
                                                  static_cast<double>(rows));
            if (pick >= rows) pick = rows - 1;
            d.row(i) = pool.row(pick);
            y[i] = sample_outcome(design.fl, mu[pick], rng);
        }
        try {
            FitResult fit = irls_fit(d, y, fit_fl);
            if (!fit.converged) {
                ++out.fit_failures;  // includes separated fits (|coef| > 15)
                continue;
            }
            if (estimates_dispersion) {
                double disp = pearson_dispersion(d, y, fit_fl,
                                                 fit.coefficients);
                if (!(disp > 0) || !std::isfinite(disp)) {
                    ++out.fit_failures;
                    continue;
                }
                // disp estimates sigma^2 (Normal) or 1/k (Gamma, IG).
                fit.information /= disp;
            }
            if (wald_test(fit, test_idx, alpha).reject) {
                ++rejects;
            }
        } catch (const NumericError&) {
            ++out.fit_failures;
        }
    }
    const int used = replicates - out.fit_failures;
    if (used < 1) {
        throw NumericError("simulate_power: every replicate failed to fit");
    }
    out.rejection_rate = static_cast<double>(rejects) / used;
    out.mc_stderr = std::sqrt(out.rejection_rate * (1.0 - out.rejection_rate) /
                              used);
    return out;
}

}  // namespace glmpss
