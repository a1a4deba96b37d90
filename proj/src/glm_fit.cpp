#include "glmpss/glm_fit.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>

#include "glmpss/special_functions.hpp"

namespace glmpss {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Log-likelihood up to terms not involving the coefficients; used only to
// compare candidate steps, so dispersion factors that rescale the whole
// objective are dropped as well.
double log_likelihood(const Eigen::VectorXd& y, const Eigen::VectorXd& eta,
                      const FamilyLink& fl) {
    double ll = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (!fl.eta_in_domain(eta[i])) {
            return -kInf;
        }
        double mu = fl.inverse_link(eta[i]);
        switch (fl.family()) {
            case Family::Normal:
                ll -= 0.5 * (y[i] - mu) * (y[i] - mu);
                break;
            case Family::Bernoulli:
                ll += y[i] * std::log(mu) + (1.0 - y[i]) * std::log(1.0 - mu);
                break;
            case Family::Poisson:
                ll += y[i] * std::log(mu) - mu;
                break;
            case Family::Gamma:
                ll += -y[i] / mu - std::log(mu);
                break;
            case Family::InverseGaussian:
                ll += -0.5 * (y[i] - mu) * (y[i] - mu) / (mu * mu * y[i]);
                break;
        }
        if (!std::isfinite(ll)) {
            return -kInf;
        }
    }
    return ll;
}

// Intercept for the starting point: g applied to the response mean, nudged
// inside the mean domain where the boundary is attainable; empirical logit
// for the logit link.
double start_intercept(const Eigen::VectorXd& y, const FamilyLink& fl) {
    const double n = static_cast<double>(y.size());
    const double ybar = y.mean();
    switch (fl.link()) {
        case Link::Logit: {
            double s = y.sum();
            return std::log((s + 0.5) / (n - s + 0.5));
        }
        case Link::Identity:
        case Link::Log:
        case Link::Inverse: {
            double mu = ybar;
            if (fl.family() == Family::Bernoulli) {
                double eps = 1.0 / (n + 4.0);
                mu = std::min(std::max(mu, eps), 1.0 - eps);
            } else if (fl.family() != Family::Normal && !(mu > 0)) {
                mu = 0.5 / n;
            }
            return fl.link_value(mu);
        }
    }
    return 0.0;
}

Eigen::VectorXd solve_information(const Eigen::MatrixXd& info,
                                  const Eigen::VectorXd& rhs) {
    Eigen::LLT<Eigen::MatrixXd> llt(info);
    if (llt.info() == Eigen::Success && llt.rcond() > 1e-12) {
        return llt.solve(rhs);
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    if (ldlt.info() == Eigen::Success && ldlt.rcond() > 1e-12 &&
        ldlt.isPositive()) {
        return ldlt.solve(rhs);
    }
    throw NumericError(
        "weighted design matrix is numerically singular (condition estimate "
        "above 1e12)");
}

}  // namespace

FitResult irls_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                   const FamilyLink& fl, int max_iterations) {
    const Eigen::Index n = design.rows();
    const Eigen::Index d = design.cols();
    if (n != y.size()) {
        throw NumericError("irls_fit: design and response lengths differ");
    }
    if (n <= d) {
        throw NumericError("irls_fit: need more observations than columns");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!fl.y_in_support(y[i])) {
            throw NumericError("irls_fit: response " + std::to_string(y[i]) +
                               " at row " + std::to_string(i) +
                               " outside the support of " + fl.family_name());
        }
    }

    FitResult fit;
    fit.coefficients = Eigen::VectorXd::Zero(d);
    fit.coefficients[0] = start_intercept(y, fl);
    Eigen::VectorXd eta = design * fit.coefficients;
    double objective = log_likelihood(y, eta, fl);

    Eigen::VectorXd weights(n), work(n), score_scale(n);
    Eigen::MatrixXd info(d, d);
    for (fit.iterations = 1; fit.iterations <= max_iterations;
         ++fit.iterations) {
        // Weights, working response t = eta + (y - mu) / (dmu/deta), and
        // score sum_i (y_i - mu_i) w_i / (dmu/deta)_i x_i at the current
        // iterate.
        for (Eigen::Index i = 0; i < n; ++i) {
            LinkEval ev = fl.eval(eta[i]);
            weights[i] = ev.w;
            work[i] = ev.w * (eta[i] + (y[i] - ev.mu) / ev.dmu_deta);
            score_scale[i] = (y[i] - ev.mu) * ev.w / ev.dmu_deta;
        }
        // Checked before asking for an improving step: at a floating-point
        // plateau around the optimum no candidate can raise the objective.
        if ((design.transpose() * score_scale).norm() < 1e-8) {
            fit.converged = true;
            break;
        }
        info = design.transpose() * weights.asDiagonal() * design;
        Eigen::VectorXd target =
            solve_information(info, design.transpose() * work);

        // Accept a candidate that improves the objective up to rounding: near
        // the optimum the true improvement drops below the resolution of the
        // accumulated log likelihood.
        const double plateau = 1e-12 * (1.0 + std::fabs(objective));
        Eigen::VectorXd step = target - fit.coefficients;
        Eigen::VectorXd candidate = target;
        Eigen::VectorXd cand_eta = design * candidate;
        double cand_obj = log_likelihood(y, cand_eta, fl);
        for (int h = 0; h < 10 && !(cand_obj >= objective - plateau); ++h) {
            step *= 0.5;
            candidate = fit.coefficients + step;
            cand_eta = design * candidate;
            cand_obj = log_likelihood(y, cand_eta, fl);
        }
        if (!std::isfinite(cand_obj) || cand_obj < objective - plateau) {
            // No acceptable step; report the best iterate without converging.
            break;
        }

        double rel_change = step.norm() / (fit.coefficients.norm() + 1.0);
        double obj_change = std::fabs(cand_obj - objective);
        fit.coefficients = candidate;
        eta = cand_eta;
        objective = std::max(objective, cand_obj);
        fit.objective_trace.push_back(objective);
        if (rel_change < 1e-10 ||
            obj_change < 1e-10 * (std::fabs(objective) + 0.1)) {
            fit.converged = true;
            break;
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        weights[i] = fl.eval(eta[i]).w;
    }
    fit.information = design.transpose() * weights.asDiagonal() * design;
    return fit;
}

Eigen::MatrixXd conditional_information(const Eigen::MatrixXd& information,
                                        int n_adjustors, int n_predictors) {
    const int q = n_adjustors;
    const int p = n_predictors;
    if (q < 0 || p < 1 || information.rows() != q + p ||
        information.cols() != q + p) {
        throw NumericError(
            "conditional_information: block sizes do not match the matrix");
    }
    if (q == 0) {
        return information;
    }
    Eigen::MatrixXd i_aa = information.topLeftCorner(q, q);
    Eigen::MatrixXd i_ab = information.topRightCorner(q, p);
    Eigen::MatrixXd i_bb = information.bottomRightCorner(p, p);
    Eigen::LLT<Eigen::MatrixXd> llt(i_aa);
    if (llt.info() != Eigen::Success || llt.rcond() <= 1e-12) {
        Eigen::LDLT<Eigen::MatrixXd> ldlt(i_aa);
        if (ldlt.info() != Eigen::Success || ldlt.rcond() <= 1e-12 ||
            !ldlt.isPositive()) {
            throw NumericError(
                "conditional_information: adjustor block is numerically "
                "singular (condition estimate above 1e12)");
        }
        return i_bb - i_ab.transpose() * ldlt.solve(i_ab);
    }
    return i_bb - i_ab.transpose() * llt.solve(i_ab);
}

WaldResult wald_test(const FitResult& fit,
                     const std::vector<int>& predictor_indices, double alpha) {
    const auto d = static_cast<int>(fit.coefficients.size());
    const auto p = static_cast<int>(predictor_indices.size());
    if (p < 1) {
        throw NumericError("wald_test: empty predictor index set");
    }
    if (!(alpha > 0) || !(alpha < 1)) {
        throw NumericError("wald_test: alpha must be in (0, 1)");
    }
    std::vector<bool> selected(d, false);
    for (int idx : predictor_indices) {
        if (idx < 0 || idx >= d) {
            throw NumericError("wald_test: predictor index " +
                               std::to_string(idx) + " out of range");
        }
        if (selected[idx]) {
            throw NumericError("wald_test: duplicate predictor index " +
                               std::to_string(idx));
        }
        selected[idx] = true;
    }
    // Permute to (complement, selected) and take the Schur complement.
    std::vector<int> order;
    order.reserve(d);
    for (int i = 0; i < d; ++i) {
        if (!selected[i]) order.push_back(i);
    }
    const int q = static_cast<int>(order.size());
    for (int idx : predictor_indices) {
        order.push_back(idx);
    }
    Eigen::MatrixXd perm(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            perm(i, j) = fit.information(order[i], order[j]);
        }
    }
    Eigen::MatrixXd cond = conditional_information(perm, q, p);
    Eigen::VectorXd beta(p);
    for (int i = 0; i < p; ++i) {
        beta[i] = fit.coefficients[predictor_indices[i]];
    }
    WaldResult out;
    out.statistic = beta.dot(cond * beta);
    out.df = p;
    out.p_value = 1.0 - special::chi2_cdf(out.statistic, p);
    double crit = special::noncentral_chi2_quantile(1.0 - alpha, p, 0.0);
    out.reject = out.statistic > crit;
    return out;
}

double pearson_dispersion(const Eigen::MatrixXd& design,
                          const Eigen::VectorXd& y, const FamilyLink& fl,
                          const Eigen::VectorXd& coefficients) {
    const Eigen::Index n = design.rows();
    const Eigen::Index d = design.cols();
    if (n <= d) {
        throw NumericError("pearson_dispersion: no residual degrees of freedom");
    }
    FamilyLink unit(fl.family(), fl.link(), 1.0);
    Eigen::VectorXd eta = design * coefficients;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        LinkEval ev = unit.eval(eta[i]);
        sum += (y[i] - ev.mu) * (y[i] - ev.mu) / ev.v;
    }
    return sum / static_cast<double>(n - d);
}

}  // namespace glmpss
