#include "glmpss/effect_size.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>

#include "glmpss/errors.hpp"

namespace glmpss {

namespace {

Eigen::VectorXd solve_spd(const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs,
                          const char* what) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() == Eigen::Success && llt.rcond() > 1e-12) {
        return llt.solve(rhs);
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
    if (ldlt.info() == Eigen::Success && ldlt.rcond() > 1e-12 &&
        ldlt.isPositive()) {
        return ldlt.solve(rhs);
    }
    throw NumericError(std::string(what) +
                       " is numerically singular (condition estimate above 1e12)");
}

}  // namespace

Projection weighted_projection(const DesignDraws& draws) {
    const Eigen::Index n = draws.size();
    const auto& z = draws.z();
    const auto& eta = draws.eta();
    const auto& mass = draws.mass();
    const auto& fl = draws.family_link();

    Eigen::VectorXd mw(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        mw[i] = mass[i] * fl.eval(eta[i]).w;
    }
    Eigen::MatrixXd m = z.transpose() * mw.asDiagonal() * z;
    Eigen::VectorXd b = z.transpose() * mw.cwiseProduct(eta);
    Projection proj;
    proj.kappa = solve_spd(m, b, "weighted adjustor moment matrix E[w z z']");
    proj.eta_z = z * proj.kappa;
    return proj;
}

EffectSummary effect_sizes_from_draws(const DesignDraws& draws,
                                      std::optional<double> w1_override) {
    const Eigen::Index n = draws.size();
    const auto& eta = draws.eta();
    const auto& mass = draws.mass();
    const auto& fl = draws.family_link();
    Projection proj = weighted_projection(draws);

    double mean_r = 0, mean_r2 = 0, f2 = 0, m_acc = 0, mean_y = 0, scale = 1;
    for (Eigen::Index i = 0; i < n; ++i) {
        LinkEval ev = fl.eval(eta[i]);
        double eta_z = proj.eta_z[i];
        if (!fl.eta_in_domain(eta_z)) {
            throw NumericError(
                "projected linear predictor " + std::to_string(eta_z) +
                " of draw " + std::to_string(i) + " outside the domain of " +
                fl.name());
        }
        double mu_z = fl.inverse_link(eta_z);
        double r = eta[i] - eta_z;
        mean_r += mass[i] * r;
        mean_r2 += mass[i] * r * r;
        f2 += mass[i] * ev.w * r * r;
        m_acc += mass[i] * (ev.mu - mu_z) * (ev.mu - mu_z) / ev.v;
        mean_y += mass[i] * ev.mu;
        scale += mass[i] * eta[i] * eta[i];
    }
    double var_r = mean_r2 - mean_r * mean_r;
    if (var_r < 0) var_r = 0;

    EffectSummary out;
    out.mean_y = mean_y;
    out.w1 = w1_override ? *w1_override : fl.eval(fl.link_value(mean_y)).w;
    if (!(out.w1 > 0) || !std::isfinite(out.w1)) {
        throw NumericError("reference weight w1 must be positive and finite");
    }

    // eta exactly linear in z leaves only solver roundoff in the residual;
    // snap that to an honest zero so downstream ratios are not noise.
    if (var_r < 1e-26 * scale && f2 < 1e-26 * scale) {
        return out;  // phi, f2, pseudo_r2 and both approximations all zero
    }

    out.phi = 2.0 * std::sqrt(var_r);
    out.f2 = f2;
    out.pseudo_r2 = m_acc / (1.0 + m_acc);
    out.f2_phi = out.w1 * out.phi * out.phi / 4.0;
    out.f2_r = out.pseudo_r2 / (1.0 - out.pseudo_r2);
    if (out.f2 > 0 && (out.f2_phi <= 0 || out.f2_r <= 0)) {
        throw NumericError("degenerate approximation: f2 > 0 but f2_phi or "
                           "f2_r vanished");
    }
    RelativeErrors re = relative_errors(out.f2, out.f2_phi, out.f2_r);
    out.re_phi = re.re_phi;
    out.re_r = re.re_r;
    return out;
}

double f2_phi_approx(double phi, double w1) {
    if (!(phi >= 0) || !std::isfinite(phi)) {
        throw NumericError("f2_phi_approx requires phi >= 0");
    }
    if (!(w1 > 0) || !std::isfinite(w1)) {
        throw NumericError("f2_phi_approx requires w1 > 0");
    }
    return w1 * phi * phi / 4.0;
}

double f2_r_approx(double pseudo_r2) {
    if (!(pseudo_r2 >= 0) || !(pseudo_r2 < 1)) {
        throw NumericError("f2_r_approx requires pseudo_r2 in [0, 1)");
    }
    return pseudo_r2 / (1.0 - pseudo_r2);
}

RelativeErrors relative_errors(double f2, double f2_phi, double f2_r) {
    for (double v : {f2, f2_phi, f2_r}) {
        if (!(v >= 0) || !std::isfinite(v)) {
            throw NumericError("relative_errors requires nonnegative inputs");
        }
    }
    RelativeErrors out;
    if (f2_phi > 0) out.re_phi = (f2 - f2_phi) / f2_phi;
    if (f2_r > 0) out.re_r = (f2 - f2_r) / f2_r;
    return out;
}

}  // namespace glmpss
