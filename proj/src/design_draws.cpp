#include "glmpss/design_draws.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace glmpss {

DesignDraws::DesignDraws(FamilyLink fl, Eigen::MatrixXd z, Eigen::VectorXd eta,
                         Eigen::VectorXd mass)
    : fl_(fl), z_(std::move(z)), eta_(std::move(eta)), mass_(std::move(mass)) {
    const Eigen::Index n = eta_.size();
    if (n < 1) {
        throw NumericError("DesignDraws requires at least one draw");
    }
    if (z_.rows() != n || mass_.size() != n) {
        throw NumericError("DesignDraws: z, eta and mass must agree in length");
    }
    if (z_.cols() < 1) {
        throw NumericError("DesignDraws: z needs at least the constant column");
    }
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (z_(i, 0) != 1.0) {
            throw NumericError("DesignDraws: z column 0 must be 1 (draw " +
                               std::to_string(i) + ")");
        }
        if (!(mass_[i] >= 0.0) || !std::isfinite(mass_[i])) {
            throw NumericError("DesignDraws: mass of draw " +
                               std::to_string(i) + " must be >= 0");
        }
        if (!fl_.eta_in_domain(eta_[i])) {
            throw NumericError("DesignDraws: eta " + std::to_string(eta_[i]) +
                               " of draw " + std::to_string(i) +
                               " outside the domain of " + fl_.name());
        }
        total += mass_[i];
    }
    if (std::fabs(total - 1.0) > 1e-12) {
        throw NumericError("DesignDraws: masses sum to " +
                           std::to_string(total) + ", expected 1");
    }
}

DesignDraws DesignDraws::equal_mass(FamilyLink fl, Eigen::MatrixXd z,
                                    Eigen::VectorXd eta) {
    const Eigen::Index n = eta.size();
    if (n < 1) {
        throw NumericError("DesignDraws requires at least one draw");
    }
    Eigen::VectorXd mass = Eigen::VectorXd::Constant(n, 1.0 / double(n));
    // Exact unit total regardless of rounding in 1/n.
    mass[n - 1] = 1.0 - mass.head(n - 1).sum();
    return DesignDraws(fl, std::move(z), std::move(eta), std::move(mass));
}

}  // namespace glmpss
