#pragma once

#include <Eigen/Dense>

#include "glmpss/family_link.hpp"

namespace glmpss {

// A discrete design distribution: n draws of the adjustor vector z (first
// column identically 1) together with the linear predictor eta and a
// probability mass per draw. Population quantities downstream are
// mass-weighted sums over these rows, so a DesignDraws can represent an exact
// finite design (equal or tabulated masses) or a Monte Carlo cloud alike.
class DesignDraws {
public:
    DesignDraws(FamilyLink fl, Eigen::MatrixXd z, Eigen::VectorXd eta,
                Eigen::VectorXd mass);

    static DesignDraws equal_mass(FamilyLink fl, Eigen::MatrixXd z,
                                  Eigen::VectorXd eta);

    const FamilyLink& family_link() const { return fl_; }
    const Eigen::MatrixXd& z() const { return z_; }
    const Eigen::VectorXd& eta() const { return eta_; }
    const Eigen::VectorXd& mass() const { return mass_; }
    Eigen::Index size() const { return eta_.size(); }
    Eigen::Index q() const { return z_.cols(); }

private:
    FamilyLink fl_;
    Eigen::MatrixXd z_;
    Eigen::VectorXd eta_;
    Eigen::VectorXd mass_;
};

}  // namespace glmpss
