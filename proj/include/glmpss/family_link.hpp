#pragma once

#include <string>

#include "glmpss/errors.hpp"

namespace glmpss {

enum class Family { Normal, Bernoulli, Poisson, Gamma, InverseGaussian };
enum class Link { Identity, Logit, Log, Inverse };

// Everything link_eval produces for one value of the linear predictor:
// mean, variance, mean derivative, and the information weight
// w = (dmu/deta)^2 / v.
struct LinkEval {
    double mu;
    double v;
    double dmu_deta;
    double w;
};

// A validated (family, link) pair plus the auxiliary dispersion parameter
// (sigma^2 for Normal, shape k for Gamma and InverseGaussian, unused and
// stored as 1 otherwise). Only the canonical-table pairs are constructible:
//
//   Normal:           identity
//   Bernoulli:        identity, logit, log
//   Poisson:          identity, log, inverse
//   Gamma:            identity, log, inverse
//   InverseGaussian:  identity, log, inverse
class FamilyLink {
public:
    FamilyLink(Family family, Link link, double aux = 1.0);

    // Case-insensitive names; "binomial" and "inverse-gaussian" are accepted
    // as aliases. Unknown names or invalid pairs raise ConfigError.
    static FamilyLink parse(const std::string& family, const std::string& link,
                            double aux = 1.0);

    Family family() const { return family_; }
    Link link() const { return link_; }
    double aux() const { return aux_; }

    // g(mu); mu must lie in the open mean domain.
    double link_value(double mu) const;

    // g^{-1}(eta); eta must lie in the link domain.
    double inverse_link(double eta) const;

    bool eta_in_domain(double eta) const;
    bool mean_in_domain(double mu) const;
    bool y_in_support(double y) const;

    // Evaluate mu, v, dmu/deta and w at eta. Throws NumericError when eta is
    // outside the link domain (e.g. identity-link Bernoulli with eta >= 1).
    LinkEval eval(double eta) const;

    std::string family_name() const;
    std::string link_name() const;
    std::string name() const;  // "bernoulli/logit"

private:
    Family family_;
    Link link_;
    double aux_;
};

}  // namespace glmpss
