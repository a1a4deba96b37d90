#include "glmpss/family_link.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace glmpss {

namespace {

bool pair_valid(Family f, Link l) {
    switch (f) {
        case Family::Normal:
            return l == Link::Identity;
        case Family::Bernoulli:
            return l == Link::Identity || l == Link::Logit || l == Link::Log;
        case Family::Poisson:
        case Family::Gamma:
        case Family::InverseGaussian:
            return l == Link::Identity || l == Link::Log || l == Link::Inverse;
    }
    return false;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    s.erase(std::remove_if(s.begin(), s.end(),
                           [](char c) { return c == '-' || c == '_'; }),
            s.end());
    return s;
}

}  // namespace

FamilyLink::FamilyLink(Family family, Link link, double aux)
    : family_(family), link_(link), aux_(aux) {
    if (!pair_valid(family, link)) {
        throw ConfigError("unsupported family/link pair: " + name());
    }
    bool uses_aux = family == Family::Normal || family == Family::Gamma ||
                    family == Family::InverseGaussian;
    if (uses_aux) {
        if (!(aux > 0) || !std::isfinite(aux)) {
            throw ConfigError("auxiliary parameter for " + family_name() +
                              " must be positive and finite");
        }
    } else {
        aux_ = 1.0;
    }
}

FamilyLink FamilyLink::parse(const std::string& family, const std::string& link,
                             double aux) {
    std::string f = lower(family);
    std::string l = lower(link);
    Family fam;
    if (f == "normal" || f == "gaussian") {
        fam = Family::Normal;
    } else if (f == "bernoulli" || f == "binomial") {
        fam = Family::Bernoulli;
    } else if (f == "poisson") {
        fam = Family::Poisson;
    } else if (f == "gamma") {
        fam = Family::Gamma;
    } else if (f == "inversegaussian") {
        fam = Family::InverseGaussian;
    } else {
        throw ConfigError(
            "unknown family '" + family +
            "' (expected normal, bernoulli, poisson, gamma, inverse-gaussian)");
    }
    Link lnk;
    if (l == "identity") {
        lnk = Link::Identity;
    } else if (l == "logit") {
        lnk = Link::Logit;
    } else if (l == "log") {
        lnk = Link::Log;
    } else if (l == "inverse") {
        lnk = Link::Inverse;
    } else {
        throw ConfigError("unknown link '" + link +
                          "' (expected identity, logit, log, inverse)");
    }
    return FamilyLink(fam, lnk, aux);
}

bool FamilyLink::mean_in_domain(double mu) const {
    if (!std::isfinite(mu)) return false;
    switch (family_) {
        case Family::Normal:
            return true;
        case Family::Bernoulli:
            return mu > 0.0 && mu < 1.0;
        case Family::Poisson:
        case Family::Gamma:
        case Family::InverseGaussian:
            return mu > 0.0;
    }
    return false;
}

bool FamilyLink::eta_in_domain(double eta) const {
    if (!std::isfinite(eta)) return false;
    switch (link_) {
        case Link::Identity:
            return mean_in_domain(eta);
        case Link::Logit:
            return true;
        case Link::Log:
            // Bernoulli means must stay below 1, so eta = log(mu) < 0.
            return family_ != Family::Bernoulli || eta < 0.0;
        case Link::Inverse:
            return eta > 0.0;
    }
    return false;
}

bool FamilyLink::y_in_support(double y) const {
    if (!std::isfinite(y)) return false;
    switch (family_) {
        case Family::Normal:
            return true;
        case Family::Bernoulli:
            return y == 0.0 || y == 1.0;
        case Family::Poisson:
            return y >= 0.0;
        case Family::Gamma:
        case Family::InverseGaussian:
            return y > 0.0;
    }
    return false;
}

double FamilyLink::link_value(double mu) const {
    if (!mean_in_domain(mu)) {
        throw NumericError("mean " + std::to_string(mu) +
                           " outside the domain of " + name());
    }
    switch (link_) {
        case Link::Identity:
            return mu;
        case Link::Logit:
            return std::log(mu / (1.0 - mu));
        case Link::Log:
            return std::log(mu);
        case Link::Inverse:
            return 1.0 / mu;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double FamilyLink::inverse_link(double eta) const {
    if (!eta_in_domain(eta)) {
        throw NumericError("eta " + std::to_string(eta) +
                           " outside the domain of " + name());
    }
    switch (link_) {
        case Link::Identity:
            return eta;
        case Link::Logit:
            return 1.0 / (1.0 + std::exp(-eta));
        case Link::Log:
            return std::exp(eta);
        case Link::Inverse:
            return 1.0 / eta;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

LinkEval FamilyLink::eval(double eta) const {
    double mu = inverse_link(eta);
    double dmu;
    switch (link_) {
        case Link::Identity:
            dmu = 1.0;
            break;
        case Link::Logit:
            dmu = mu * (1.0 - mu);
            break;
        case Link::Log:
            dmu = mu;
            break;
        case Link::Inverse:
            dmu = -mu * mu;
            break;
    }
    double v;
    switch (family_) {
        case Family::Normal:
            v = aux_;  // aux = sigma^2
            break;
        case Family::Bernoulli:
            v = mu * (1.0 - mu);
            break;
        case Family::Poisson:
            v = mu;
            break;
        case Family::Gamma:
            v = mu * mu / aux_;  // aux = shape k
            break;
        case Family::InverseGaussian:
            v = mu * mu * mu / aux_;
            break;
    }
    return LinkEval{mu, v, dmu, dmu * dmu / v};
}

std::string FamilyLink::family_name() const {
    switch (family_) {
        case Family::Normal:
            return "normal";
        case Family::Bernoulli:
            return "bernoulli";
        case Family::Poisson:
            return "poisson";
        case Family::Gamma:
            return "gamma";
        case Family::InverseGaussian:
            return "inverse-gaussian";
    }
    return "?";
}

std::string FamilyLink::link_name() const {
    switch (link_) {
        case Link::Identity:
            return "identity";
        case Link::Logit:
            return "logit";
        case Link::Log:
            return "log";
        case Link::Inverse:
            return "inverse";
    }
    return "?";
}

std::string FamilyLink::name() const {
    return family_name() + "/" + link_name();
}

}  // namespace glmpss
