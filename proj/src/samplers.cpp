#include "glmpss/samplers.hpp"

#include <cmath>

#include "glmpss/special_functions.hpp"

namespace glmpss {

namespace {

// Marsaglia-Tsang for shape >= 1; the shape < 1 case multiplies a
// shape + 1 draw by U^(1/shape).
double sample_gamma(double shape, double scale, RngStream& rng) {
    if (shape < 1.0) {
        double u = rng.next_uniform();
        return sample_gamma(shape + 1.0, scale, rng) *
               std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double z = rng.next_normal();
        double t = 1.0 + c * z;
        if (t <= 0.0) continue;
        double v = t * t * t;
        double u = rng.next_uniform();
        if (u < 1.0 - 0.0331 * z * z * z * z) {
            return scale * d * v;
        }
        if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) {
            return scale * d * v;
        }
    }
}

// Knuth's product method below mean 30; larger means are split into
// independent pieces with mean <= 30 (a Poisson sum is Poisson).
double sample_poisson(double mean, RngStream& rng) {
    double total = 0.0;
    while (mean > 30.0) {
        int chunks = static_cast<int>(std::ceil(mean / 30.0));
        double part = mean / chunks;
        mean -= part;
        total += sample_poisson(part, rng);
    }
    double limit = std::exp(-mean);
    double prod = rng.next_uniform();
    long k = 0;
    while (prod > limit) {
        prod *= rng.next_uniform();
        ++k;
    }
    total += static_cast<double>(k);
    return total;
}

// Michael-Schucany-Haas for InverseGaussian(mu, lambda).
double sample_inverse_gaussian(double mu, double lambda, RngStream& rng) {
    double z = rng.next_normal();
    double y = z * z;
    double x = mu + 0.5 * mu * mu * y / lambda -
               0.5 * mu / lambda *
                   std::sqrt(4.0 * mu * lambda * y + mu * mu * y * y);
    double u = rng.next_uniform();
    if (u <= mu / (mu + x)) {
        return x;
    }
    return mu * mu / x;
}

}  // namespace

std::vector<BetaPair> sample_correlated_betas(int n, double a_x, double b_x,
                                              double a_z, double b_z,
                                              double rho, RngStream& rng) {
    if (n < 1) {
        throw NumericError("sample_correlated_betas requires n >= 1");
    }
    for (double shape : {a_x, b_x, a_z, b_z}) {
        if (!(shape > 0) || !std::isfinite(shape)) {
            throw NumericError(
                "sample_correlated_betas requires positive finite shapes");
        }
    }
    if (!(rho > -1.0) || !(rho < 1.0)) {
        throw NumericError("sample_correlated_betas requires rho in (-1, 1)");
    }
    using special::detail::log_gamma;
    const double log_beta_x = log_gamma(a_x) + log_gamma(b_x) -
                              log_gamma(a_x + b_x);
    const double log_beta_z = log_gamma(a_z) + log_gamma(b_z) -
                              log_gamma(a_z + b_z);
    const double tail = std::sqrt(1.0 - rho * rho);
    std::vector<BetaPair> out(static_cast<std::size_t>(n));
    for (auto& pair : out) {
        double n1 = rng.next_normal();
        double n2 = rng.next_normal();
        double nz = rho * n1 + tail * n2;
        double ux = special::normal_cdf(n1);
        double uz = special::normal_cdf(nz);
        pair.x = special::detail::beta_quantile_pre(ux, a_x, b_x, log_beta_x);
        pair.z = special::detail::beta_quantile_pre(uz, a_z, b_z, log_beta_z);
    }
    return out;
}

double sample_outcome(const FamilyLink& fl, double mu, RngStream& rng) {
    if (!fl.mean_in_domain(mu)) {
        throw NumericError("sample_outcome: mean " + std::to_string(mu) +
                           " outside the domain of " + fl.name());
    }
    switch (fl.family()) {
        case Family::Normal:
            return mu + std::sqrt(fl.aux()) * rng.next_normal();
        case Family::Bernoulli:
            return rng.next_uniform() < mu ? 1.0 : 0.0;
        case Family::Poisson:
            return sample_poisson(mu, rng);
        case Family::Gamma:
            return sample_gamma(fl.aux(), mu / fl.aux(), rng);
        case Family::InverseGaussian:
            return sample_inverse_gaussian(mu, fl.aux(), rng);
    }
    throw NumericError("sample_outcome: unknown family");
}

}  // namespace glmpss
