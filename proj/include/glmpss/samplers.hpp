#pragma once

#include <vector>

#include "glmpss/family_link.hpp"
#include "glmpss/rng.hpp"

namespace glmpss {

struct BetaPair {
    double x;
    double z;
};

// n pairs (B_x, B_z) with Beta(a_x, b_x) and Beta(a_z, b_z) marginals coupled
// through a Gaussian copula with correlation rho. Each pair consumes exactly
// two uniforms: the latent normals are (n1, rho*n1 + sqrt(1-rho^2)*n2) and the
// marginals come from beta_quantile applied to their normal CDF values, so the
// marginal distributions are exact and the draws are reproducible.
std::vector<BetaPair> sample_correlated_betas(int n, double a_x, double b_x,
                                              double a_z, double b_z,
                                              double rho, RngStream& rng);

// One response draw with mean mu under fl's family:
//   Normal(mu, sigma^2)            sigma^2 = aux
//   Bernoulli(mu)
//   Poisson(mu)                    Knuth product below mean 30, then splitting
//   Gamma(shape k, scale mu/k)     Marsaglia-Tsang; variance mu^2/k
//   InverseGaussian(mu, lambda=k)  Michael-Schucany-Haas; variance mu^3/k
double sample_outcome(const FamilyLink& fl, double mu, RngStream& rng);

}  // namespace glmpss
