#pragma once

#include <vector>

namespace glmpss::pss {

// Asymptotic power of the size-alpha Wald test with df numerator degrees of
// freedom at sample size n and noncentrality rate f2: the upper tail of the
// noncentral chi-square(df, n*f2) beyond the central 1-alpha quantile.
double power(long n, double f2, int df, double alpha);

// Smallest n with power(n) >= target_power; power(n-1) < target_power.
long sample_size(double target_power, double f2, int df, double alpha);

// The noncentrality nu* at which the test attains target_power exactly.
double noncentrality_for_power(double target_power, int df, double alpha);

// Power error, in percentage points, incurred by sizing a study with a
// relatively misstated noncentrality: entry (i, j) is
// 100 * (1 - F_{chi2(df, nu_i (1 + re_j))}(crit) - target_i) for the exact
// noncentrality nu_i of target_powers[i] and relative error re_j.
std::vector<std::vector<double>> power_error_table(
    const std::vector<double>& target_powers,
    const std::vector<double>& relative_errors, int df = 1,
    double alpha = 0.05);

}  // namespace glmpss::pss
