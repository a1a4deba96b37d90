#include "glmpss/power.hpp"

#include <cmath>

#include "glmpss/errors.hpp"
#include "glmpss/special_functions.hpp"

namespace glmpss::pss {

namespace {

void check_test_params(int df, double alpha) {
    if (df < 1) {
        throw NumericError("degrees of freedom must be >= 1");
    }
    if (!(alpha > 0) || !(alpha < 1)) {
        throw NumericError("alpha must be in (0, 1)");
    }
}

double critical_value(int df, double alpha) {
    return special::noncentral_chi2_quantile(1.0 - alpha, df, 0.0);
}

double power_at_ncp(double ncp, int df, double crit) {
    return 1.0 - special::noncentral_chi2_cdf(crit, df, ncp);
}

}  // namespace

double power(long n, double f2, int df, double alpha) {
    check_test_params(df, alpha);
    if (n < 1) {
        throw NumericError("sample size must be >= 1");
    }
    if (!(f2 >= 0) || !std::isfinite(f2)) {
        throw NumericError("f2 must be a finite nonnegative real");
    }
    return power_at_ncp(static_cast<double>(n) * f2, df,
                        critical_value(df, alpha));
}

double noncentrality_for_power(double target_power, int df, double alpha) {
    check_test_params(df, alpha);
    if (!(target_power > alpha) || !(target_power < 1)) {
        throw NumericError("target power must lie in (alpha, 1)");
    }
    const double crit = critical_value(df, alpha);
    double lo = 0.0;
    double hi = 1.0;
    while (power_at_ncp(hi, df, crit) < target_power) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e8) {
            throw ConvergenceError("noncentrality_for_power: no bracket found");
        }
    }
    // Power is strictly increasing in the noncentrality; bisect to ~1e-11.
    for (int i = 0; i < 100 && hi - lo > 1e-11 * (1.0 + hi); ++i) {
        double mid = 0.5 * (lo + hi);
        if (power_at_ncp(mid, df, crit) < target_power) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

long sample_size(double target_power, double f2, int df, double alpha) {
    check_test_params(df, alpha);
    if (!(f2 > 0) || !std::isfinite(f2)) {
        throw NumericError("sample_size requires f2 > 0");
    }
    if (!(target_power > 0) || !(target_power < 1)) {
        throw NumericError("target power must lie in (0, 1)");
    }
    long n;
    if (target_power <= alpha) {
        n = 1;  // every n attains a target below the test size
    } else {
        double nu = noncentrality_for_power(target_power, df, alpha);
        n = static_cast<long>(std::ceil(nu / f2 - 1e-9));
        if (n < 1) n = 1;
    }
    // ceil() lands within one of the answer; make minimality exact.
    while (power(n, f2, df, alpha) < target_power) {
        ++n;
    }
    while (n > 1 && power(n - 1, f2, df, alpha) >= target_power) {
        --n;
    }
    return n;
}

std::vector<std::vector<double>> power_error_table(
    const std::vector<double>& target_powers,
    const std::vector<double>& relative_errors, int df, double alpha) {
    check_test_params(df, alpha);
    const double crit = critical_value(df, alpha);
    std::vector<std::vector<double>> table;
    table.reserve(target_powers.size());
    for (double q : target_powers) {
        double nu = noncentrality_for_power(q, df, alpha);
        std::vector<double> row;
        row.reserve(relative_errors.size());
        for (double re : relative_errors) {
            if (!(1.0 + re > 0)) {
                throw NumericError(
                    "relative error must keep the noncentrality positive");
            }
            double attained = power_at_ncp(nu * (1.0 + re), df, crit);
            row.push_back(100.0 * (attained - q));
        }
        table.push_back(std::move(row));
    }
    return table;
}

}  // namespace glmpss::pss
