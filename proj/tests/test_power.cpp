#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "glmpss/errors.hpp"
#include "glmpss/power.hpp"

using namespace glmpss;

TEST_CASE("power at zero effect equals the test size") {
    for (int df : {1, 2, 5}) {
        for (double alpha : {0.01, 0.05, 0.2}) {
            CHECK(pss::power(100, 0.0, df, alpha) ==
                  doctest::Approx(alpha).epsilon(1e-10));
        }
    }
}

TEST_CASE("reference power values") {
    CHECK(pss::power(393, 0.02, 1, 0.05) ==
          doctest::Approx(0.800555913789835213).epsilon(1e-12));
    CHECK(std::fabs(pss::power(393, 0.02, 1, 0.05) - 0.8006) <= 5e-5);
    CHECK(pss::power(1000000, 0.02, 1, 0.05) > 0.9999);
}

TEST_CASE("power is monotone in its arguments") {
    double prev = 0.0;
    for (long n : {50L, 100L, 200L, 400L, 800L}) {
        double p = pss::power(n, 0.02, 1, 0.05);
        CHECK(p > prev);
        prev = p;
    }
    prev = 0.0;
    for (double f2 : {0.005, 0.01, 0.02, 0.04, 0.08}) {
        double p = pss::power(300, f2, 1, 0.05);
        CHECK(p > prev);
        prev = p;
    }
    prev = 0.0;
    for (double alpha : {0.01, 0.05, 0.1, 0.2}) {
        double p = pss::power(300, 0.02, 1, alpha);
        CHECK(p > prev);
        prev = p;
    }
    // More numerator degrees of freedom dilute a fixed noncentrality
    prev = 1.0;
    for (int df : {1, 2, 4, 8}) {
        double p = pss::power(300, 0.02, df, 0.05);
        CHECK(p < prev);
        prev = p;
    }
}

TEST_CASE("power input validation") {
    CHECK_THROWS_AS(pss::power(0, 0.02, 1, 0.05), NumericError);
    CHECK_THROWS_AS(pss::power(100, -0.01, 1, 0.05), NumericError);
    CHECK_THROWS_AS(pss::power(100, 0.02, 0, 0.05), NumericError);
    CHECK_THROWS_AS(pss::power(100, 0.02, 1, 0.0), NumericError);
    CHECK_THROWS_AS(pss::power(100, 0.02, 1, 1.0), NumericError);
}

TEST_CASE("noncentrality for target power") {
    CHECK(pss::noncentrality_for_power(0.8, 1, 0.05) ==
          doctest::Approx(7.84886050932619815).epsilon(1e-9));
    CHECK(pss::noncentrality_for_power(0.9, 1, 0.05) ==
          doctest::Approx(10.5074194096907547).epsilon(1e-9));
    CHECK(std::fabs(pss::noncentrality_for_power(0.8, 1, 0.05) - 7.849) <=
          1e-3);

    // As the target shrinks to the size of the test, nu* vanishes
    CHECK(pss::noncentrality_for_power(0.051, 1, 0.05) < 0.02);
    CHECK(pss::noncentrality_for_power(0.0500001, 1, 0.05) < 1e-3);

    CHECK_THROWS_AS(pss::noncentrality_for_power(0.05, 1, 0.05), NumericError);
    CHECK_THROWS_AS(pss::noncentrality_for_power(0.03, 1, 0.05), NumericError);
    CHECK_THROWS_AS(pss::noncentrality_for_power(1.0, 1, 0.05), NumericError);
}

TEST_CASE("sample size hits the published cases") {
    CHECK(pss::sample_size(0.8, 0.02, 1, 0.05) == 393);
    CHECK(pss::sample_size(0.8, 0.04, 1, 0.05) == 197);
}

TEST_CASE("sample size returns the minimal qualifying n") {
    for (double target : {0.6, 0.8, 0.9, 0.99}) {
        for (double f2 : {0.005, 0.02, 0.15, 0.8}) {
            for (int df : {1, 3}) {
                long n = pss::sample_size(target, f2, df, 0.05);
                CHECK(pss::power(n, f2, df, 0.05) >= target);
                if (n > 1) {
                    CHECK(pss::power(n - 1, f2, df, 0.05) < target);
                }
            }
        }
    }
    // A target at or below alpha is met by any sample
    CHECK(pss::sample_size(0.05, 0.02, 1, 0.05) == 1);
    CHECK(pss::sample_size(0.01, 0.02, 1, 0.05) == 1);

    CHECK_THROWS_AS(pss::sample_size(0.8, 0.0, 1, 0.05), NumericError);
    CHECK_THROWS_AS(pss::sample_size(1.0, 0.02, 1, 0.05), NumericError);
}

TEST_CASE("power error table reproduces the reference entries") {
    std::vector<double> targets = {0.60, 0.64, 0.68, 0.72,
                                   0.76, 0.80, 0.84, 0.88};
    std::vector<double> res = {-0.15, -0.10, -0.05, 0.05, 0.10, 0.15};
    auto table = pss::power_error_table(targets, res);
    REQUIRE(table.size() == 8);
    REQUIRE(table[0].size() == 6);
    CHECK(std::fabs(table[5][0] - (-6.7)) <= 0.05);  // 80% target, -15%
    CHECK(std::fabs(table[0][4] - 4.1) <= 0.05);     // 60% target, +10%
    CHECK(std::fabs(table[7][5] - 4.0) <= 0.05);     // 88% target, +15%

    // A correctly stated noncentrality incurs no power error
    auto exact = pss::power_error_table({0.8}, {0.0});
    CHECK(std::fabs(exact[0][0]) <= 1e-9);

    // Underrating always loses power, overrating always gains it
    for (const auto& row : table) {
        for (std::size_t j = 0; j < 3; ++j) CHECK(row[j] < 0.0);
        for (std::size_t j = 3; j < 6; ++j) CHECK(row[j] > 0.0);
    }

    CHECK_THROWS_AS(pss::power_error_table({0.8}, {-1.0}), NumericError);
    CHECK_THROWS_AS(pss::power_error_table({0.04}, {0.1}), NumericError);
}
