#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "glmpss/errors.hpp"
#include "glmpss/glm_fit.hpp"
#include "glmpss/rng.hpp"
#include "glmpss/samplers.hpp"

using namespace glmpss;

TEST_CASE("gaussian identity fit reproduces exact linear data") {
    const int n = 25;
    Eigen::MatrixXd x(n, 2);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = 0.1 * i - 1.0;
        y[i] = 2.0 + 3.0 * x(i, 1);
    }
    auto fit = irls_fit(x, y, {Family::Normal, Link::Identity, 1.0});
    REQUIRE(fit.converged);
    CHECK(fit.coefficients[0] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(fit.coefficients[1] == doctest::Approx(3.0).epsilon(1e-10));
    // Unit-dispersion normal information is X'X
    CHECK(fit.information(0, 0) == doctest::Approx(n).epsilon(1e-9));
    CHECK(fit.information(0, 1) ==
          doctest::Approx(x.col(1).sum()).epsilon(1e-9));
}

TEST_CASE("two-group logistic fit matches the closed form") {
    // Group 0: 30/100 successes; group 1: 55/80.
    const int n0 = 100, n1 = 80, s0 = 30, s1 = 55;
    Eigen::MatrixXd x(n0 + n1, 2);
    Eigen::VectorXd y(n0 + n1);
    for (int i = 0; i < n0 + n1; ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = i < n0 ? 0.0 : 1.0;
        y[i] = (i < n0) ? (i < s0 ? 1.0 : 0.0) : (i - n0 < s1 ? 1.0 : 0.0);
    }
    auto fit = irls_fit(x, y, {Family::Bernoulli, Link::Logit});
    REQUIRE(fit.converged);
    const double p0 = double(s0) / n0, p1 = double(s1) / n1;
    const double logit0 = std::log(p0 / (1 - p0));
    const double logit1 = std::log(p1 / (1 - p1));
    CHECK(fit.coefficients[0] == doctest::Approx(logit0).epsilon(1e-8));
    CHECK(fit.coefficients[1] ==
          doctest::Approx(logit1 - logit0).epsilon(1e-8));

    // Wald statistic for the slope: beta^2 / (1/(n0 p0 q0) + 1/(n1 p1 q1))
    auto wald = wald_test(fit, {1}, 0.05);
    double se2 = 1.0 / (n0 * p0 * (1 - p0)) + 1.0 / (n1 * p1 * (1 - p1));
    double expected = (logit1 - logit0) * (logit1 - logit0) / se2;
    CHECK(wald.df == 1);
    CHECK(wald.statistic == doctest::Approx(expected).epsilon(1e-6));
    CHECK(wald.reject);
    CHECK(wald.p_value < 0.001);
}

TEST_CASE("poisson log fit recovers simulated coefficients") {
    const int n = 100000;
    RngStream rng(31, 0);
    FamilyLink fl(Family::Poisson, Link::Log);
    Eigen::MatrixXd x(n, 2);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = 2.0 * rng.next_uniform() - 1.0;
        double mu = std::exp(0.4 + 0.3 * x(i, 1));
        y[i] = sample_outcome(fl, mu, rng);
    }
    auto fit = irls_fit(x, y, fl);
    REQUIRE(fit.converged);
    // var(beta_hat) ~ I^{-1}; bound each coefficient by 3 standard errors
    Eigen::MatrixXd cov = fit.information.inverse();
    CHECK(std::fabs(fit.coefficients[0] - 0.4) <= 3.0 * std::sqrt(cov(0, 0)));
    CHECK(std::fabs(fit.coefficients[1] - 0.3) <= 3.0 * std::sqrt(cov(1, 1)));
}

TEST_CASE("objective trace is nondecreasing under step halving") {
    const int n = 400;
    RngStream rng(32, 0);
    FamilyLink fl(Family::Bernoulli, Link::Logit);
    Eigen::MatrixXd x(n, 3);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = rng.next_normal();
        x(i, 2) = rng.next_normal();
        double mu = 1.0 / (1.0 + std::exp(-(0.5 + 1.5 * x(i, 1) - x(i, 2))));
        y[i] = sample_outcome(fl, mu, rng);
    }
    auto fit = irls_fit(x, y, fl);
    REQUIRE(fit.converged);
    REQUIRE(fit.objective_trace.size() >= 2);
    for (std::size_t i = 1; i < fit.objective_trace.size(); ++i) {
        CHECK(fit.objective_trace[i] >=
              fit.objective_trace[i - 1] - 1e-9);
    }
}

TEST_CASE("collinear design raises a numeric error") {
    const int n = 50;
    Eigen::MatrixXd x(n, 3);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = 0.05 * i;
        x(i, 2) = 2.0 * x(i, 1) - 1.0;
        y[i] = 0.3 + 0.2 * x(i, 1);
    }
    CHECK_THROWS_AS(irls_fit(x, y, {Family::Normal, Link::Identity, 1.0}),
                    NumericError);
}

TEST_CASE("conditional information equals the Schur complement") {
    Eigen::MatrixXd info(2, 2);
    info << 2.0, 1.0, 1.0, 1.0;
    auto cond = conditional_information(info, 1, 1);
    REQUIRE(cond.rows() == 1);
    CHECK(cond(0, 0) == doctest::Approx(0.5).epsilon(1e-14));

    // Block-diagonal information conditions to the predictor block itself
    Eigen::MatrixXd bd = Eigen::MatrixXd::Zero(4, 4);
    bd(0, 0) = 3.0;
    bd(1, 1) = 5.0;
    bd(2, 2) = 2.0;
    bd(2, 3) = 0.4;
    bd(3, 2) = 0.4;
    bd(3, 3) = 1.5;
    auto cond2 = conditional_information(bd, 2, 2);
    CHECK(cond2(0, 0) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(cond2(0, 1) == doctest::Approx(0.4).epsilon(1e-13));
    CHECK(cond2(1, 1) == doctest::Approx(1.5).epsilon(1e-13));

    // Singular adjustor block cannot be conditioned on
    Eigen::MatrixXd sing = Eigen::MatrixXd::Zero(3, 3);
    sing(2, 2) = 1.0;
    CHECK_THROWS_AS(conditional_information(sing, 2, 1), NumericError);
    CHECK_THROWS_AS(conditional_information(info, 1, 5), NumericError);
    CHECK_THROWS_AS(conditional_information(info, 0, 1), NumericError);
}

TEST_CASE("wald test at a zero coefficient accepts") {
    FitResult fit;
    fit.coefficients = Eigen::VectorXd::Zero(2);
    fit.coefficients[0] = 1.3;
    fit.information = Eigen::MatrixXd::Identity(2, 2) * 50.0;
    fit.converged = true;
    auto w = wald_test(fit, {1}, 0.05);
    CHECK(w.statistic == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(w.p_value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(w.reject);

    CHECK_THROWS_AS(wald_test(fit, {}, 0.05), NumericError);
    CHECK_THROWS_AS(wald_test(fit, {5}, 0.05), NumericError);
    CHECK_THROWS_AS(wald_test(fit, {1}, 0.0), NumericError);
    CHECK_THROWS_AS(wald_test(fit, {1}, 1.0), NumericError);
}

TEST_CASE("wald test has approximately nominal size under the null") {
    const int n = 500, reps = 2000;
    const double alpha = 0.05;
    FamilyLink fl(Family::Bernoulli, Link::Logit);
    int rejections = 0;
    for (int r = 0; r < reps; ++r) {
        RngStream rng(33, static_cast<std::uint64_t>(r));
        Eigen::MatrixXd x(n, 2);
        Eigen::VectorXd y(n);
        for (int i = 0; i < n; ++i) {
            x(i, 0) = 1.0;
            x(i, 1) = rng.next_normal();
            y[i] = sample_outcome(fl, 0.4, rng);  // slope truly zero
        }
        auto fit = irls_fit(x, y, fl);
        if (!fit.converged) continue;
        if (wald_test(fit, {1}, alpha).reject) ++rejections;
    }
    double rate = double(rejections) / reps;
    CHECK(std::fabs(rate - alpha) <=
          3.0 * std::sqrt(alpha * (1 - alpha) / reps));
}

TEST_CASE("pearson dispersion recovers the auxiliary parameter") {
    const int n = 20000;
    RngStream rng(34, 0);
    FamilyLink gauss(Family::Normal, Link::Identity, 2.25);
    Eigen::MatrixXd x(n, 2);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = rng.next_uniform();
        y[i] = sample_outcome(gauss, 1.0 + 0.5 * x(i, 1), rng);
    }
    auto fit = irls_fit(x, y, {Family::Normal, Link::Identity, 1.0});
    REQUIRE(fit.converged);
    double disp = pearson_dispersion(x, y, {Family::Normal, Link::Identity, 1.0},
                                     fit.coefficients);
    // sigma^2 = 2.25, sampling sd of the estimate ~ sigma^2 sqrt(2/n)
    CHECK(std::fabs(disp - 2.25) <= 3.0 * 2.25 * std::sqrt(2.0 / n));

    FamilyLink gamma(Family::Gamma, Link::Log, 4.0);
    RngStream rng2(35, 0);
    for (int i = 0; i < n; ++i) {
        y[i] = sample_outcome(gamma, std::exp(0.5 + 0.3 * x(i, 1)), rng2);
    }
    auto gfit = irls_fit(x, y, {Family::Gamma, Link::Log, 1.0});
    REQUIRE(gfit.converged);
    double gdisp = pearson_dispersion(x, y, {Family::Gamma, Link::Log, 1.0},
                                      gfit.coefficients);
    // Pearson estimates 1/k = 0.25 here
    CHECK(std::fabs(gdisp - 0.25) <= 0.02);
}

TEST_CASE("average unit-dispersion weighted squared error is one") {
    // E[(y - mu)^2 / v(mu)] = 1 when the model and dispersion are true.
    const int n = 100000;
    RngStream rng(36, 0);
    FamilyLink fl(Family::Gamma, Link::Log, 2.0);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        double eta = 0.2 + 0.6 * rng.next_uniform();
        double mu = std::exp(eta);
        double y = sample_outcome(fl, mu, rng);
        acc += (y - mu) * (y - mu) / fl.eval(eta).v;
    }
    acc /= n;
    // var of each term is 2 + 6/k = 5 for Gamma(k=2)
    CHECK(std::fabs(acc - 1.0) <= 3.0 * std::sqrt(5.0 / n));
}
