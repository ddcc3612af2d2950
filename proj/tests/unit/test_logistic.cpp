#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bigmodel/errors.hpp"
#include "bigmodel/logistic.hpp"

namespace bigmodel {
namespace {

TEST(Sigmoid, Values) {
    EXPECT_DOUBLE_EQ(sigmoid(0.0), 0.5);
    EXPECT_NEAR(sigmoid(-25.0), 1.3887943864771144e-11, 1e-24);
    EXPECT_EQ(sigmoid(-1000.0), 0.0);
    EXPECT_EQ(sigmoid(1000.0), 1.0);
}

TEST(FitLogistic, ConstantFeatureGetsZeroWeight) {
    const int n = 1000;
    Eigen::MatrixXd x(n, 2);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = 3.5;
        y[i] = i % 10 < 3 ? 1.0 : 0.0;
    }
    const LogisticFit fit = fit_logistic(x, y);
    EXPECT_TRUE(fit.converged);
    EXPECT_EQ(fit.coefficients[1], 0.0);
    EXPECT_NEAR(fit.coefficients[0], std::log(0.3 / 0.7), 1e-7);
}

struct Sample {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
};

Sample draw(const Eigen::VectorXd& beta, int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Sample s{Eigen::MatrixXd(n, beta.size()), Eigen::VectorXd(n)};
    for (int i = 0; i < n; ++i) {
        s.x(i, 0) = 1.0;
        for (Eigen::Index j = 1; j < beta.size(); ++j) s.x(i, j) = normal(rng) * j + 0.5 * j;
        const double p = 1.0 / (1.0 + std::exp(-s.x.row(i).dot(beta)));
        s.y[i] = unit(rng) < p ? 1.0 : 0.0;
    }
    return s;
}

TEST(FitLogistic, RecoversKnownCoefficients) {
    Eigen::VectorXd beta(4);
    beta << -1.0, 2.0, -1.5, 0.8;
    const Sample s = draw(beta, 5000, 2024);
    const LogisticFit fit = fit_logistic(s.x, s.y);
    EXPECT_TRUE(fit.converged);
    EXPECT_FALSE(fit.separated);
    EXPECT_LE(fit.gradient_norm, 1e-8);
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
        EXPECT_NEAR(fit.coefficients[j], beta[j], 0.1 * std::abs(beta[j])) << "coefficient " << j;
    }
}

TEST(FitLogistic, ConvergedPointIsStationary) {
    Eigen::VectorXd beta(3);
    beta << 0.3, -0.7, 1.1;
    const Sample s = draw(beta, 800, 77);
    const LogisticFit fit = fit_logistic(s.x, s.y);
    ASSERT_TRUE(fit.converged);
    EXPECT_LE(log_likelihood_gradient(s.x, s.y, fit.coefficients).norm(), 1e-8);
    // Any small perturbation lowers the likelihood.
    for (Eigen::Index j = 0; j < 3; ++j) {
        Eigen::VectorXd b = fit.coefficients;
        b[j] += 1e-3;
        EXPECT_LT(mean_log_likelihood(s.x, s.y, b), fit.log_likelihood);
    }
}

TEST(LogLikelihoodGradient, MatchesFiniteDifferences) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd beta(4);
        for (auto& b : beta) b = normal(rng);
        const Sample s = draw(beta, 300, 100 + trial);
        Eigen::VectorXd at(4);
        for (auto& b : at) b = 0.5 * normal(rng);
        const Eigen::VectorXd g = log_likelihood_gradient(s.x, s.y, at);
        for (Eigen::Index j = 0; j < 4; ++j) {
            const double h = 1e-5;
            Eigen::VectorXd up = at, down = at;
            up[j] += h;
            down[j] -= h;
            const double fd =
                (mean_log_likelihood(s.x, s.y, up) - mean_log_likelihood(s.x, s.y, down)) / (2 * h);
            EXPECT_NEAR(g[j], fd, 1e-6 * std::max(1.0, std::abs(fd))) << j;
        }
    }
}

TEST(FitLogistic, SeparatedDataIsClamped) {
    Eigen::MatrixXd x(6, 2);
    x << 1, -3, 1, -2, 1, -1, 1, 1, 1, 2, 1, 3;
    Eigen::VectorXd y(6);
    y << 0, 0, 0, 1, 1, 1;
    const LogisticFit fit = fit_logistic(x, y);
    EXPECT_TRUE(fit.separated);
    EXPECT_NEAR(fit.coefficients.cwiseAbs().maxCoeff(), 25.0, 1e-12);
    EXPECT_GT(fit.coefficients[1], 0.0);
}

TEST(FitLogistic, RejectsBadInput) {
    Eigen::MatrixXd x(2, 2);
    x << 1, 0, 1, 1;
    Eigen::VectorXd y(2);
    y << 0, 2;
    EXPECT_THROW(fit_logistic(x, y), InputError);
    y << 0, 1;
    x(0, 0) = 0.5;
    EXPECT_THROW(fit_logistic(x, y), InputError);
}

}  // namespace
}  // namespace bigmodel
