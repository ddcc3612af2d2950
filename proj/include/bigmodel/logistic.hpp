#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace bigmodel {

struct LogisticOptions {
    /// Fixed ascent step in the standardized parameterization; <= 0 picks
    /// 1/L with L the Lipschitz bound of the mean log-likelihood gradient.
    double step = 0.0;
    /// Stop once the gradient norm (original parameterization) is below this.
    double tolerance = 1e-8;
    std::size_t max_iterations = 2'000'000;
    /// Coefficients are clamped to [-bound, bound] on separated data.
    double coefficient_bound = 25.0;
};

struct LogisticFit {
    Eigen::VectorXd coefficients;
    double gradient_norm = 0.0;
    double log_likelihood = 0.0;  // mean per sample
    std::size_t iterations = 0;
    bool converged = false;
    /// The data are linearly separable, so no finite maximizer exists.
    bool separated = false;
};

double sigmoid(double x);

/// Mean log-likelihood of labels `y` (0/1) under coefficients `beta`.
double mean_log_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           const Eigen::VectorXd& beta);

/// Analytic gradient of mean_log_likelihood: X^T (y - p) / n.
Eigen::VectorXd log_likelihood_gradient(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                        const Eigen::VectorXd& beta);

/// Maximum-likelihood logistic regression by fixed-step gradient ascent.
///
/// Column 0 of `x` must be the intercept (all ones). Other columns are
/// centered and scaled internally, which leaves the likelihood unchanged
/// but evens out curvature; coefficients are returned on the original
/// scale. Zero-variance columns keep a coefficient of exactly 0.
///
/// When an iterate classifies every sample correctly the data are
/// separable; the fit then scales that iterate so its largest coefficient
/// magnitude equals `coefficient_bound`, sets `separated` and returns.
LogisticFit fit_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         const LogisticOptions& options = {});

}  // namespace bigmodel
