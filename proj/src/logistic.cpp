#include "bigmodel/logistic.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "bigmodel/errors.hpp"

namespace bigmodel {

namespace {

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

Eigen::VectorXd sigmoid(const Eigen::VectorXd& eta) {
    return eta.unaryExpr([](double v) { return bigmodel::sigmoid(v); });
}

void check_inputs(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    if (x.rows() == 0 || x.cols() == 0) {
        throw InputError("logistic fit needs at least one sample and one column");
    }
    if (x.rows() != y.size()) {
        throw InputError("logistic fit: design matrix and labels differ in length");
    }
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y[i] != 0.0 && y[i] != 1.0) {
            throw InputError("logistic fit: labels must be 0 or 1");
        }
        if (x(i, 0) != 1.0) {
            throw InputError("logistic fit: column 0 must be the intercept (all ones)");
        }
    }
    if (!x.allFinite()) {
        throw InputError("logistic fit: non-finite feature value");
    }
}

}  // namespace

double sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double mean_log_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           const Eigen::VectorXd& beta) {
    const Eigen::VectorXd eta = x * beta;
    double total = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        total += y[i] * eta[i] - softplus(eta[i]);
    }
    return total / static_cast<double>(x.rows());
}

Eigen::VectorXd log_likelihood_gradient(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                        const Eigen::VectorXd& beta) {
    const Eigen::VectorXd residual = y - sigmoid(x * beta);
    return x.transpose() * residual / static_cast<double>(x.rows());
}

LogisticFit fit_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         const LogisticOptions& options) {
    check_inputs(x, y);
    const Eigen::Index n = x.rows();
    const Eigen::Index k = x.cols();

    // Standardized design: intercept plus each varying column centered and
    // scaled. Constant columns are left out and keep a zero coefficient.
    std::vector<Eigen::Index> active;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(k);
    Eigen::VectorXd scale = Eigen::VectorXd::Ones(k);
    for (Eigen::Index j = 1; j < k; ++j) {
        mean[j] = x.col(j).mean();
        scale[j] = std::sqrt((x.col(j).array() - mean[j]).square().mean());
        if (scale[j] > 1e-12 * std::max(1.0, std::abs(mean[j]))) {
            active.push_back(j);
        }
    }
    Eigen::MatrixXd z(n, static_cast<Eigen::Index>(active.size()) + 1);
    z.col(0).setOnes();
    for (std::size_t a = 0; a < active.size(); ++a) {
        const Eigen::Index j = active[a];
        z.col(static_cast<Eigen::Index>(a) + 1) = (x.col(j).array() - mean[j]) / scale[j];
    }

    auto to_original = [&](const Eigen::VectorXd& b) {
        Eigen::VectorXd beta = Eigen::VectorXd::Zero(k);
        beta[0] = b[0];
        for (std::size_t a = 0; a < active.size(); ++a) {
            const Eigen::Index j = active[a];
            beta[j] = b[static_cast<Eigen::Index>(a) + 1] / scale[j];
            beta[0] -= beta[j] * mean[j];
        }
        return beta;
    };

    double step = options.step;
    if (step <= 0.0) {
        const Eigen::MatrixXd gram = z.transpose() * z / static_cast<double>(n);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
        step = 1.0 / (0.25 * solver.eigenvalues().maxCoeff());
    }

    LogisticFit fit;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(z.cols());
    for (std::size_t it = 0;; ++it) {
        const Eigen::VectorXd eta = z * b;
        const Eigen::VectorXd residual = y - sigmoid(eta);
        const Eigen::VectorXd grad_original = x.transpose() * residual / static_cast<double>(n);

        fit.coefficients = to_original(b);
        fit.gradient_norm = grad_original.norm();
        fit.iterations = it;
        if (fit.gradient_norm <= options.tolerance) {
            fit.converged = true;
            break;
        }

        bool separates = it > 0;
        for (Eigen::Index i = 0; separates && i < n; ++i) {
            separates = y[i] == 1.0 ? eta[i] > 0.0 : eta[i] < 0.0;
        }
        if (separates) {
            fit.separated = true;
            break;
        }
        if (fit.coefficients.cwiseAbs().maxCoeff() > options.coefficient_bound) {
            fit.separated = true;
            break;
        }
        if (it >= options.max_iterations) {
            break;
        }
        b += step * (z.transpose() * residual / static_cast<double>(n));
    }

    if (fit.separated) {
        const double largest = fit.coefficients.cwiseAbs().maxCoeff();
        if (largest > 0.0) {
            fit.coefficients *= options.coefficient_bound / largest;
        }
        fit.gradient_norm = log_likelihood_gradient(x, y, fit.coefficients).norm();
    }
    fit.log_likelihood = mean_log_likelihood(x, y, fit.coefficients);
    return fit;
}

}  // namespace bigmodel
