#include "wcr/kernel.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "wcr/errors.hpp"

namespace wcr {

GaussianKernel::GaussianKernel(Eigen::VectorXd mean, Eigen::VectorXd std)
    : mean_(std::move(mean)), std_(std::move(std)) {
    if (mean_.size() != std_.size()) throw ConfigError("kernel mean/std size mismatch");
    if ((std_.array() <= 0).any()) throw ConfigError("kernel std entries must be > 0");
    norm_ = 1.0;
    for (Eigen::Index i = 0; i < std_.size(); ++i)
        norm_ /= std_[i] * std::sqrt(2.0 * std::numbers::pi);
}

double GaussianKernel::value(const Eigen::VectorXd& x) const {
    Eigen::ArrayXd z = (x - mean_).array() / std_.array();
    return norm_ * std::exp(-0.5 * z.square().sum());
}

Eigen::VectorXd GaussianKernel::grad(const Eigen::VectorXd& x) const {
    double phi = value(x);
    // d phi / d x_i = -phi (x_i - rho_i)/gamma_i^2
    return (-phi) * ((x - mean_).array() / std_.array().square()).matrix();
}

Eigen::MatrixXd GaussianKernel::hess(const Eigen::VectorXd& x) const {
    const double phi = value(x);
    Eigen::ArrayXd t = (x - mean_).array() / std_.array().square();
    Eigen::MatrixXd H = phi * (t.matrix() * t.matrix().transpose());
    H.diagonal() -= phi * std_.array().square().inverse().matrix();
    return H;
}

std::vector<GaussianKernel> sample_kernels_lhs(int m, const Hypercube& bounds,
                                               const Eigen::VectorXd& gamma, RngStream& rng) {
    if (m < 1) throw ConfigError("kernel count must be >= 1");
    const auto d = bounds.lower.size();
    if (bounds.upper.size() != d || gamma.size() != d)
        throw ConfigError("kernel sampling dimension mismatch");
    if ((bounds.lower.array() > bounds.upper.array()).any())
        throw ConfigError("invalid bounds: lower > upper");
    if ((gamma.array() <= 0).any()) throw ConfigError("gamma entries must be > 0");

    Eigen::MatrixXd means(m, d);
    std::vector<int> strata(static_cast<std::size_t>(m));
    for (Eigen::Index axis = 0; axis < d; ++axis) {
        double lo = bounds.lower[axis];
        double width = bounds.upper[axis] - lo;
        std::iota(strata.begin(), strata.end(), 0);
        rng.shuffle(strata.begin(), strata.end());
        for (int i = 0; i < m; ++i) {
            double u = rng.uniform();
            means(i, axis) = lo + width * (strata[static_cast<std::size_t>(i)] + u) / m;
        }
    }
    std::vector<GaussianKernel> kernels;
    kernels.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) kernels.emplace_back(means.row(i).transpose(), gamma);
    return kernels;
}

}  // namespace wcr
