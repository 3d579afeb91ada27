#ifndef WCR_KERNEL_HPP
#define WCR_KERNEL_HPP

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "wcr/data.hpp"
#include "wcr/rng.hpp"

namespace wcr {

// Normalized Gaussian test function phi(x; rho, gamma) with analytic
// derivatives. Evaluation shares the common factor phi(x) between value,
// gradient and Hessian.
class GaussianKernel {
public:
    GaussianKernel(Eigen::VectorXd mean, Eigen::VectorXd std);

    const Eigen::VectorXd& mean() const { return mean_; }
    const Eigen::VectorXd& std() const { return std_; }
    int dimension() const { return static_cast<int>(mean_.size()); }

    double value(const Eigen::VectorXd& x) const;
    Eigen::VectorXd grad(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd hess(const Eigen::VectorXd& x) const;

    // Normalization constant prod_i 1/(gamma_i sqrt(2 pi)).
    double norm_constant() const { return norm_; }

private:
    Eigen::VectorXd mean_;
    Eigen::VectorXd std_;
    double norm_;
};

inline double kernel_value(const GaussianKernel& k, const Eigen::VectorXd& x) {
    return k.value(x);
}
inline Eigen::VectorXd kernel_grad(const GaussianKernel& k, const Eigen::VectorXd& x) {
    return k.grad(x);
}
inline Eigen::MatrixXd kernel_hess(const GaussianKernel& k, const Eigen::VectorXd& x) {
    return k.hess(x);
}

// Latin hypercube placement of m kernel means inside bounds: every axis is
// split into m equal strata, each hit exactly once, paired by independent
// per-axis permutations. All kernels share the gamma vector. A degenerate
// axis (lower == upper) pins the coordinate to that value.
std::vector<GaussianKernel> sample_kernels_lhs(int m, const Hypercube& bounds,
                                               const Eigen::VectorXd& gamma, RngStream& rng);

}  // namespace wcr

#endif
