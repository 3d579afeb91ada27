#ifndef WCR_REGRESSION_HPP
#define WCR_REGRESSION_HPP

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <vector>

#include "wcr/assembly.hpp"

namespace wcr {

struct StridgeConfig {
    double lambda = 1e-5;  // ridge weight, >= 0
    double eta = 0.05;     // hard threshold on |coefficient|, > 0
    int max_sweeps = 0;    // 0: defaults to the column count
};

struct StridgeDiagnostics {
    int sweeps = 0;
    bool empty_survivor_set = false;
    // Survivors whose magnitude fell to <= eta after the final
    // unregularized refit.
    bool survivors_below_threshold = false;
};

// Ordinary least squares; requires rows >= columns and a usable condition
// number (no silent minimum-norm fallback).
Eigen::VectorXd least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);
Eigen::VectorXd least_squares(const LinearSystem& system);

// Sequential thresholded ridge: alternate ridge solves with hard
// thresholding on coefficient magnitude until the survivor set is stable,
// then refit the survivors without regularization.
Eigen::VectorXd stridge(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                        const StridgeConfig& config, StridgeDiagnostics* diagnostics = nullptr);
Eigen::VectorXd stridge(const LinearSystem& system, const StridgeConfig& config,
                        StridgeDiagnostics* diagnostics = nullptr);

// sigma(x) = sum_q sigma_q x^q recovered from D(x) = sum_k D_k x^k via
// 0.5 sigma(x)^2 = D(x), Gauss-Newton in coefficient space; sign fixed by
// sigma_0 >= 0.
Eigen::VectorXd recover_sigma_poly(const Eigen::VectorXd& d_coeffs, int sigma_degree);

struct CholeskySigma {
    Eigen::MatrixXd sigma;  // lower triangular, 0.5 sigma sigma^T = sym(D)
    bool repaired = false;  // eigenvalues were clipped to reach positive definiteness
};

// Symmetrizes D, clips negative eigenvalues if needed, and factors
// 2 * sym(D) = sigma sigma^T.
CholeskySigma recover_sigma_cholesky(const Eigen::MatrixXd& d_matrix);

// Interpretable model reconstructed from a flat coefficient vector.
struct LearnedSde {
    CoefficientLayout layout;
    DriftSpec drift_spec;
    DiffusionStructure structure;
    Eigen::MatrixXd drift_coeffs;      // d x b_mu
    Eigen::MatrixXd diffusion_coeffs;  // n_entries x b_D

    enum class SigmaKind { none, diagonal_scalars, poly_1d, lower_triangular };
    SigmaKind sigma_kind = SigmaKind::none;
    Eigen::VectorXd sigma_diagonal;    // diagonal_scalars
    Eigen::VectorXd sigma_poly;        // poly_1d coefficients
    Eigen::MatrixXd sigma_matrix;      // lower_triangular
    bool sigma_repaired = false;

    Eigen::VectorXd drift_at(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd diffusion_at(const Eigen::VectorXd& x) const;  // symmetrized D(x)
    Eigen::VectorXd flatten() const;
};

// Inverse of the flatten maps; optionally recovers sigma from the learned D
// (closed form for constant-diagonal, Gauss-Newton for 1d polynomials,
// Cholesky for constant matrices).
LearnedSde reconstruct_model(const Eigen::VectorXd& zeta, const CoefficientLayout& layout,
                             const DriftSpec& drift, const DiffusionStructure& structure,
                             std::optional<int> sigma_poly_degree = std::nullopt);

}  // namespace wcr

#endif
