#include "wcr/regression.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

#include "wcr/errors.hpp"

namespace wcr {

namespace {
constexpr double kConditionLimit = 1e12;

Eigen::VectorXd svd_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return svd.solve(b);
}

Eigen::VectorXd ridge_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double lambda) {
    if (lambda <= 0) return svd_solve(A, b);
    Eigen::MatrixXd gram = A.transpose() * A;
    gram.diagonal().array() += lambda;
    return gram.ldlt().solve(A.transpose() * b);
}
}  // namespace

Eigen::VectorXd least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    if (A.rows() != b.size()) throw ConfigError("least_squares: matrix/rhs row mismatch");
    if (A.rows() < A.cols())
        throw ConfigError("least_squares: system is underdetermined (" +
                          std::to_string(A.rows()) + " rows, " + std::to_string(A.cols()) +
                          " columns)");
    Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    double smin = sv[sv.size() - 1];
    double cond = smin > 0 ? sv[0] / smin : std::numeric_limits<double>::infinity();
    if (!(cond < kConditionLimit))
        throw NumericalError("least_squares: rank-deficient system (condition estimate " +
                             std::to_string(cond) + ")");
    return svd.solve(b);
}

Eigen::VectorXd least_squares(const LinearSystem& system) {
    return least_squares(system.matrix, system.rhs);
}

Eigen::VectorXd stridge(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                        const StridgeConfig& config, StridgeDiagnostics* diagnostics) {
    if (config.eta <= 0) throw ConfigError("stridge: threshold eta must be > 0");
    if (config.lambda < 0) throw ConfigError("stridge: lambda must be >= 0");
    const int n = static_cast<int>(A.cols());
    const int max_sweeps = config.max_sweeps > 0 ? config.max_sweeps : n;

    StridgeDiagnostics diag;
    std::vector<int> keep(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) keep[static_cast<std::size_t>(i)] = i;

    auto submatrix = [&](const std::vector<int>& cols) {
        Eigen::MatrixXd sub(A.rows(), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t j = 0; j < cols.size(); ++j) sub.col(static_cast<Eigen::Index>(j)) = A.col(cols[j]);
        return sub;
    };

    Eigen::VectorXd x = ridge_solve(A, b, config.lambda);
    int p = n;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        diag.sweeps = sweep + 1;
        std::vector<int> survivors;
        for (std::size_t j = 0; j < keep.size(); ++j)
            if (std::abs(x[static_cast<Eigen::Index>(j)]) > config.eta)
                survivors.push_back(keep[j]);
        if (static_cast<int>(survivors.size()) == p) break;
        p = static_cast<int>(survivors.size());
        if (p == 0) {
            keep.clear();
            break;
        }
        keep = std::move(survivors);
        x = ridge_solve(submatrix(keep), b, config.lambda);
    }

    Eigen::VectorXd full = Eigen::VectorXd::Zero(n);
    if (keep.empty()) {
        diag.empty_survivor_set = true;
    } else {
        Eigen::VectorXd refit = svd_solve(submatrix(keep), b);
        for (std::size_t j = 0; j < keep.size(); ++j) full[keep[j]] = refit[static_cast<Eigen::Index>(j)];
        for (std::size_t j = 0; j < keep.size(); ++j)
            if (std::abs(refit[static_cast<Eigen::Index>(j)]) <= config.eta)
                diag.survivors_below_threshold = true;
    }
    if (diagnostics) *diagnostics = diag;
    return full;
}

Eigen::VectorXd stridge(const LinearSystem& system, const StridgeConfig& config,
                        StridgeDiagnostics* diagnostics) {
    return stridge(system.matrix, system.rhs, config, diagnostics);
}

Eigen::VectorXd recover_sigma_poly(const Eigen::VectorXd& d_coeffs, int sigma_degree) {
    if (sigma_degree < 0) throw ConfigError("sigma degree must be >= 0");
    const int q = sigma_degree;
    const int n_res = std::max(2 * q + 1, static_cast<int>(d_coeffs.size()));
    auto d_at = [&](int k) { return k < d_coeffs.size() ? d_coeffs[k] : 0.0; };

    Eigen::VectorXd sigma = Eigen::VectorXd::Zero(q + 1);
    sigma[0] = std::sqrt(2.0 * std::max(d_at(0), 1e-12));

    auto residual = [&](const Eigen::VectorXd& s) {
        Eigen::VectorXd r = Eigen::VectorXd::Zero(n_res);
        for (int k = 0; k < n_res; ++k) {
            double c = 0.0;
            for (int a = std::max(0, k - q); a <= std::min(q, k); ++a) c += s[a] * s[k - a];
            r[k] = 0.5 * c - d_at(k);
        }
        return r;
    };

    Eigen::VectorXd r = residual(sigma);
    bool converged = false;
    for (int iter = 0; iter < 100; ++iter) {
        // J_{k,c} = sigma_{k-c}
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n_res, q + 1);
        for (int k = 0; k < n_res; ++k)
            for (int c = 0; c <= q; ++c)
                if (k - c >= 0 && k - c <= q) J(k, c) = sigma[k - c];
        Eigen::VectorXd step = svd_solve(J, -r);
        // Backtracking keeps the residual non-increasing.
        double base = r.squaredNorm();
        double scale = 1.0;
        Eigen::VectorXd next;
        Eigen::VectorXd r_next;
        for (int half = 0; half < 30; ++half) {
            next = sigma + scale * step;
            r_next = residual(next);
            if (r_next.squaredNorm() <= base) break;
            scale *= 0.5;
        }
        double move = (next - sigma).norm();
        sigma = next;
        r = r_next;
        if (move < 1e-13 * (1.0 + sigma.norm())) {
            converged = true;
            break;
        }
    }
    if (!converged && r.norm() > 1e-8 * (1.0 + d_coeffs.norm()))
        throw NumericalError("sigma polynomial recovery did not converge after 100 iterations");
    if (sigma[0] < 0) sigma = -sigma;
    return sigma;
}

CholeskySigma recover_sigma_cholesky(const Eigen::MatrixXd& d_matrix) {
    if (d_matrix.rows() != d_matrix.cols()) throw ConfigError("diffusion matrix must be square");
    Eigen::MatrixXd sym = 0.5 * (d_matrix + d_matrix.transpose());
    CholeskySigma out;

    Eigen::MatrixXd target = 2.0 * sym;
    Eigen::LLT<Eigen::MatrixXd> llt(target);
    if (llt.info() != Eigen::Success) {
        // Clip eigenvalues below epsilon, then factor the repaired matrix.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(target);
        Eigen::VectorXd ev = eig.eigenvalues().cwiseMax(1e-10);
        target = eig.eigenvectors() * ev.asDiagonal() * eig.eigenvectors().transpose();
        llt.compute(target);
        if (llt.info() != Eigen::Success)
            throw NumericalError("cholesky factorization failed after eigenvalue repair");
        out.repaired = true;
    }
    out.sigma = llt.matrixL();
    return out;
}

Eigen::VectorXd LearnedSde::drift_at(const Eigen::VectorXd& x) const {
    Eigen::VectorXd out(layout.dimension);
    if (drift_spec.mode == DriftSpec::Mode::shared) {
        Eigen::VectorXd values = drift_spec.basis.eval(x);
        out = drift_coeffs * values;
    } else {
        Eigen::VectorXd xi(1);
        for (int i = 0; i < layout.dimension; ++i) {
            xi[0] = x[i];
            out[i] = drift_coeffs.row(i).dot(drift_spec.basis.eval(xi));
        }
    }
    return out;
}

Eigen::MatrixXd LearnedSde::diffusion_at(const Eigen::VectorXd& x) const {
    const int d = layout.dimension;
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(d, d);
    Eigen::VectorXd values = structure.basis ? structure.basis->eval(x)
                                             : Eigen::VectorXd::Ones(1);
    for (std::size_t e = 0; e < layout.diffusion_entries.size(); ++e) {
        auto [r, s] = layout.diffusion_entries[e];
        D(r, s) += diffusion_coeffs.row(static_cast<Eigen::Index>(e)).dot(values);
    }
    return 0.5 * (D + D.transpose());
}

Eigen::VectorXd LearnedSde::flatten() const {
    Eigen::VectorXd zeta(layout.size());
    for (int i = 0; i < layout.dimension; ++i)
        for (int j = 0; j < layout.drift_basis_size; ++j)
            zeta[layout.drift_index(i, j)] = drift_coeffs(i, j);
    for (std::size_t e = 0; e < layout.diffusion_entries.size(); ++e) {
        auto [r, s] = layout.diffusion_entries[e];
        for (int k = 0; k < layout.diffusion_basis_size; ++k)
            zeta[layout.diffusion_index(r, s, k)] = diffusion_coeffs(static_cast<Eigen::Index>(e), k);
    }
    return zeta;
}

LearnedSde reconstruct_model(const Eigen::VectorXd& zeta, const CoefficientLayout& layout,
                             const DriftSpec& drift, const DiffusionStructure& structure,
                             std::optional<int> sigma_poly_degree) {
    if (zeta.size() != layout.size())
        throw ConfigError("coefficient vector length " + std::to_string(zeta.size()) +
                          " does not match layout size " + std::to_string(layout.size()));
    LearnedSde model;
    model.layout = layout;
    model.drift_spec = drift;
    model.structure = structure;
    model.drift_coeffs.resize(layout.dimension, layout.drift_basis_size);
    for (int i = 0; i < layout.dimension; ++i)
        for (int j = 0; j < layout.drift_basis_size; ++j)
            model.drift_coeffs(i, j) = zeta[layout.drift_index(i, j)];
    model.diffusion_coeffs.resize(static_cast<Eigen::Index>(layout.diffusion_entries.size()),
                                  layout.diffusion_basis_size);
    for (std::size_t e = 0; e < layout.diffusion_entries.size(); ++e)
        for (int k = 0; k < layout.diffusion_basis_size; ++k) {
            auto [r, s] = layout.diffusion_entries[e];
            model.diffusion_coeffs(static_cast<Eigen::Index>(e), k) =
                zeta[layout.diffusion_index(r, s, k)];
        }

    const int d = layout.dimension;
    switch (structure.kind) {
        case DiffusionStructure::Kind::constant_diagonal: {
            model.sigma_kind = LearnedSde::SigmaKind::diagonal_scalars;
            model.sigma_diagonal.resize(d);
            for (int i = 0; i < d; ++i)
                model.sigma_diagonal[i] = std::sqrt(2.0 * std::max(model.diffusion_coeffs(i, 0), 0.0));
            break;
        }
        case DiffusionStructure::Kind::diagonal_polynomial: {
            if (d == 1) {
                // Coefficients of D over the monomial part of the basis.
                int degree = sigma_poly_degree.value_or(
                    std::max(0, (layout.diffusion_basis_size - 1) / 2));
                Eigen::VectorXd d_poly = Eigen::VectorXd::Zero(layout.diffusion_basis_size);
                bool monomial = true;
                for (int k = 0; k < layout.diffusion_basis_size; ++k) {
                    const auto& term = structure.basis->terms()[static_cast<std::size_t>(k)];
                    if (term.trig) { monomial = false; break; }
                    int deg = term.total_degree();
                    if (deg >= d_poly.size()) d_poly.conservativeResize(deg + 1);
                    d_poly[deg] = model.diffusion_coeffs(0, k);
                }
                if (monomial) {
                    model.sigma_kind = LearnedSde::SigmaKind::poly_1d;
                    model.sigma_poly = recover_sigma_poly(d_poly, degree);
                }
            }
            break;
        }
        case DiffusionStructure::Kind::banded_constant: {
            Eigen::MatrixXd D = Eigen::MatrixXd::Zero(d, d);
            for (std::size_t e = 0; e < layout.diffusion_entries.size(); ++e) {
                auto [r, s] = layout.diffusion_entries[e];
                D(r, s) = model.diffusion_coeffs(static_cast<Eigen::Index>(e), 0);
            }
            auto chol = recover_sigma_cholesky(D);
            model.sigma_kind = LearnedSde::SigmaKind::lower_triangular;
            model.sigma_matrix = chol.sigma;
            model.sigma_repaired = chol.repaired;
            break;
        }
        case DiffusionStructure::Kind::full_polynomial: {
            // Constant surviving diffusion reduces to a constant matrix.
            bool constant = true;
            for (std::size_t e = 0; e < layout.diffusion_entries.size() && constant; ++e)
                for (int k = 0; k < layout.diffusion_basis_size; ++k) {
                    const auto& term = structure.basis->terms()[static_cast<std::size_t>(k)];
                    bool is_const = !term.trig && term.total_degree() == 0;
                    if (!is_const && model.diffusion_coeffs(static_cast<Eigen::Index>(e), k) != 0.0) {
                        constant = false;
                        break;
                    }
                }
            if (constant) {
                int const_idx = structure.basis->find_monomial(
                    std::vector<int>(static_cast<std::size_t>(d), 0));
                if (const_idx >= 0) {
                    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(d, d);
                    for (std::size_t e = 0; e < layout.diffusion_entries.size(); ++e) {
                        auto [r, s] = layout.diffusion_entries[e];
                        D(r, s) = model.diffusion_coeffs(static_cast<Eigen::Index>(e), const_idx);
                    }
                    auto chol = recover_sigma_cholesky(D);
                    model.sigma_kind = LearnedSde::SigmaKind::lower_triangular;
                    model.sigma_matrix = chol.sigma;
                    model.sigma_repaired = chol.repaired;
                }
            }
            break;
        }
    }
    return model;
}

}  // namespace wcr
