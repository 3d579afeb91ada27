#ifndef WCR_ASSEMBLY_HPP
#define WCR_ASSEMBLY_HPP

#include <Eigen/Core>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wcr/basis.hpp"
#include "wcr/data.hpp"
#include "wcr/kernel.hpp"

namespace wcr {

// How the drift vector is expanded. In shared mode every component mu_i uses
// the same d-dimensional dictionary. In per-axis mode mu_i is expanded in a
// 1d dictionary evaluated at x_i, so components stay uncoupled.
struct DriftSpec {
    enum class Mode { shared, per_axis };
    Mode mode = Mode::shared;
    int dimension = 1;
    Basis basis;

    int basis_size() const { return basis.size(); }

    static DriftSpec shared(Basis basis);
    static DriftSpec per_axis(int dimension, Basis one_dim_basis);
};

// Which entries of the diffusion matrix D get coefficients, and in which
// dictionary. Off-diagonal pairs are parameterized on the lower triangle
// only (their weak-form columns are identical), so a learned off-diagonal
// value absorbs both symmetric contributions.
struct DiffusionStructure {
    enum class Kind { constant_diagonal, diagonal_polynomial, banded_constant, full_polynomial };
    Kind kind = Kind::constant_diagonal;
    std::optional<Basis> basis;  // polynomial kinds
    int band_width = 0;          // banded_constant

    static DiffusionStructure constant_diagonal();
    static DiffusionStructure diagonal_polynomial(Basis basis);
    static DiffusionStructure banded_constant(int band_width);
    static DiffusionStructure full_polynomial(Basis basis);

    // Active (row, col) entries, 0-based: diagonal first, then lower bands in
    // increasing offset for banded; row-major over all pairs for full.
    std::vector<std::pair<int, int>> active_entries(int dimension) const;
    int entry_basis_size() const { return basis ? basis->size() : 1; }
    std::string name() const;
};

// Fixed linearization of all unknown coefficients: drift block first
// (axis-major, term-minor), then the diffusion block (entry-major,
// term-minor).
struct CoefficientLayout {
    int dimension = 0;
    int drift_basis_size = 0;
    std::vector<std::pair<int, int>> diffusion_entries;
    int diffusion_basis_size = 0;

    int drift_block_size() const { return dimension * drift_basis_size; }
    int size() const {
        return drift_block_size() +
               static_cast<int>(diffusion_entries.size()) * diffusion_basis_size;
    }
    // 0-based axis/term -> column.
    int drift_index(int axis, int term) const;
    // 0-based entry (r, s)/term -> column; throws if (r, s) is inactive.
    int diffusion_index(int r, int s, int term) const;
};

CoefficientLayout make_layout(const DriftSpec& drift, const DiffusionStructure& structure);

struct LmmScheme {
    enum class Kind { trapezoidal, milne, bdf2 };
    Kind kind = Kind::trapezoidal;

    // Number of history steps k: rows produced per kernel is L - k.
    int steps() const { return kind == Kind::trapezoidal ? 1 : 2; }
    // Formal accuracy order alpha.
    int order() const { return kind == Kind::milne ? 4 : 2; }
    std::string name() const;

    static LmmScheme trapezoidal() { return {Kind::trapezoidal}; }
    static LmmScheme milne() { return {Kind::milne}; }
    static LmmScheme bdf2() { return {Kind::bdf2}; }
    static LmmScheme from_name(const std::string& name);
};

// Per-kernel weak-form observables: y_l is the kernel average over snapshot
// l, row l of B holds the drift/diffusion feature averages in layout order.
struct WeakFeatures {
    Eigen::VectorXd y;
    Eigen::MatrixXd B;
};

struct LinearSystem {
    Eigen::MatrixXd matrix;
    Eigen::VectorXd rhs;
    CoefficientLayout layout;
    // Provenance for the fit report.
    Eigen::MatrixXd kernel_means;
    Eigen::VectorXd kernel_gamma;
    std::string scheme;
};

WeakFeatures weak_features(const AggregateData& data, const GaussianKernel& kernel,
                           const DriftSpec& drift, const DiffusionStructure& structure);

// Applies the scheme to the dense (y, B) observables: returns (A, y_hat)
// with L - k rows.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> apply_lmm(const LmmScheme& scheme,
                                                      const Eigen::VectorXd& y,
                                                      const Eigen::MatrixXd& B,
                                                      const std::vector<double>& times);

LinearSystem stack_systems(const std::vector<std::pair<Eigen::MatrixXd, Eigen::VectorXd>>& blocks,
                           const CoefficientLayout& layout);

struct AssembleOptions {
    int threads = 1;
    // Scale each kernel block by the RMS of its matrix entries. Off by
    // default; the raw stacking is the reference behavior.
    bool normalize_blocks = false;
};

// Full assembly over all kernels. Basis values are evaluated once per
// snapshot and shared; kernels are processed in parallel with deterministic
// output (fixed kernel order).
LinearSystem assemble_system(const AggregateData& data,
                             const std::vector<GaussianKernel>& kernels, const DriftSpec& drift,
                             const DiffusionStructure& structure, const LmmScheme& scheme,
                             const AssembleOptions& options = {});

}  // namespace wcr

#endif
