#include "wcr/assembly.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <thread>

#include "wcr/errors.hpp"

namespace wcr {

DriftSpec DriftSpec::shared(Basis basis) {
    DriftSpec s;
    s.mode = Mode::shared;
    s.dimension = basis.dimension();
    s.basis = std::move(basis);
    return s;
}

DriftSpec DriftSpec::per_axis(int dimension, Basis one_dim_basis) {
    if (one_dim_basis.dimension() != 1)
        throw ConfigError("per-axis drift expects a 1d basis template");
    DriftSpec s;
    s.mode = Mode::per_axis;
    s.dimension = dimension;
    s.basis = std::move(one_dim_basis);
    return s;
}

DiffusionStructure DiffusionStructure::constant_diagonal() {
    return DiffusionStructure{Kind::constant_diagonal, std::nullopt, 0};
}

DiffusionStructure DiffusionStructure::diagonal_polynomial(Basis basis) {
    return DiffusionStructure{Kind::diagonal_polynomial, std::move(basis), 0};
}

DiffusionStructure DiffusionStructure::banded_constant(int band_width) {
    if (band_width < 1) throw ConfigError("band width must be >= 1");
    return DiffusionStructure{Kind::banded_constant, std::nullopt, band_width};
}

DiffusionStructure DiffusionStructure::full_polynomial(Basis basis) {
    return DiffusionStructure{Kind::full_polynomial, std::move(basis), 0};
}

std::vector<std::pair<int, int>> DiffusionStructure::active_entries(int d) const {
    std::vector<std::pair<int, int>> entries;
    switch (kind) {
        case Kind::constant_diagonal:
        case Kind::diagonal_polynomial:
            for (int i = 0; i < d; ++i) entries.emplace_back(i, i);
            break;
        case Kind::banded_constant:
            if (band_width >= d) throw ConfigError("band width must be < dimension");
            for (int i = 0; i < d; ++i) entries.emplace_back(i, i);
            for (int off = 1; off <= band_width; ++off)
                for (int i = off; i < d; ++i) entries.emplace_back(i, i - off);
            break;
        case Kind::full_polynomial:
            for (int r = 0; r < d; ++r)
                for (int s = 0; s < d; ++s) entries.emplace_back(r, s);
            break;
    }
    return entries;
}

std::string DiffusionStructure::name() const {
    switch (kind) {
        case Kind::constant_diagonal: return "constant-diagonal";
        case Kind::diagonal_polynomial: return "diagonal-polynomial";
        case Kind::banded_constant: return "banded";
        case Kind::full_polynomial: return "full-polynomial";
    }
    return "?";
}

int CoefficientLayout::drift_index(int axis, int term) const {
    if (axis < 0 || axis >= dimension || term < 0 || term >= drift_basis_size)
        throw ConfigError("drift coefficient index out of range");
    return axis * drift_basis_size + term;
}

int CoefficientLayout::diffusion_index(int r, int s, int term) const {
    if (term < 0 || term >= diffusion_basis_size)
        throw ConfigError("diffusion coefficient index out of range");
    for (std::size_t e = 0; e < diffusion_entries.size(); ++e) {
        if (diffusion_entries[e] == std::make_pair(r, s))
            return drift_block_size() + static_cast<int>(e) * diffusion_basis_size + term;
    }
    throw ConfigError("diffusion entry (" + std::to_string(r + 1) + "," + std::to_string(s + 1) +
                      ") is not active under this structure");
}

CoefficientLayout make_layout(const DriftSpec& drift, const DiffusionStructure& structure) {
    if (structure.basis && structure.basis->dimension() != drift.dimension)
        throw ConfigError("diffusion basis dimension does not match drift dimension");
    CoefficientLayout layout;
    layout.dimension = drift.dimension;
    layout.drift_basis_size = drift.basis_size();
    layout.diffusion_entries = structure.active_entries(drift.dimension);
    layout.diffusion_basis_size = structure.entry_basis_size();
    return layout;
}

std::string LmmScheme::name() const {
    switch (kind) {
        case Kind::trapezoidal: return "trapezoidal";
        case Kind::milne: return "milne";
        case Kind::bdf2: return "bdf2";
    }
    return "?";
}

LmmScheme LmmScheme::from_name(const std::string& name) {
    if (name == "trapezoidal") return trapezoidal();
    if (name == "milne") return milne();
    if (name == "bdf2") return bdf2();
    throw ConfigError("unknown LMM scheme '" + name + "'");
}

namespace {

// Basis values shared by every kernel for one snapshot.
struct SnapshotCache {
    const Eigen::MatrixXd* X = nullptr;
    Eigen::MatrixXd drift_values;                // shared mode: N x b_mu
    std::vector<Eigen::MatrixXd> axis_values;    // per-axis mode: d of N x b_mu
    Eigen::MatrixXd diffusion_values;            // N x b_D (empty for constant)

    SnapshotCache(const Eigen::MatrixXd& samples, const DriftSpec& drift,
                  const DiffusionStructure& structure) {
        X = &samples;
        if (drift.mode == DriftSpec::Mode::shared) {
            drift_values = drift.basis.eval_rows(samples);
        } else {
            axis_values.reserve(static_cast<std::size_t>(drift.dimension));
            for (int i = 0; i < drift.dimension; ++i)
                axis_values.push_back(drift.basis.eval_rows(samples.col(i)));
        }
        if (structure.basis) diffusion_values = structure.basis->eval_rows(samples);
    }
};

// Fills row `l` of (y, B) for one kernel from the cached snapshot.
void kernel_row(const GaussianKernel& kernel, const SnapshotCache& cache,
                const DriftSpec& drift, const DiffusionStructure& structure,
                const CoefficientLayout& layout, double& y_out,
                Eigen::Ref<Eigen::RowVectorXd> row) {
    const Eigen::MatrixXd& X = *cache.X;
    const auto N = X.rows();
    const int d = layout.dimension;
    const double inv_n = 1.0 / static_cast<double>(N);

    Eigen::ArrayXXd Z = (X.rowwise() - kernel.mean().transpose()).array();
    Z.rowwise() /= kernel.std().transpose().array();
    Eigen::ArrayXd phi = (-0.5 * Z.square().rowwise().sum()).exp() * kernel.norm_constant();
    y_out = phi.mean();

    // t_{n,i} = (x_i - rho_i)/gamma_i^2
    Eigen::ArrayXXd T = Z.rowwise() / kernel.std().transpose().array();
    // G_{n,i} = -phi_n t_{n,i} = d phi/d x_i at sample n
    Eigen::MatrixXd G = (T.colwise() * (-phi)).matrix();

    if (drift.mode == DriftSpec::Mode::shared) {
        Eigen::MatrixXd block = inv_n * (G.transpose() * cache.drift_values);  // d x b
        for (int i = 0; i < d; ++i)
            row.segment(layout.drift_index(i, 0), layout.drift_basis_size) = block.row(i);
    } else {
        for (int i = 0; i < d; ++i)
            row.segment(layout.drift_index(i, 0), layout.drift_basis_size) =
                inv_n * (G.col(i).transpose() * cache.axis_values[static_cast<std::size_t>(i)]);
    }

    const int b_d = layout.diffusion_basis_size;
    Eigen::ArrayXd h(N);
    for (std::size_t e = 0; e < layout.diffusion_entries.size(); ++e) {
        auto [r, s] = layout.diffusion_entries[e];
        if (r == s) {
            double inv_g2 = 1.0 / (kernel.std()[r] * kernel.std()[r]);
            h = phi * (T.col(r).square() - inv_g2);
        } else {
            h = phi * T.col(r) * T.col(s);
        }
        int col0 = layout.drift_block_size() + static_cast<int>(e) * b_d;
        if (cache.diffusion_values.size() == 0) {
            row[col0] = h.mean();
        } else {
            row.segment(col0, b_d) = inv_n * (h.matrix().transpose() * cache.diffusion_values);
        }
    }
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            try {
                for (;;) {
                    int i = next.fetch_add(1);
                    if (i >= n) break;
                    fn(i);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

void check_inputs(const AggregateData& data, const DriftSpec& drift,
                  const DiffusionStructure& structure) {
    if (drift.dimension != data.dimension())
        throw ConfigError("drift expansion dimension does not match data dimension");
    if (drift.mode == DriftSpec::Mode::shared && drift.basis.dimension() != data.dimension())
        throw ConfigError("shared drift basis dimension does not match data dimension");
    if (structure.basis && structure.basis->dimension() != data.dimension())
        throw ConfigError("diffusion basis dimension does not match data dimension");
}

}  // namespace

WeakFeatures weak_features(const AggregateData& data, const GaussianKernel& kernel,
                           const DriftSpec& drift, const DiffusionStructure& structure) {
    check_inputs(data, drift, structure);
    if (kernel.dimension() != data.dimension())
        throw ConfigError("kernel dimension does not match data dimension");
    CoefficientLayout layout = make_layout(drift, structure);
    const auto L = data.snapshot_count();
    WeakFeatures out;
    out.y.resize(L);
    out.B.resize(L, layout.size());
    for (Eigen::Index l = 0; l < L; ++l) {
        SnapshotCache cache(data.snapshots()[static_cast<std::size_t>(l)].samples, drift,
                            structure);
        kernel_row(kernel, cache, drift, structure, layout, out.y[l], out.B.row(l));
    }
    return out;
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> apply_lmm(const LmmScheme& scheme,
                                                      const Eigen::VectorXd& y,
                                                      const Eigen::MatrixXd& B,
                                                      const std::vector<double>& times) {
    const auto L = y.size();
    if (B.rows() != L || static_cast<Eigen::Index>(times.size()) != L)
        throw ConfigError("apply_lmm: inconsistent input sizes");
    const int k = scheme.steps();
    if (L < k + 1)
        throw ConfigError("scheme '" + scheme.name() + "' needs at least " + std::to_string(k + 1) +
                          " snapshots, got " + std::to_string(L));
    const auto rows = L - k;
    Eigen::MatrixXd A(rows, B.cols());
    Eigen::VectorXd rhs(rows);

    switch (scheme.kind) {
        case LmmScheme::Kind::trapezoidal:
            for (Eigen::Index n = 0; n < rows; ++n) {
                double h = times[static_cast<std::size_t>(n + 1)] - times[static_cast<std::size_t>(n)];
                A.row(n) = 0.5 * h * (B.row(n) + B.row(n + 1));
                rhs[n] = y[n + 1] - y[n];
            }
            break;
        case LmmScheme::Kind::milne: {
            double h = times[1] - times[0];
            for (std::size_t i = 1; i + 1 < times.size(); ++i) {
                double hi = times[i + 1] - times[i];
                if (std::abs(hi - h) > 1e-9 * h)
                    throw ConfigError("milne scheme requires equally spaced snapshots");
            }
            for (Eigen::Index n = 0; n < rows; ++n) {
                A.row(n) = (h / 3.0) * (B.row(n + 2) + 4.0 * B.row(n + 1) + B.row(n));
                rhs[n] = y[n + 2] - y[n];
            }
            break;
        }
        case LmmScheme::Kind::bdf2:
            for (Eigen::Index n = 0; n < rows; ++n) {
                double h_prev = times[static_cast<std::size_t>(n + 1)] - times[static_cast<std::size_t>(n)];
                double h_cur = times[static_cast<std::size_t>(n + 2)] - times[static_cast<std::size_t>(n + 1)];
                double w = h_cur / h_prev;
                double denom = 1.0 + 2.0 * w;
                A.row(n) = h_cur * (1.0 + w) / denom * B.row(n + 2);
                rhs[n] = y[n + 2] - (1.0 + w) * (1.0 + w) / denom * y[n + 1] +
                         w * w / denom * y[n];
            }
            break;
    }
    return {std::move(A), std::move(rhs)};
}

LinearSystem stack_systems(const std::vector<std::pair<Eigen::MatrixXd, Eigen::VectorXd>>& blocks,
                           const CoefficientLayout& layout) {
    if (blocks.empty()) throw ConfigError("no blocks to stack");
    Eigen::Index total_rows = 0;
    for (const auto& [A, yh] : blocks) {
        if (A.cols() != layout.size()) throw ConfigError("block column count does not match layout");
        if (A.rows() != yh.size()) throw ConfigError("block matrix/rhs row mismatch");
        total_rows += A.rows();
    }
    LinearSystem sys;
    sys.layout = layout;
    sys.matrix.resize(total_rows, layout.size());
    sys.rhs.resize(total_rows);
    Eigen::Index at = 0;
    for (const auto& [A, yh] : blocks) {
        sys.matrix.middleRows(at, A.rows()) = A;
        sys.rhs.segment(at, yh.size()) = yh;
        at += A.rows();
    }
    return sys;
}

LinearSystem assemble_system(const AggregateData& data,
                             const std::vector<GaussianKernel>& kernels, const DriftSpec& drift,
                             const DiffusionStructure& structure, const LmmScheme& scheme,
                             const AssembleOptions& options) {
    if (kernels.empty()) throw ConfigError("at least one kernel is required");
    check_inputs(data, drift, structure);
    CoefficientLayout layout = make_layout(drift, structure);
    const auto L = data.snapshot_count();
    const int M = static_cast<int>(kernels.size());

    std::vector<Eigen::VectorXd> ys(static_cast<std::size_t>(M), Eigen::VectorXd(L));
    std::vector<Eigen::MatrixXd> Bs(static_cast<std::size_t>(M),
                                    Eigen::MatrixXd(L, layout.size()));
    for (Eigen::Index l = 0; l < L; ++l) {
        SnapshotCache cache(data.snapshots()[static_cast<std::size_t>(l)].samples, drift,
                            structure);
        parallel_for(M, options.threads, [&](int m) {
            auto mi = static_cast<std::size_t>(m);
            kernel_row(kernels[mi], cache, drift, structure, layout, ys[mi][l], Bs[mi].row(l));
        });
    }

    std::vector<double> times = data.times();
    std::vector<std::pair<Eigen::MatrixXd, Eigen::VectorXd>> blocks;
    blocks.reserve(static_cast<std::size_t>(M));
    for (int m = 0; m < M; ++m) {
        auto mi = static_cast<std::size_t>(m);
        auto [A, yh] = apply_lmm(scheme, ys[mi], Bs[mi], times);
        if (options.normalize_blocks) {
            double rms = std::sqrt(A.squaredNorm() / static_cast<double>(A.size()));
            if (rms > 0) {
                A /= rms;
                yh /= rms;
            }
        }
        blocks.emplace_back(std::move(A), std::move(yh));
    }
    LinearSystem sys = stack_systems(blocks, layout);
    sys.kernel_means.resize(M, data.dimension());
    for (int m = 0; m < M; ++m) sys.kernel_means.row(m) = kernels[static_cast<std::size_t>(m)].mean();
    sys.kernel_gamma = kernels.front().std();
    sys.scheme = scheme.name();
    return sys;
}

}  // namespace wcr
