#ifndef WCR_EXPERIMENT_HPP
#define WCR_EXPERIMENT_HPP

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "wcr/assembly.hpp"
#include "wcr/data.hpp"
#include "wcr/metrics.hpp"
#include "wcr/regression.hpp"
#include "wcr/sde.hpp"

namespace wcr {

// Ground-truth model description. Named drifts come from a small catalog;
// "custom" takes explicit basis coefficients.
struct ModelSpec {
    int dimension = 1;
    std::string drift_name = "cubic-well";
    Eigen::VectorXd decay_rates;            // linear-decay
    std::optional<Basis> custom_basis;      // custom
    Eigen::MatrixXd custom_coeffs;          // custom, d x b

    enum class SigmaKind { constant_diagonal, poly_1d, matrix };
    SigmaKind sigma_kind = SigmaKind::constant_diagonal;
    Eigen::VectorXd sigma_diagonal = Eigen::VectorXd::Ones(1);
    Eigen::VectorXd sigma_poly;
    Eigen::MatrixXd sigma_matrix;

    SdeModel build() const;
    // Exact drift value, independent of any dictionary.
    Eigen::VectorXd drift_at(const Eigen::VectorXd& x) const;
    // Monomial/trig decomposition per axis, empty when the drift is not a
    // finite dictionary combination (e.g. gaussian-bump).
    struct DriftTerm {
        int axis;
        TermDescriptor term;
        double coefficient;
    };
    std::vector<DriftTerm> exact_drift_terms() const;
    bool drift_in_dictionary() const;
};

struct SimulationConfig {
    double dt = 0.01;
    double t_end = 1.0;
    Eigen::Index n_paths = 10000;
    std::string initial_kind = "gaussian";  // gaussian | point-grid
    Eigen::VectorXd initial_mean;
    Eigen::VectorXd initial_std;
    double grid_lo = 0.0, grid_hi = 1.0;    // point-grid: equispaced points per axis... 1d only
    int threads = 0;                         // 0: use method threads
};

struct ObservationConfig {
    std::vector<double> times;  // explicit snapshot times; empty when grid used
    bool use_grid = false;
    double grid_start = 0.0, grid_stop = 1.0, grid_step = 0.1;
    Eigen::Index n_samples = 10000;
    double noise_delta = 0.0;

    std::vector<double> resolve_times() const;
};

struct MethodConfig {
    enum class DriftKind { complete, per_axis, tensor_cos };
    DriftKind drift_kind = DriftKind::complete;
    int drift_order = 3;
    std::vector<int> cos_frequencies;  // tensor_cos

    enum class DiffusionKind { constant_diagonal, diagonal_polynomial, banded, full_polynomial };
    DiffusionKind diffusion_kind = DiffusionKind::constant_diagonal;
    int diffusion_order = 0;
    int band_width = 1;

    int kernel_count = 20;
    Eigen::VectorXd gamma = Eigen::VectorXd::Ones(1);  // broadcast if size 1
    double bounds_padding = 0.0;

    std::string lmm = "auto";  // auto | trapezoidal | milne | bdf2

    bool use_stridge = true;
    double lambda = 1e-5;
    double eta = 0.05;
    int max_sweeps = 0;
    bool normalize_blocks = false;
    std::optional<int> sigma_degree;
    int threads = 0;  // 0: hardware concurrency
};

struct EvalConfig {
    double interval_lo = -1.0, interval_hi = 1.0;
    int grid_points = 2001;
};

struct ExperimentConfig {
    std::string name = "custom";
    ModelSpec model;
    SimulationConfig simulation;
    ObservationConfig observation;
    MethodConfig method;
    EvalConfig eval;
    std::uint64_t seed = 1;

    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
    void validate() const;

    DriftSpec drift_spec() const;
    DiffusionStructure diffusion_structure() const;
    LmmScheme resolve_scheme(const std::vector<double>& times) const;
};

// Built-in experiment presets (also shipped under configs/).
std::vector<std::string> preset_names();
ExperimentConfig preset(const std::string& name);

AggregateData run_simulate(const ExperimentConfig& config);

struct FitResult {
    LearnedSde model;
    Eigen::VectorXd zeta;
    StridgeDiagnostics stridge_diag;
    Hypercube bounds;
    double assembly_seconds = 0;
    double regression_seconds = 0;
    double total_seconds = 0;
    double residual_norm = 0;
    Eigen::Index rows = 0;
    nlohmann::json report;  // full serialized fit report
};

struct FitOptions {
    // Dump the stacked system to <prefix>_matrix.csv / <prefix>_rhs.csv.
    std::optional<std::filesystem::path> dump_system;
};

FitResult run_fit(const ExperimentConfig& config, const AggregateData& data,
                  const FitOptions& options = {});

// Compares a fit report against the configured true model.
nlohmann::json run_eval(const ExperimentConfig& config, const nlohmann::json& report);

// Writes a drift profile along each axis (201 grid points over the data
// bounds stored in the report).
void write_plot_csv(const ExperimentConfig& config, const nlohmann::json& report,
                    const std::filesystem::path& path);

struct BenchCell {
    std::string vary;
    double value = 0;
    int L = 0;
    Eigen::Index N = 0;
    int M = 0;
    int d = 0;
    double simulate_seconds = 0;
    double assembly_seconds = 0;
    double regression_seconds = 0;
    double total_seconds = 0;
    double stridge_fraction = 0;
};

struct BenchConfig {
    std::vector<double> m_values;
    std::vector<double> n_values;
    std::vector<double> l_values;
    std::vector<double> d_values;
    int repeats = 1;
};

std::vector<BenchCell> run_bench(const ExperimentConfig& base, const BenchConfig& bench);
std::string bench_csv(const std::vector<BenchCell>& cells);

struct StudyCell {
    double parameter = 0;
    std::vector<double> per_seed_mre;
    double mean_mre = 0;
    std::string error;  // per-cell failure, non-fatal
};

struct StudyResult {
    std::string sweep;
    std::vector<StudyCell> cells;
    double slope = 0;  // log-log slope of mean MRE vs parameter
};

// Runs the full pipeline per (value, seed) cell and averages MRE over seeds.
StudyResult convergence_study(const ExperimentConfig& base, const std::string& sweep,
                              const std::vector<double>& values,
                              const std::vector<std::uint64_t>& seeds);
std::string study_csv(const StudyResult& result);

// Parameter vector for MRE evaluation: drift coefficients in layout order,
// then the sigma parameters implied by the diffusion structure.
struct ParameterVector {
    Eigen::VectorXd values;
    Eigen::Index drift_size = 0;
    std::vector<std::string> labels;
};
ParameterVector true_parameters(const ExperimentConfig& config);
ParameterVector learned_parameters(const ExperimentConfig& config, const LearnedSde& model);

const char* version_string();

}  // namespace wcr

#endif
