#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "wcr/errors.hpp"
#include "wcr/experiment.hpp"

namespace wcr {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::string fnv1a_digest(const Eigen::MatrixXd& means, const Eigen::VectorXd& gamma) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    auto mix = [&](const double* data, Eigen::Index n) {
        const auto* bytes = reinterpret_cast<const unsigned char*>(data);
        for (Eigen::Index i = 0; i < n * static_cast<Eigen::Index>(sizeof(double)); ++i) {
            hash ^= bytes[i];
            hash *= 0x100000001b3ull;
        }
    };
    // Row-major traversal for a storage-independent digest.
    for (Eigen::Index r = 0; r < means.rows(); ++r)
        for (Eigen::Index c = 0; c < means.cols(); ++c) {
            double v = means(r, c);
            mix(&v, 1);
        }
    mix(gamma.data(), gamma.size());
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

nlohmann::json vec_json(const Eigen::VectorXd& v) {
    nlohmann::json j = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
    return j;
}

nlohmann::json mat_json(const Eigen::MatrixXd& m) {
    nlohmann::json j = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        j.push_back(row);
    }
    return j;
}

Eigen::VectorXd vec_from(const nlohmann::json& j) {
    Eigen::VectorXd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    return v;
}

Eigen::MatrixXd mat_from(const nlohmann::json& j) {
    if (j.empty()) return {};
    Eigen::MatrixXd m(j.size(), j[0].size());
    for (std::size_t r = 0; r < j.size(); ++r)
        for (std::size_t c = 0; c < j[r].size(); ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
    return m;
}

Eigen::VectorXd broadcast_gamma(const Eigen::VectorXd& gamma, int d) {
    if (gamma.size() == d) return gamma;
    return Eigen::VectorXd::Constant(d, gamma[0]);
}

void write_matrix_csv(const Eigen::MatrixXd& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out.precision(17);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out << ',';
            out << m(r, c);
        }
        out << '\n';
    }
}

}  // namespace

AggregateData run_simulate(const ExperimentConfig& config) {
    config.validate();
    SdeModel model = config.model.build();
    InitialSampler init = [&] {
        if (config.simulation.initial_kind == "gaussian")
            return InitialSampler::gaussian(config.simulation.initial_mean,
                                            config.simulation.initial_std);
        if (config.model.dimension != 1)
            throw ConfigError("point-grid initial sampler is 1d only");
        Eigen::MatrixXd pts(config.simulation.n_paths, 1);
        double lo = config.simulation.grid_lo, hi = config.simulation.grid_hi;
        for (Eigen::Index i = 0; i < pts.rows(); ++i)
            pts(i, 0) = pts.rows() == 1
                            ? 0.5 * (lo + hi)
                            : lo + (hi - lo) * static_cast<double>(i) /
                                       static_cast<double>(pts.rows() - 1);
        return InitialSampler::point_set(pts);
    }();

    std::vector<double> times = config.observation.resolve_times();
    SimulateOptions options;
    options.record_times = times;
    options.threads = resolve_threads(config.simulation.threads > 0 ? config.simulation.threads
                                                                    : config.method.threads);
    double t_end = std::max(config.simulation.t_end, times.back());
    PathEnsemble paths = euler_maruyama(model, init, config.simulation.dt, t_end,
                                        config.simulation.n_paths, config.seed, options);
    AggregateData data =
        extract_snapshots(paths, times, config.observation.n_samples, config.seed);
    if (config.observation.noise_delta > 0) {
        RngStream noise_rng(config.seed, RngDomain::observation_noise);
        data = add_multiplicative_noise(data, config.observation.noise_delta, noise_rng);
    }
    return data;
}

FitResult run_fit(const ExperimentConfig& config, const AggregateData& data,
                  const FitOptions& options) {
    config.validate();
    if (data.dimension() != config.model.dimension)
        throw DataError("data dimension " + std::to_string(data.dimension()) +
                        " does not match config dimension " +
                        std::to_string(config.model.dimension));
    auto t_start = std::chrono::steady_clock::now();

    DriftSpec drift = config.drift_spec();
    DiffusionStructure structure = config.diffusion_structure();
    std::vector<double> times = data.times();
    LmmScheme scheme = config.resolve_scheme(times);

    Hypercube bounds = data_bounds(data);
    if (config.method.bounds_padding > 0) bounds = bounds.padded(config.method.bounds_padding);
    Eigen::VectorXd gamma = broadcast_gamma(config.method.gamma, data.dimension());
    RngStream kernel_rng(config.seed, RngDomain::kernel_sampling);
    std::vector<GaussianKernel> kernels =
        sample_kernels_lhs(config.method.kernel_count, bounds, gamma, kernel_rng);

    AssembleOptions assemble_options;
    assemble_options.threads = resolve_threads(config.method.threads);
    assemble_options.normalize_blocks = config.method.normalize_blocks;
    LinearSystem system = assemble_system(data, kernels, drift, structure, scheme,
                                          assemble_options);
    double assembly_seconds = seconds_since(t_start);

    if (options.dump_system) {
        write_matrix_csv(system.matrix,
                         options.dump_system->string() + "_matrix.csv");
        write_matrix_csv(system.rhs, options.dump_system->string() + "_rhs.csv");
    }

    auto t_reg = std::chrono::steady_clock::now();
    Eigen::VectorXd zeta;
    StridgeDiagnostics diag;
    if (config.method.use_stridge) {
        StridgeConfig sc;
        sc.lambda = config.method.lambda;
        sc.eta = config.method.eta;
        sc.max_sweeps = config.method.max_sweeps;
        zeta = stridge(system, sc, &diag);
    } else {
        zeta = least_squares(system);
    }
    LearnedSde model = reconstruct_model(zeta, system.layout, drift, structure,
                                         config.method.sigma_degree);
    double regression_seconds = seconds_since(t_reg);

    FitResult result;
    result.model = std::move(model);
    result.zeta = zeta;
    result.stridge_diag = diag;
    result.bounds = bounds;
    result.assembly_seconds = assembly_seconds;
    result.regression_seconds = regression_seconds;
    result.total_seconds = seconds_since(t_start);
    result.residual_norm = (system.matrix * zeta - system.rhs).norm();
    result.rows = system.matrix.rows();

    // Report assembly.
    nlohmann::json report;
    report["version"] = version_string();
    report["name"] = config.name;
    report["seed"] = config.seed;
    report["config"] = config.to_json();

    nlohmann::json res;
    res["scheme"] = system.scheme;
    res["rows"] = result.rows;
    res["columns"] = system.layout.size();
    res["drift_coefficients"] = mat_json(result.model.drift_coeffs);
    nlohmann::json term_labels = nlohmann::json::array();
    for (const auto& t : drift.basis.terms()) term_labels.push_back(t.to_string());
    res["drift_terms"] = term_labels;
    res["drift_mode"] = drift.mode == DriftSpec::Mode::shared ? "shared" : "per-axis";
    nlohmann::json entries = nlohmann::json::array();
    for (auto [r, s] : system.layout.diffusion_entries) entries.push_back({r, s});
    res["diffusion_entries"] = entries;
    res["diffusion_coefficients"] = mat_json(result.model.diffusion_coeffs);
    res["diffusion_structure"] = structure.name();
    nlohmann::json sigma;
    switch (result.model.sigma_kind) {
        case LearnedSde::SigmaKind::diagonal_scalars:
            sigma["kind"] = "diagonal";
            sigma["values"] = vec_json(result.model.sigma_diagonal);
            break;
        case LearnedSde::SigmaKind::poly_1d:
            sigma["kind"] = "poly1d";
            sigma["values"] = vec_json(result.model.sigma_poly);
            break;
        case LearnedSde::SigmaKind::lower_triangular:
            sigma["kind"] = "lower-triangular";
            sigma["values"] = mat_json(result.model.sigma_matrix);
            sigma["repaired"] = result.model.sigma_repaired;
            break;
        case LearnedSde::SigmaKind::none:
            sigma["kind"] = "none";
            break;
    }
    res["sigma"] = sigma;
    nlohmann::json sparsity = nlohmann::json::array();
    for (Eigen::Index i = 0; i < zeta.size(); ++i)
        if (zeta[i] != 0.0) sparsity.push_back(i);
    res["nonzero_indices"] = sparsity;
    res["residual_norm"] = result.residual_norm;
    res["data_bounds"] = {{"lower", vec_json(bounds.lower)}, {"upper", vec_json(bounds.upper)}};
    if (config.method.use_stridge) {
        res["stridge"] = {{"sweeps", diag.sweeps},
                          {"empty_survivor_set", diag.empty_survivor_set},
                          {"survivors_below_threshold", diag.survivors_below_threshold}};
    }
    res["kernel_means_digest"] = fnv1a_digest(system.kernel_means, system.kernel_gamma);
    report["result"] = res;
    report["kernels"] = {{"gamma", vec_json(system.kernel_gamma)},
                         {"means", mat_json(system.kernel_means)}};
    report["timing"] = {{"assembly_seconds", result.assembly_seconds},
                        {"regression_seconds", result.regression_seconds},
                        {"total_seconds", result.total_seconds}};
    result.report = std::move(report);
    return result;
}

ParameterVector true_parameters(const ExperimentConfig& config) {
    DriftSpec drift = config.drift_spec();
    DiffusionStructure structure = config.diffusion_structure();
    CoefficientLayout layout = make_layout(drift, structure);
    const int d = config.model.dimension;

    ParameterVector out;
    Eigen::VectorXd drift_block = Eigen::VectorXd::Zero(layout.drift_block_size());
    if (!config.model.drift_in_dictionary())
        throw ConfigError("true drift is not a finite dictionary combination");
    for (const auto& term : config.model.exact_drift_terms()) {
        int idx = -1;
        if (drift.mode == DriftSpec::Mode::shared) {
            for (int j = 0; j < drift.basis.size(); ++j) {
                const auto& bt = drift.basis.terms()[static_cast<std::size_t>(j)];
                bool trig_match = bt.trig.has_value() == term.term.trig.has_value();
                if (trig_match && bt.trig)
                    trig_match = bt.trig->kind == term.term.trig->kind &&
                                 bt.trig->frequency == term.term.trig->frequency &&
                                 bt.trig->coordinate == term.term.trig->coordinate;
                if (trig_match && bt.powers == term.term.powers) {
                    idx = j;
                    break;
                }
            }
        } else {
            // Per-axis: the term must be a pure monomial in x_axis.
            int power = term.term.powers[static_cast<std::size_t>(term.axis)];
            bool pure = !term.term.trig;
            for (std::size_t i = 0; i < term.term.powers.size() && pure; ++i)
                if (static_cast<int>(i) != term.axis && term.term.powers[i] != 0) pure = false;
            if (pure) idx = drift.basis.find_monomial({power});
        }
        if (idx < 0)
            throw ConfigError("true drift term '" + term.term.to_string() +
                              "' is outside the fitted dictionary");
        drift_block[layout.drift_index(term.axis, idx)] += term.coefficient;
    }

    // Sigma parameters per structure.
    std::vector<double> sigma_params;
    std::vector<std::string> sigma_labels;
    switch (structure.kind) {
        case DiffusionStructure::Kind::constant_diagonal:
            for (int i = 0; i < d; ++i) {
                double v = 0.0;
                if (config.model.sigma_kind == ModelSpec::SigmaKind::constant_diagonal)
                    v = config.model.sigma_diagonal[i];
                else if (config.model.sigma_kind == ModelSpec::SigmaKind::matrix)
                    v = std::sqrt(config.model.sigma_matrix.row(i).squaredNorm());
                sigma_params.push_back(v);
                sigma_labels.push_back("sigma" + std::to_string(i + 1));
            }
            break;
        case DiffusionStructure::Kind::diagonal_polynomial: {
            if (config.model.sigma_kind != ModelSpec::SigmaKind::poly_1d)
                throw ConfigError("diagonal-polynomial structure expects a poly1d true sigma");
            for (Eigen::Index k = 0; k < config.model.sigma_poly.size(); ++k) {
                sigma_params.push_back(config.model.sigma_poly[k]);
                sigma_labels.push_back("sigma_c" + std::to_string(k));
            }
            break;
        }
        case DiffusionStructure::Kind::banded_constant:
        case DiffusionStructure::Kind::full_polynomial: {
            Eigen::MatrixXd sigma_true;
            if (config.model.sigma_kind == ModelSpec::SigmaKind::matrix)
                sigma_true = config.model.sigma_matrix;
            else if (config.model.sigma_kind == ModelSpec::SigmaKind::constant_diagonal)
                sigma_true = Eigen::MatrixXd(config.model.sigma_diagonal.asDiagonal());
            else
                throw ConfigError("matrix sigma comparison needs a constant true sigma");
            if (structure.kind == DiffusionStructure::Kind::banded_constant) {
                for (auto [r, s] : structure.active_entries(d)) {
                    sigma_params.push_back(sigma_true(r, s));
                    sigma_labels.push_back("sigma[" + std::to_string(r + 1) + "," +
                                           std::to_string(s + 1) + "]");
                }
            } else {
                for (int r = 0; r < d; ++r)
                    for (int s = 0; s <= r; ++s) {
                        sigma_params.push_back(sigma_true(r, s));
                        sigma_labels.push_back("sigma[" + std::to_string(r + 1) + "," +
                                               std::to_string(s + 1) + "]");
                    }
            }
            break;
        }
    }

    out.drift_size = drift_block.size();
    out.values.resize(drift_block.size() + static_cast<Eigen::Index>(sigma_params.size()));
    out.values.head(drift_block.size()) = drift_block;
    for (std::size_t i = 0; i < sigma_params.size(); ++i)
        out.values[drift_block.size() + static_cast<Eigen::Index>(i)] = sigma_params[i];
    for (int i = 0; i < layout.dimension; ++i)
        for (int j = 0; j < layout.drift_basis_size; ++j)
            out.labels.push_back("mu" + std::to_string(i + 1) + ":" +
                                 drift.basis.terms()[static_cast<std::size_t>(j)].to_string());
    out.labels.insert(out.labels.end(), sigma_labels.begin(), sigma_labels.end());
    return out;
}

ParameterVector learned_parameters(const ExperimentConfig& config, const LearnedSde& model) {
    const int d = config.model.dimension;
    ParameterVector out;
    Eigen::VectorXd drift_block(model.layout.drift_block_size());
    for (int i = 0; i < model.layout.dimension; ++i)
        for (int j = 0; j < model.layout.drift_basis_size; ++j)
            drift_block[model.layout.drift_index(i, j)] = model.drift_coeffs(i, j);

    std::vector<double> sigma_params;
    switch (model.structure.kind) {
        case DiffusionStructure::Kind::constant_diagonal:
            for (int i = 0; i < d; ++i) sigma_params.push_back(model.sigma_diagonal[i]);
            break;
        case DiffusionStructure::Kind::diagonal_polynomial:
            for (Eigen::Index k = 0; k < model.sigma_poly.size(); ++k)
                sigma_params.push_back(model.sigma_poly[k]);
            break;
        case DiffusionStructure::Kind::banded_constant:
            for (auto [r, s] : model.structure.active_entries(d))
                sigma_params.push_back(model.sigma_matrix.size() ? model.sigma_matrix(r, s) : 0.0);
            break;
        case DiffusionStructure::Kind::full_polynomial:
            for (int r = 0; r < d; ++r)
                for (int s = 0; s <= r; ++s)
                    sigma_params.push_back(model.sigma_matrix.size() ? model.sigma_matrix(r, s)
                                                                     : 0.0);
            break;
    }
    out.drift_size = drift_block.size();
    out.values.resize(drift_block.size() + static_cast<Eigen::Index>(sigma_params.size()));
    out.values.head(drift_block.size()) = drift_block;
    for (std::size_t i = 0; i < sigma_params.size(); ++i)
        out.values[drift_block.size() + static_cast<Eigen::Index>(i)] = sigma_params[i];
    return out;
}

namespace {

LearnedSde model_from_report(const ExperimentConfig& config, const nlohmann::json& report) {
    DriftSpec drift = config.drift_spec();
    DiffusionStructure structure = config.diffusion_structure();
    CoefficientLayout layout = make_layout(drift, structure);
    LearnedSde model;
    model.layout = layout;
    model.drift_spec = drift;
    model.structure = structure;
    const auto& res = report.at("result");
    model.drift_coeffs = mat_from(res.at("drift_coefficients"));
    model.diffusion_coeffs = mat_from(res.at("diffusion_coefficients"));
    const auto& sigma = res.at("sigma");
    std::string kind = sigma.at("kind").get<std::string>();
    if (kind == "diagonal") {
        model.sigma_kind = LearnedSde::SigmaKind::diagonal_scalars;
        model.sigma_diagonal = vec_from(sigma.at("values"));
    } else if (kind == "poly1d") {
        model.sigma_kind = LearnedSde::SigmaKind::poly_1d;
        model.sigma_poly = vec_from(sigma.at("values"));
    } else if (kind == "lower-triangular") {
        model.sigma_kind = LearnedSde::SigmaKind::lower_triangular;
        model.sigma_matrix = mat_from(sigma.at("values"));
        model.sigma_repaired = sigma.value("repaired", false);
    }
    return model;
}

}  // namespace

nlohmann::json run_eval(const ExperimentConfig& config, const nlohmann::json& report) {
    LearnedSde model = model_from_report(config, report);
    nlohmann::json out;
    out["name"] = config.name;

    if (config.model.drift_in_dictionary()) {
        ParameterVector truth = true_parameters(config);
        ParameterVector learned = learned_parameters(config, model);
        ErrorReport err = mre(truth.values, learned.values, truth.drift_size);
        out["mre"] = err.mre;
        out["mre_drift"] = err.mre_drift;
        out["mre_diffusion"] = err.mre_diffusion;
        nlohmann::json per = nlohmann::json::array();
        for (Eigen::Index i = 0; i < err.per_coefficient.size(); ++i) {
            if (std::isnan(err.per_coefficient[i]))
                per.push_back(nullptr);
            else
                per.push_back(err.per_coefficient[i]);
        }
        out["per_coefficient"] = per;
        out["labels"] = truth.labels;
        out["missed_nonzeros"] = err.missed_nonzeros;
        out["spurious_nonzeros"] = err.spurious_nonzeros;
        out["zero_terms_eliminated"] = err.spurious_nonzeros.empty();
        out["true_parameters"] = vec_json(truth.values);
        out["learned_parameters"] = vec_json(learned.values);
    }

    // Drift L2 profile error over the eval interval (full quadrature in 1d,
    // per-axis slices otherwise).
    const int d = config.model.dimension;
    const ModelSpec& true_model = config.model;
    nlohmann::json l2 = nlohmann::json::array();
    if (d == 1) {
        Hypercube box;
        box.lower = Eigen::VectorXd::Constant(1, config.eval.interval_lo);
        box.upper = Eigen::VectorXd::Constant(1, config.eval.interval_hi);
        double v = l2_relative_error(
            [&](const Eigen::VectorXd& x) { return true_model.drift_at(x)[0]; },
            [&](const Eigen::VectorXd& x) { return model.drift_at(x)[0]; }, box,
            config.eval.grid_points);
        l2.push_back(v);
    } else {
        for (int axis = 0; axis < d; ++axis) {
            Hypercube box;
            box.lower = Eigen::VectorXd::Constant(1, config.eval.interval_lo);
            box.upper = Eigen::VectorXd::Constant(1, config.eval.interval_hi);
            auto lift = [&](const Eigen::VectorXd& t) {
                Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
                x[axis] = t[0];
                return x;
            };
            double v = l2_relative_error(
                [&](const Eigen::VectorXd& t) { return true_model.drift_at(lift(t))[axis]; },
                [&](const Eigen::VectorXd& t) { return model.drift_at(lift(t))[axis]; }, box,
                config.eval.grid_points);
            l2.push_back(v);
        }
    }
    out["l2_drift_error"] = l2;
    return out;
}

void write_plot_csv(const ExperimentConfig& config, const nlohmann::json& report,
                    const std::filesystem::path& path) {
    LearnedSde model = model_from_report(config, report);
    const auto& jb = report.at("result").at("data_bounds");
    Eigen::VectorXd lower = vec_from(jb.at("lower"));
    Eigen::VectorXd upper = vec_from(jb.at("upper"));
    const int d = config.model.dimension;
    const int points = 201;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out.precision(17);
    if (d == 1) {
        out << "x,mu_true,mu_learned\n";
        Eigen::VectorXd x(1);
        for (int i = 0; i < points; ++i) {
            x[0] = lower[0] + (upper[0] - lower[0]) * i / (points - 1);
            out << x[0] << ',' << config.model.drift_at(x)[0] << ',' << model.drift_at(x)[0]
                << '\n';
        }
    } else {
        out << "axis,x,mu_true,mu_learned\n";
        for (int axis = 0; axis < d; ++axis) {
            Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
            for (int i = 0; i < points; ++i) {
                x[axis] = lower[axis] + (upper[axis] - lower[axis]) * i / (points - 1);
                out << (axis + 1) << ',' << x[axis] << ',' << config.model.drift_at(x)[axis]
                    << ',' << model.drift_at(x)[axis] << '\n';
            }
        }
    }
}

std::vector<BenchCell> run_bench(const ExperimentConfig& base, const BenchConfig& bench) {
    std::vector<std::pair<std::string, std::vector<double>>> sweeps;
    if (!bench.m_values.empty()) sweeps.emplace_back("M", bench.m_values);
    if (!bench.n_values.empty()) sweeps.emplace_back("N", bench.n_values);
    if (!bench.l_values.empty()) sweeps.emplace_back("L", bench.l_values);
    if (!bench.d_values.empty()) sweeps.emplace_back("d", bench.d_values);
    if (sweeps.empty()) sweeps.emplace_back("M", std::vector<double>{
                                                     static_cast<double>(base.method.kernel_count)});
    std::vector<BenchCell> cells;
    for (const auto& [vary, values] : sweeps) {
        for (double value : values) {
            ExperimentConfig cfg = base;
            if (vary == "M") {
                cfg.method.kernel_count = static_cast<int>(value);
            } else if (vary == "N") {
                cfg.observation.n_samples = static_cast<Eigen::Index>(value);
                cfg.simulation.n_paths =
                    std::max(cfg.simulation.n_paths, cfg.observation.n_samples);
            } else if (vary == "L") {
                if (!cfg.observation.use_grid)
                    throw ConfigError("L sweep requires a time-grid observation config");
                cfg.observation.grid_stop =
                    cfg.observation.grid_start + (value - 1) * cfg.observation.grid_step;
                cfg.simulation.t_end = std::max(cfg.simulation.t_end, cfg.observation.grid_stop);
            } else if (vary == "d") {
                int d = static_cast<int>(value);
                cfg.model.dimension = d;
                if (cfg.model.drift_name == "linear-decay") {
                    Eigen::VectorXd rates(d);
                    for (int i = 0; i < d; ++i)
                        rates[i] = base.model.decay_rates[i % base.model.decay_rates.size()];
                    cfg.model.decay_rates = rates;
                } else if (cfg.model.drift_name != "cubic-well") {
                    throw ConfigError("d sweep supports cubic-well and linear-decay models");
                }
                cfg.model.sigma_diagonal = Eigen::VectorXd::Ones(d);
                cfg.simulation.initial_mean = Eigen::VectorXd::Constant(d, base.simulation.initial_mean[0]);
                cfg.simulation.initial_std = Eigen::VectorXd::Constant(d, base.simulation.initial_std[0]);
                cfg.method.gamma = Eigen::VectorXd::Constant(d, base.method.gamma[0]);
            }
            BenchCell cell;
            cell.vary = vary;
            cell.value = value;
            cell.d = cfg.model.dimension;
            cell.M = cfg.method.kernel_count;
            cell.N = cfg.observation.n_samples;
            double best_assembly = std::numeric_limits<double>::infinity();
            for (int rep = 0; rep < std::max(1, bench.repeats); ++rep) {
                auto t0 = std::chrono::steady_clock::now();
                AggregateData data = run_simulate(cfg);
                cell.simulate_seconds = seconds_since(t0);
                cell.L = static_cast<int>(data.snapshot_count());
                FitResult fit = run_fit(cfg, data);
                // Median would need storage; the minimum over repeats is the
                // stable scaling statistic here.
                if (fit.assembly_seconds < best_assembly) {
                    best_assembly = fit.assembly_seconds;
                    cell.assembly_seconds = fit.assembly_seconds;
                    cell.regression_seconds = fit.regression_seconds;
                    cell.total_seconds = fit.total_seconds;
                    cell.stridge_fraction =
                        fit.total_seconds > 0 ? fit.regression_seconds / fit.total_seconds : 0;
                }
            }
            cells.push_back(cell);
        }
    }
    return cells;
}

std::string bench_csv(const std::vector<BenchCell>& cells) {
    std::ostringstream out;
    out.precision(6);
    out << "vary,value,L,N,M,d,simulate_seconds,assembly_seconds,regression_seconds,"
           "total_seconds,stridge_fraction\n";
    for (const auto& c : cells)
        out << c.vary << ',' << c.value << ',' << c.L << ',' << c.N << ',' << c.M << ',' << c.d
            << ',' << c.simulate_seconds << ',' << c.assembly_seconds << ','
            << c.regression_seconds << ',' << c.total_seconds << ',' << c.stridge_fraction
            << '\n';
    return out.str();
}

StudyResult convergence_study(const ExperimentConfig& base, const std::string& sweep,
                              const std::vector<double>& values,
                              const std::vector<std::uint64_t>& seeds) {
    if (values.size() < 1) throw ConfigError("study needs at least one sweep value");
    if (seeds.empty()) throw ConfigError("study needs at least one seed");
    if (sweep != "N" && sweep != "dt") throw ConfigError("sweep must be 'N' or 'dt'");
    StudyResult result;
    result.sweep = sweep;
    for (double value : values) {
        StudyCell cell;
        cell.parameter = value;
        for (std::uint64_t seed : seeds) {
            try {
                ExperimentConfig cfg = base;
                cfg.seed = seed;
                if (sweep == "N") {
                    cfg.observation.n_samples = static_cast<Eigen::Index>(value);
                    cfg.simulation.n_paths =
                        std::max(cfg.simulation.n_paths, cfg.observation.n_samples);
                } else {
                    if (!cfg.observation.use_grid)
                        throw ConfigError("dt sweep requires a time-grid observation config");
                    cfg.observation.grid_step = value;
                }
                AggregateData data = run_simulate(cfg);
                FitResult fit = run_fit(cfg, data);
                ParameterVector truth = true_parameters(cfg);
                ParameterVector learned = learned_parameters(cfg, fit.model);
                cell.per_seed_mre.push_back(mre(truth.values, learned.values, truth.drift_size).mre);
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
        }
        if (!cell.per_seed_mre.empty()) {
            double sum = 0;
            for (double v : cell.per_seed_mre) sum += v;
            cell.mean_mre = sum / static_cast<double>(cell.per_seed_mre.size());
        }
        result.cells.push_back(std::move(cell));
    }
    std::vector<double> xs, ys;
    for (const auto& c : result.cells)
        if (c.error.empty() && c.mean_mre > 0) {
            xs.push_back(c.parameter);
            ys.push_back(c.mean_mre);
        }
    result.slope = xs.size() >= 2 ? log_log_slope(xs, ys) : 0.0;
    return result;
}

std::string study_csv(const StudyResult& result) {
    std::ostringstream out;
    out.precision(10);
    out << "parameter,mean_mre";
    std::size_t max_seeds = 0;
    for (const auto& c : result.cells) max_seeds = std::max(max_seeds, c.per_seed_mre.size());
    for (std::size_t s = 0; s < max_seeds; ++s) out << ",mre_seed" << (s + 1);
    out << ",error\n";
    for (const auto& c : result.cells) {
        out << c.parameter << ',' << c.mean_mre;
        for (std::size_t s = 0; s < max_seeds; ++s) {
            out << ',';
            if (s < c.per_seed_mre.size()) out << c.per_seed_mre[s];
        }
        out << ',' << c.error << '\n';
    }
    return out.str();
}

}  // namespace wcr
