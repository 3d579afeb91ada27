#include "wcr/experiment.hpp"

#include <cmath>

#include "wcr/errors.hpp"

namespace wcr {

const char* version_string() { return "0.1.0"; }

namespace {

Eigen::VectorXd vec_from_json(const nlohmann::json& j) {
    Eigen::VectorXd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    return v;
}

nlohmann::json vec_to_json(const Eigen::VectorXd& v) {
    nlohmann::json j = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
    return j;
}

Eigen::MatrixXd mat_from_json(const nlohmann::json& j) {
    if (j.empty()) return {};
    Eigen::MatrixXd m(j.size(), j[0].size());
    for (std::size_t r = 0; r < j.size(); ++r)
        for (std::size_t c = 0; c < j[r].size(); ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
    return m;
}

nlohmann::json mat_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json j = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        j.push_back(row);
    }
    return j;
}

std::vector<int> unit_index(int d, int axis, int power) {
    std::vector<int> e(static_cast<std::size_t>(d), 0);
    e[static_cast<std::size_t>(axis)] = power;
    return e;
}

}  // namespace

SdeModel ModelSpec::build() const {
    SdeModel model;
    model.dimension = dimension;
    model.noise_dimension = dimension;
    const ModelSpec spec = *this;
    model.drift = [spec](const Eigen::VectorXd& x) { return spec.drift_at(x); };

    switch (sigma_kind) {
        case SigmaKind::constant_diagonal: {
            Eigen::MatrixXd S = sigma_diagonal.asDiagonal();
            if (S.rows() != dimension) throw ConfigError("sigma diagonal length != dimension");
            model.sigma = [S](const Eigen::VectorXd&) { return S; };
            break;
        }
        case SigmaKind::poly_1d: {
            if (dimension != 1) throw ConfigError("poly1d sigma requires dimension 1");
            Eigen::VectorXd c = sigma_poly;
            model.sigma = [c](const Eigen::VectorXd& x) {
                double s = 0.0, xp = 1.0;
                for (Eigen::Index k = 0; k < c.size(); ++k) {
                    s += c[k] * xp;
                    xp *= x[0];
                }
                Eigen::MatrixXd S(1, 1);
                S(0, 0) = s;
                return S;
            };
            break;
        }
        case SigmaKind::matrix: {
            if (sigma_matrix.rows() != dimension || sigma_matrix.cols() != dimension)
                throw ConfigError("sigma matrix must be d x d");
            Eigen::MatrixXd S = sigma_matrix;
            model.sigma = [S](const Eigen::VectorXd&) { return S; };
            break;
        }
    }
    return model;
}

Eigen::VectorXd ModelSpec::drift_at(const Eigen::VectorXd& x) const {
    const int d = dimension;
    Eigen::VectorXd mu(d);
    if (drift_name == "cubic-well") {
        for (int i = 0; i < d; ++i) mu[i] = x[i] - x[i] * x[i] * x[i];
    } else if (drift_name == "quintic-contrast") {
        double v = x[0];
        mu[0] = -v * (v - 1) * (v - 2) * (v - 3) * (v - 4);
    } else if (drift_name == "linear-plus-cos3") {
        mu[0] = x[0] + std::cos(3 * x[0]);
    } else if (drift_name == "gaussian-bump") {
        mu[0] = -2.0 * x[0] * std::exp(-x[0] * x[0]);
    } else if (drift_name == "sombrero") {
        double r2 = x.squaredNorm();
        mu = 10.0 * x - 4.0 * r2 * x;
    } else if (drift_name == "linear-decay") {
        if (decay_rates.size() != d) throw ConfigError("linear-decay needs d rates");
        mu = decay_rates.cwiseProduct(x);
    } else if (drift_name == "custom") {
        if (!custom_basis) throw ConfigError("custom drift needs a basis");
        mu = custom_coeffs * custom_basis->eval(x);
    } else {
        throw ConfigError("unknown drift model '" + drift_name + "'");
    }
    return mu;
}

std::vector<ModelSpec::DriftTerm> ModelSpec::exact_drift_terms() const {
    const int d = dimension;
    std::vector<DriftTerm> terms;
    auto mono = [&](int axis, std::vector<int> powers, double c) {
        terms.push_back({axis, TermDescriptor{std::move(powers), std::nullopt}, c});
    };
    if (drift_name == "cubic-well") {
        for (int i = 0; i < d; ++i) {
            mono(i, unit_index(d, i, 1), 1.0);
            mono(i, unit_index(d, i, 3), -1.0);
        }
    } else if (drift_name == "quintic-contrast") {
        // -x(x-1)(x-2)(x-3)(x-4) = -24x + 50x^2 - 35x^3 + 10x^4 - x^5
        mono(0, {1}, -24.0);
        mono(0, {2}, 50.0);
        mono(0, {3}, -35.0);
        mono(0, {4}, 10.0);
        mono(0, {5}, -1.0);
    } else if (drift_name == "linear-plus-cos3") {
        mono(0, {1}, 1.0);
        terms.push_back({0, TermDescriptor{{0}, TrigFactor{TrigFactor::Kind::cos, 3, 0}}, 1.0});
    } else if (drift_name == "sombrero") {
        mono(0, {1, 0}, 10.0);
        mono(0, {3, 0}, -4.0);
        mono(0, {1, 2}, -4.0);
        mono(1, {0, 1}, 10.0);
        mono(1, {2, 1}, -4.0);
        mono(1, {0, 3}, -4.0);
    } else if (drift_name == "linear-decay") {
        for (int i = 0; i < d; ++i) mono(i, unit_index(d, i, 1), decay_rates[i]);
    } else if (drift_name == "custom") {
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < custom_basis->size(); ++j)
                if (custom_coeffs(i, j) != 0.0)
                    terms.push_back({i, custom_basis->terms()[static_cast<std::size_t>(j)],
                                     custom_coeffs(i, j)});
    }
    return terms;  // empty for gaussian-bump
}

bool ModelSpec::drift_in_dictionary() const { return drift_name != "gaussian-bump"; }

std::vector<double> ObservationConfig::resolve_times() const {
    if (!use_grid) return times;
    std::vector<double> out;
    long long n = static_cast<long long>(std::floor((grid_stop - grid_start) / grid_step + 1e-9));
    for (long long i = 0; i <= n; ++i) out.push_back(grid_start + static_cast<double>(i) * grid_step);
    return out;
}

DriftSpec ExperimentConfig::drift_spec() const {
    const int d = model.dimension;
    switch (method.drift_kind) {
        case MethodConfig::DriftKind::complete:
            return DriftSpec::shared(complete_polynomial_basis(d, method.drift_order));
        case MethodConfig::DriftKind::per_axis:
            return DriftSpec::per_axis(d, complete_polynomial_basis(1, method.drift_order));
        case MethodConfig::DriftKind::tensor_cos:
            return DriftSpec::shared(
                tensor_product_basis(method.drift_order, method.cos_frequencies, d));
    }
    throw ConfigError("invalid drift kind");
}

DiffusionStructure ExperimentConfig::diffusion_structure() const {
    const int d = model.dimension;
    switch (method.diffusion_kind) {
        case MethodConfig::DiffusionKind::constant_diagonal:
            return DiffusionStructure::constant_diagonal();
        case MethodConfig::DiffusionKind::diagonal_polynomial:
            return DiffusionStructure::diagonal_polynomial(
                complete_polynomial_basis(d, method.diffusion_order));
        case MethodConfig::DiffusionKind::banded:
            return DiffusionStructure::banded_constant(method.band_width);
        case MethodConfig::DiffusionKind::full_polynomial:
            return DiffusionStructure::full_polynomial(
                complete_polynomial_basis(d, method.diffusion_order));
    }
    throw ConfigError("invalid diffusion kind");
}

LmmScheme ExperimentConfig::resolve_scheme(const std::vector<double>& times) const {
    if (method.lmm != "auto") return LmmScheme::from_name(method.lmm);
    if (times.size() >= 3) {
        double h = times[1] - times[0];
        bool equal = true;
        for (std::size_t i = 1; i + 1 < times.size(); ++i)
            if (std::abs(times[i + 1] - times[i] - h) > 1e-9 * h) equal = false;
        if (equal) return LmmScheme::milne();
    }
    return LmmScheme::trapezoidal();
}

void ExperimentConfig::validate() const {
    if (model.dimension < 1) throw ConfigError("model dimension must be >= 1");
    if (method.kernel_count < 1) throw ConfigError("kernel count must be >= 1");
    if (simulation.dt <= 0) throw ConfigError("simulation dt must be > 0");
    if (simulation.n_paths < 1) throw ConfigError("n_paths must be >= 1");
    if (observation.n_samples < 1) throw ConfigError("n_samples must be >= 1");
    if (observation.n_samples > simulation.n_paths)
        throw ConfigError("n_samples (" + std::to_string(observation.n_samples) +
                          ") exceeds n_paths (" + std::to_string(simulation.n_paths) + ")");
    if (observation.noise_delta < 0) throw ConfigError("noise level must be >= 0");
    auto times = observation.resolve_times();
    if (times.size() < 2) throw ConfigError("at least 2 observation times are required");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (times[i] <= times[i - 1]) throw ConfigError("observation times must be increasing");
    if (method.eta <= 0 && method.use_stridge) throw ConfigError("eta must be > 0");
    if (method.lambda < 0) throw ConfigError("lambda must be >= 0");
    if (method.gamma.size() != 1 && method.gamma.size() != model.dimension)
        throw ConfigError("gamma must be scalar or length d");
    if ((method.gamma.array() <= 0).any()) throw ConfigError("gamma entries must be > 0");
}

namespace {

nlohmann::json model_to_json(const ModelSpec& m) {
    nlohmann::json j;
    j["dimension"] = m.dimension;
    nlohmann::json drift;
    drift["name"] = m.drift_name;
    if (m.drift_name == "linear-decay") drift["rates"] = vec_to_json(m.decay_rates);
    if (m.drift_name == "custom") {
        drift["basis"] = m.custom_basis->to_json();
        drift["coefficients"] = mat_to_json(m.custom_coeffs);
    }
    j["drift"] = drift;
    nlohmann::json sigma;
    switch (m.sigma_kind) {
        case ModelSpec::SigmaKind::constant_diagonal:
            sigma["kind"] = "constant-diagonal";
            sigma["values"] = vec_to_json(m.sigma_diagonal);
            break;
        case ModelSpec::SigmaKind::poly_1d:
            sigma["kind"] = "poly1d";
            sigma["coefficients"] = vec_to_json(m.sigma_poly);
            break;
        case ModelSpec::SigmaKind::matrix:
            sigma["kind"] = "matrix";
            sigma["values"] = mat_to_json(m.sigma_matrix);
            break;
    }
    j["sigma"] = sigma;
    return j;
}

ModelSpec model_from_json(const nlohmann::json& j) {
    ModelSpec m;
    m.dimension = j.at("dimension").get<int>();
    const auto& drift = j.at("drift");
    m.drift_name = drift.at("name").get<std::string>();
    if (drift.contains("rates")) m.decay_rates = vec_from_json(drift["rates"]);
    if (m.drift_name == "custom") {
        m.custom_basis = Basis::from_json(drift.at("basis"));
        m.custom_coeffs = mat_from_json(drift.at("coefficients"));
    }
    const auto& sigma = j.at("sigma");
    std::string kind = sigma.at("kind").get<std::string>();
    if (kind == "constant-diagonal") {
        m.sigma_kind = ModelSpec::SigmaKind::constant_diagonal;
        m.sigma_diagonal = vec_from_json(sigma.at("values"));
    } else if (kind == "poly1d") {
        m.sigma_kind = ModelSpec::SigmaKind::poly_1d;
        m.sigma_poly = vec_from_json(sigma.at("coefficients"));
    } else if (kind == "matrix") {
        m.sigma_kind = ModelSpec::SigmaKind::matrix;
        m.sigma_matrix = mat_from_json(sigma.at("values"));
    } else {
        throw ConfigError("unknown sigma kind '" + kind + "'");
    }
    return m;
}

std::string drift_kind_name(MethodConfig::DriftKind k) {
    switch (k) {
        case MethodConfig::DriftKind::complete: return "complete";
        case MethodConfig::DriftKind::per_axis: return "per-axis";
        case MethodConfig::DriftKind::tensor_cos: return "tensor-cos";
    }
    return "?";
}

MethodConfig::DriftKind drift_kind_from(const std::string& s) {
    if (s == "complete") return MethodConfig::DriftKind::complete;
    if (s == "per-axis") return MethodConfig::DriftKind::per_axis;
    if (s == "tensor-cos") return MethodConfig::DriftKind::tensor_cos;
    throw ConfigError("unknown drift basis kind '" + s + "'");
}

std::string diffusion_kind_name(MethodConfig::DiffusionKind k) {
    switch (k) {
        case MethodConfig::DiffusionKind::constant_diagonal: return "constant-diagonal";
        case MethodConfig::DiffusionKind::diagonal_polynomial: return "diagonal-polynomial";
        case MethodConfig::DiffusionKind::banded: return "banded";
        case MethodConfig::DiffusionKind::full_polynomial: return "full-polynomial";
    }
    return "?";
}

MethodConfig::DiffusionKind diffusion_kind_from(const std::string& s) {
    if (s == "constant-diagonal") return MethodConfig::DiffusionKind::constant_diagonal;
    if (s == "diagonal-polynomial") return MethodConfig::DiffusionKind::diagonal_polynomial;
    if (s == "banded") return MethodConfig::DiffusionKind::banded;
    if (s == "full-polynomial") return MethodConfig::DiffusionKind::full_polynomial;
    throw ConfigError("unknown diffusion kind '" + s + "'");
}

}  // namespace

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["name"] = name;
    j["seed"] = seed;
    j["model"] = model_to_json(model);

    nlohmann::json sim;
    sim["dt"] = simulation.dt;
    sim["t_end"] = simulation.t_end;
    sim["n_paths"] = simulation.n_paths;
    nlohmann::json init;
    init["kind"] = simulation.initial_kind;
    if (simulation.initial_kind == "gaussian") {
        init["mean"] = vec_to_json(simulation.initial_mean);
        init["std"] = vec_to_json(simulation.initial_std);
    } else {
        init["lo"] = simulation.grid_lo;
        init["hi"] = simulation.grid_hi;
    }
    sim["initial"] = init;
    j["simulation"] = sim;

    nlohmann::json obs;
    if (observation.use_grid) {
        obs["time_grid"] = {{"start", observation.grid_start},
                            {"stop", observation.grid_stop},
                            {"step", observation.grid_step}};
    } else {
        obs["times"] = observation.times;
    }
    obs["n_samples"] = observation.n_samples;
    obs["noise"] = observation.noise_delta;
    j["observation"] = obs;

    nlohmann::json meth;
    meth["drift_basis"] = {{"kind", drift_kind_name(method.drift_kind)},
                           {"order", method.drift_order}};
    if (method.drift_kind == MethodConfig::DriftKind::tensor_cos)
        meth["drift_basis"]["frequencies"] = method.cos_frequencies;
    meth["diffusion"] = {{"kind", diffusion_kind_name(method.diffusion_kind)}};
    if (method.diffusion_kind == MethodConfig::DiffusionKind::diagonal_polynomial ||
        method.diffusion_kind == MethodConfig::DiffusionKind::full_polynomial)
        meth["diffusion"]["order"] = method.diffusion_order;
    if (method.diffusion_kind == MethodConfig::DiffusionKind::banded)
        meth["diffusion"]["width"] = method.band_width;
    meth["kernels"] = {{"count", method.kernel_count},
                       {"gamma", vec_to_json(method.gamma)},
                       {"padding", method.bounds_padding}};
    meth["lmm"] = method.lmm;
    nlohmann::json reg;
    reg["kind"] = method.use_stridge ? "stridge" : "least-squares";
    reg["lambda"] = method.lambda;
    reg["eta"] = method.eta;
    if (method.max_sweeps > 0) reg["max_sweeps"] = method.max_sweeps;
    meth["regression"] = reg;
    meth["normalize_blocks"] = method.normalize_blocks;
    if (method.sigma_degree) meth["sigma_degree"] = *method.sigma_degree;
    if (method.threads > 0) meth["threads"] = method.threads;
    j["method"] = meth;

    j["eval"] = {{"interval", {eval.interval_lo, eval.interval_hi}},
                 {"grid_points", eval.grid_points}};
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& input) {
    nlohmann::json j = input;
    if (j.contains("preset")) {
        // Start from the named preset, overlay any other keys present.
        ExperimentConfig base = preset(j["preset"].get<std::string>());
        nlohmann::json merged = base.to_json();
        j.erase("preset");
        merged.merge_patch(j);
        j = merged;
    }
    ExperimentConfig cfg;
    try {
        cfg.name = j.value("name", "custom");
        cfg.seed = j.value("seed", std::uint64_t{1});
        cfg.model = model_from_json(j.at("model"));

        const auto& sim = j.at("simulation");
        cfg.simulation.dt = sim.at("dt").get<double>();
        cfg.simulation.t_end = sim.at("t_end").get<double>();
        cfg.simulation.n_paths = sim.at("n_paths").get<Eigen::Index>();
        const auto& init = sim.at("initial");
        cfg.simulation.initial_kind = init.at("kind").get<std::string>();
        if (cfg.simulation.initial_kind == "gaussian") {
            cfg.simulation.initial_mean = vec_from_json(init.at("mean"));
            cfg.simulation.initial_std = vec_from_json(init.at("std"));
        } else if (cfg.simulation.initial_kind == "point-grid") {
            cfg.simulation.grid_lo = init.at("lo").get<double>();
            cfg.simulation.grid_hi = init.at("hi").get<double>();
        } else {
            throw ConfigError("unknown initial sampler kind '" + cfg.simulation.initial_kind + "'");
        }

        const auto& obs = j.at("observation");
        if (obs.contains("time_grid")) {
            cfg.observation.use_grid = true;
            cfg.observation.grid_start = obs["time_grid"].at("start").get<double>();
            cfg.observation.grid_stop = obs["time_grid"].at("stop").get<double>();
            cfg.observation.grid_step = obs["time_grid"].at("step").get<double>();
        } else {
            cfg.observation.times = obs.at("times").get<std::vector<double>>();
        }
        cfg.observation.n_samples = obs.at("n_samples").get<Eigen::Index>();
        cfg.observation.noise_delta = obs.value("noise", 0.0);

        const auto& meth = j.at("method");
        cfg.method.drift_kind = drift_kind_from(meth.at("drift_basis").at("kind").get<std::string>());
        cfg.method.drift_order = meth.at("drift_basis").at("order").get<int>();
        if (meth["drift_basis"].contains("frequencies"))
            cfg.method.cos_frequencies = meth["drift_basis"]["frequencies"].get<std::vector<int>>();
        cfg.method.diffusion_kind =
            diffusion_kind_from(meth.at("diffusion").at("kind").get<std::string>());
        cfg.method.diffusion_order = meth["diffusion"].value("order", 0);
        cfg.method.band_width = meth["diffusion"].value("width", 1);
        cfg.method.kernel_count = meth.at("kernels").at("count").get<int>();
        cfg.method.gamma = vec_from_json(meth.at("kernels").at("gamma"));
        cfg.method.bounds_padding = meth["kernels"].value("padding", 0.0);
        cfg.method.lmm = meth.value("lmm", "auto");
        const auto& reg = meth.at("regression");
        cfg.method.use_stridge = reg.value("kind", "stridge") == "stridge";
        cfg.method.lambda = reg.value("lambda", 1e-5);
        cfg.method.eta = reg.value("eta", 0.05);
        cfg.method.max_sweeps = reg.value("max_sweeps", 0);
        cfg.method.normalize_blocks = meth.value("normalize_blocks", false);
        if (meth.contains("sigma_degree")) cfg.method.sigma_degree = meth["sigma_degree"].get<int>();
        cfg.method.threads = meth.value("threads", 0);

        if (j.contains("eval")) {
            cfg.eval.interval_lo = j["eval"].at("interval")[0].get<double>();
            cfg.eval.interval_hi = j["eval"].at("interval")[1].get<double>();
            cfg.eval.grid_points = j["eval"].value("grid_points", 2001);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

}  // namespace wcr
