#include "wcr/errors.hpp"
#include "wcr/experiment.hpp"

namespace wcr {

namespace {

Eigen::VectorXd constant_vector(int d, double v) { return Eigen::VectorXd::Constant(d, v); }

ExperimentConfig cubic_1d_base() {
    ExperimentConfig cfg;
    cfg.model.dimension = 1;
    cfg.model.drift_name = "cubic-well";
    cfg.model.sigma_kind = ModelSpec::SigmaKind::constant_diagonal;
    cfg.model.sigma_diagonal = constant_vector(1, 1.0);
    cfg.simulation.dt = 5e-4;
    cfg.simulation.t_end = 1.0;
    cfg.simulation.n_paths = 10000;
    cfg.simulation.initial_mean = constant_vector(1, 0.0);
    cfg.simulation.initial_std = constant_vector(1, 0.5);
    cfg.observation.times = {0.2, 0.5, 1.0};
    cfg.observation.n_samples = 10000;
    cfg.method.drift_kind = MethodConfig::DriftKind::complete;
    cfg.method.drift_order = 3;
    cfg.method.diffusion_kind = MethodConfig::DiffusionKind::constant_diagonal;
    cfg.method.kernel_count = 20;
    cfg.method.gamma = constant_vector(1, 0.85);
    cfg.method.lmm = "trapezoidal";
    cfg.method.lambda = 1e-5;
    cfg.method.eta = 0.05;
    return cfg;
}

ExperimentConfig cubic_nd(int d) {
    ExperimentConfig cfg;
    cfg.name = std::to_string(d) + "d-cubic";
    cfg.model.dimension = d;
    cfg.model.drift_name = "cubic-well";
    cfg.model.sigma_kind = ModelSpec::SigmaKind::constant_diagonal;
    cfg.model.sigma_diagonal = constant_vector(d, 1.0);
    cfg.simulation.dt = 1e-3;
    cfg.simulation.t_end = 1.0;
    cfg.simulation.n_paths = 50000;
    cfg.simulation.initial_mean = constant_vector(d, 0.0);
    cfg.simulation.initial_std = constant_vector(d, 0.5);
    cfg.observation.times = {0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 1.0};
    cfg.observation.n_samples = 50000;
    cfg.method.drift_kind = MethodConfig::DriftKind::per_axis;
    cfg.method.drift_order = 3;
    cfg.method.diffusion_kind = MethodConfig::DiffusionKind::constant_diagonal;
    cfg.method.kernel_count = 100;
    cfg.method.gamma = constant_vector(d, 1.0);
    cfg.method.lmm = "trapezoidal";
    cfg.method.lambda = 1e-8;
    cfg.method.eta = 0.05;
    return cfg;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"1d-cubic-a", "1d-cubic-b", "1d-vardiff",  "1d-quintic", "1d-quintic-coarse",
            "1d-trig",    "1d-gauss-drift", "2d-sombrero", "3d-cubic", "4d-cubic",
            "3d-linear-quality", "10d-cubic", "10d-coupled"};
}

ExperimentConfig preset(const std::string& name) {
    if (name == "1d-cubic-b") {
        ExperimentConfig cfg = cubic_1d_base();
        cfg.name = name;
        return cfg;
    }
    if (name == "1d-cubic-a") {
        ExperimentConfig cfg = cubic_1d_base();
        cfg.name = name;
        cfg.simulation.t_end = 0.5;
        cfg.observation.times = {0.1, 0.3, 0.5};
        return cfg;
    }
    if (name == "1d-vardiff") {
        ExperimentConfig cfg = cubic_1d_base();
        cfg.name = name;
        cfg.model.sigma_kind = ModelSpec::SigmaKind::poly_1d;
        cfg.model.sigma_poly = Eigen::Vector2d(1.0, 1.0);
        cfg.observation.times = {0.0, 0.2, 0.5, 1.0};
        cfg.method.diffusion_kind = MethodConfig::DiffusionKind::diagonal_polynomial;
        cfg.method.diffusion_order = 2;
        cfg.method.sigma_degree = 1;
        cfg.method.gamma = constant_vector(1, 0.85);
        return cfg;
    }
    if (name == "1d-quintic" || name == "1d-quintic-coarse") {
        ExperimentConfig cfg;
        cfg.name = name;
        cfg.model.dimension = 1;
        cfg.model.drift_name = "quintic-contrast";
        cfg.model.sigma_kind = ModelSpec::SigmaKind::constant_diagonal;
        cfg.model.sigma_diagonal = constant_vector(1, 1.0);
        cfg.simulation.dt = 1e-3;
        cfg.simulation.t_end = 2.0;
        cfg.simulation.n_paths = 5000;
        cfg.simulation.initial_mean = constant_vector(1, 1.5);
        cfg.simulation.initial_std = constant_vector(1, 0.2);
        cfg.observation.use_grid = true;
        cfg.observation.grid_start = 0.0;
        cfg.observation.grid_stop = 2.0;
        cfg.observation.grid_step = name == "1d-quintic" ? 0.1 : 0.5;
        cfg.observation.n_samples = 5000;
        cfg.method.drift_kind = MethodConfig::DriftKind::complete;
        cfg.method.drift_order = 5;
        cfg.method.diffusion_kind = MethodConfig::DiffusionKind::constant_diagonal;
        cfg.method.kernel_count = 200;
        cfg.method.gamma = constant_vector(1, 0.7);
        cfg.method.lmm = "milne";
        cfg.method.lambda = 1e-6;
        cfg.method.eta = 0.05;
        return cfg;
    }
    if (name == "1d-trig") {
        ExperimentConfig cfg;
        cfg.name = name;
        cfg.model.dimension = 1;
        cfg.model.drift_name = "linear-plus-cos3";
        cfg.model.sigma_kind = ModelSpec::SigmaKind::constant_diagonal;
        cfg.model.sigma_diagonal = constant_vector(1, 1.0);
        cfg.simulation.dt = 1e-3;
        cfg.simulation.t_end = 1.0;
        cfg.simulation.n_paths = 10000;
        cfg.simulation.initial_mean = constant_vector(1, 0.0);
        cfg.simulation.initial_std = constant_vector(1, 1.0);
        cfg.observation.use_grid = true;
        cfg.observation.grid_start = 0.0;
        cfg.observation.grid_stop = 1.0;
        cfg.observation.grid_step = 0.1;
        cfg.observation.n_samples = 10000;
        cfg.method.drift_kind = MethodConfig::DriftKind::tensor_cos;
        cfg.method.drift_order = 3;
        cfg.method.cos_frequencies = {0, 1, 2, 3};
        cfg.method.diffusion_kind = MethodConfig::DiffusionKind::constant_diagonal;
        cfg.method.kernel_count = 20;
        cfg.method.gamma = constant_vector(1, 1.0);
        cfg.method.lmm = "milne";
        cfg.method.lambda = 1e-6;
        cfg.method.eta = 0.05;
        return cfg;
    }
    if (name == "1d-gauss-drift") {
        ExperimentConfig cfg;
        cfg.name = name;
        cfg.model.dimension = 1;
        cfg.model.drift_name = "gaussian-bump";
        cfg.model.sigma_kind = ModelSpec::SigmaKind::constant_diagonal;
        cfg.model.sigma_diagonal = constant_vector(1, 1.0);
        cfg.simulation.dt = 1e-3;
        cfg.simulation.t_end = 1.0;
        cfg.simulation.n_paths = 10000;
        cfg.simulation.initial_mean = constant_vector(1, 0.0);
        cfg.simulation.initial_std = constant_vector(1, 1.0);
        cfg.observation.use_grid = true;
        cfg.observation.grid_start = 0.0;
        cfg.observation.grid_stop = 1.0;
        cfg.observation.grid_step = 0.1;
        cfg.observation.n_samples = 10000;
        cfg.method.drift_kind = MethodConfig::DriftKind::complete;
        cfg.method.drift_order = 9;
        cfg.method.diffusion_kind = MethodConfig::DiffusionKind::constant_diagonal;
        cfg.method.kernel_count = 20;
        cfg.method.gamma = constant_vector(1, 1.0);
        cfg.method.lmm = "milne";
        cfg.method.use_stridge = false;
        cfg.eval.interval_lo = -1.0;
        cfg.eval.interval_hi = 1.0;
        return cfg;
    }
    if (name == "2d-sombrero") {
        ExperimentConfig cfg;
        cfg.name = name;
        cfg.model.dimension = 2;
        cfg.model.drift_name = "sombrero";
        cfg.model.sigma_kind = ModelSpec::SigmaKind::constant_diagonal;
        cfg.model.sigma_diagonal = constant_vector(2, 1.0);
        cfg.simulation.dt = 1e-2;
        cfg.simulation.t_end = 15.0;
        cfg.simulation.n_paths = 40000;
        cfg.simulation.initial_mean = constant_vector(2, 0.0);
        cfg.simulation.initial_std = constant_vector(2, 0.4);
        cfg.observation.use_grid = true;
        cfg.observation.grid_start = 0.0;
        cfg.observation.grid_stop = 15.0;
        cfg.observation.grid_step = 0.1;
        cfg.observation.n_samples = 20000;
        cfg.method.drift_kind = MethodConfig::DriftKind::complete;
        cfg.method.drift_order = 4;
        cfg.method.diffusion_kind = MethodConfig::DiffusionKind::full_polynomial;
        cfg.method.diffusion_order = 4;
        cfg.method.kernel_count = 200;
        cfg.method.gamma = constant_vector(2, 1.0);
        cfg.method.lmm = "milne";
        cfg.method.lambda = 1e-8;
        cfg.method.eta = 0.05;
        return cfg;
    }
    if (name == "3d-cubic") return cubic_nd(3);
    if (name == "4d-cubic") return cubic_nd(4);
    if (name == "3d-linear-quality") {
        ExperimentConfig cfg;
        cfg.name = name;
        cfg.model.dimension = 3;
        cfg.model.drift_name = "linear-decay";
        cfg.model.decay_rates = Eigen::Vector3d(-0.5, -0.7, -1.0);
        cfg.model.sigma_kind = ModelSpec::SigmaKind::constant_diagonal;
        cfg.model.sigma_diagonal = constant_vector(3, 1.0);
        cfg.simulation.dt = 5e-3;
        cfg.simulation.t_end = 10.0;
        cfg.simulation.n_paths = 10000;
        cfg.simulation.initial_mean = constant_vector(3, 0.0);
        cfg.simulation.initial_std = constant_vector(3, 1.5);
        cfg.observation.use_grid = true;
        cfg.observation.grid_start = 0.0;
        cfg.observation.grid_stop = 10.0;
        cfg.observation.grid_step = 0.1;
        cfg.observation.n_samples = 10000;
        cfg.method.drift_kind = MethodConfig::DriftKind::complete;
        cfg.method.drift_order = 1;
        cfg.method.diffusion_kind = MethodConfig::DiffusionKind::constant_diagonal;
        cfg.method.kernel_count = 100;
        cfg.method.gamma = constant_vector(3, 1.0);
        cfg.method.lmm = "milne";
        cfg.method.lambda = 1e-8;
        cfg.method.eta = 0.05;
        return cfg;
    }
    if (name == "10d-cubic") {
        ExperimentConfig cfg = cubic_nd(10);
        cfg.name = name;
        cfg.simulation.n_paths = 10000;
        cfg.observation.n_samples = 10000;
        cfg.observation.times.clear();
        cfg.observation.use_grid = true;
        cfg.observation.grid_start = 0.0;
        cfg.observation.grid_stop = 1.0;
        cfg.observation.grid_step = 0.1;
        cfg.method.kernel_count = 1000;
        cfg.method.lmm = "milne";
        return cfg;
    }
    if (name == "10d-coupled") {
        const int d = 10;
        ExperimentConfig cfg;
        cfg.name = name;
        cfg.model.dimension = d;
        cfg.model.drift_name = "cubic-well";
        cfg.model.sigma_kind = ModelSpec::SigmaKind::matrix;
        Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(d, d);
        for (int i = 0; i < d; ++i) {
            sigma(i, i) = 1.0;
            if (i > 0) sigma(i, i - 1) = 1.0;
        }
        cfg.model.sigma_matrix = sigma;
        cfg.simulation.dt = 1e-3;
        cfg.simulation.t_end = 1.0;
        cfg.simulation.n_paths = 20000;
        cfg.simulation.initial_mean = constant_vector(d, 0.0);
        cfg.simulation.initial_std = constant_vector(d, 0.5);
        cfg.observation.use_grid = true;
        cfg.observation.grid_start = 0.0;
        cfg.observation.grid_stop = 1.0;
        cfg.observation.grid_step = 0.1;
        cfg.observation.n_samples = 20000;
        cfg.method.drift_kind = MethodConfig::DriftKind::per_axis;
        cfg.method.drift_order = 3;
        cfg.method.diffusion_kind = MethodConfig::DiffusionKind::banded;
        cfg.method.band_width = 1;
        cfg.method.kernel_count = 500;
        cfg.method.gamma = constant_vector(d, 1.0);
        cfg.method.lmm = "milne";
        cfg.method.lambda = 1e-8;
        cfg.method.eta = 0.05;
        return cfg;
    }
    throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace wcr
