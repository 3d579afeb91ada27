#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "wcr/experiment.hpp"

namespace py = pybind11;

namespace {

nlohmann::json parse_json(const std::string& text, const char* what) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw wcr::ConfigError(std::string(what) + ": " + e.what());
    }
}

wcr::ExperimentConfig config_from_string(const std::string& text) {
    return wcr::ExperimentConfig::from_json(parse_json(text, "config"));
}

// (time, samples) pairs <-> AggregateData
wcr::AggregateData data_from_pairs(const std::vector<std::pair<double, Eigen::MatrixXd>>& pairs) {
    if (pairs.empty()) throw wcr::DataError("no snapshots given");
    std::vector<wcr::Snapshot> snaps;
    for (const auto& [t, X] : pairs) snaps.push_back({t, X});
    return wcr::AggregateData(static_cast<int>(pairs.front().second.cols()), std::move(snaps));
}

std::vector<std::pair<double, Eigen::MatrixXd>> data_to_pairs(const wcr::AggregateData& data) {
    std::vector<std::pair<double, Eigen::MatrixXd>> out;
    for (const auto& s : data.snapshots()) out.emplace_back(s.time, s.samples);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Weak-form collocation identification of SDE drift and diffusion from "
              "snapshot data";
    m.attr("__version__") = wcr::version_string();

    py::register_exception<wcr::ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<wcr::DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<wcr::NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    m.def("preset_names", &wcr::preset_names, "List built-in experiment presets.");
    m.def(
        "preset_config",
        [](const std::string& name) { return wcr::preset(name).to_json().dump(2); },
        py::arg("name"), "Return a preset experiment config as a JSON string.");

    m.def(
        "simulate",
        [](const std::string& config, std::optional<std::uint64_t> seed) {
            wcr::ExperimentConfig cfg = config_from_string(config);
            if (seed) cfg.seed = *seed;
            return data_to_pairs(wcr::run_simulate(cfg));
        },
        py::arg("config"), py::arg("seed") = std::nullopt,
        "Simulate the configured SDE; returns a list of (time, samples) pairs.");

    m.def(
        "fit",
        [](const std::string& config, const std::vector<std::pair<double, Eigen::MatrixXd>>& data,
           std::optional<std::uint64_t> seed) {
            wcr::ExperimentConfig cfg = config_from_string(config);
            if (seed) cfg.seed = *seed;
            return wcr::run_fit(cfg, data_from_pairs(data)).report.dump();
        },
        py::arg("config"), py::arg("data"), py::arg("seed") = std::nullopt,
        "Run the weak collocation regression; returns the fit report as JSON.");

    m.def(
        "evaluate",
        [](const std::string& config, const std::string& report) {
            wcr::ExperimentConfig cfg = config_from_string(config);
            return wcr::run_eval(cfg, parse_json(report, "report")).dump();
        },
        py::arg("config"), py::arg("report"),
        "Compare a fit report against the configured true model; returns JSON.");

    m.def(
        "load_csv",
        [](const std::string& path) { return data_to_pairs(wcr::load_aggregate_csv(path)); },
        py::arg("path"));
    m.def(
        "save_csv",
        [](const std::vector<std::pair<double, Eigen::MatrixXd>>& data, const std::string& path) {
            wcr::save_aggregate_csv(data_from_pairs(data), path);
        },
        py::arg("data"), py::arg("path"));

    m.def(
        "stridge",
        [](const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double lam, double eta,
           int max_sweeps) {
            wcr::StridgeConfig cfg;
            cfg.lambda = lam;
            cfg.eta = eta;
            cfg.max_sweeps = max_sweeps;
            return wcr::stridge(A, b, cfg);
        },
        py::arg("A"), py::arg("b"), py::arg("lam") = 1e-5, py::arg("eta") = 0.05,
        py::arg("max_sweeps") = 0,
        "Sequential thresholded ridge regression on a dense system.");
    m.def("least_squares",
          py::overload_cast<const Eigen::MatrixXd&, const Eigen::VectorXd&>(&wcr::least_squares),
          py::arg("A"), py::arg("b"));

    m.def(
        "complete_polynomial_basis",
        [](int d, int p) {
            wcr::Basis basis = wcr::complete_polynomial_basis(d, p);
            std::vector<std::string> labels;
            for (const auto& t : basis.terms()) labels.push_back(t.to_string());
            return labels;
        },
        py::arg("dimension"), py::arg("order"),
        "Term labels of the complete polynomial dictionary (graded lexicographic).");
}
