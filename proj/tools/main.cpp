#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "wcr/errors.hpp"
#include "wcr/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

struct CommonArgs {
    std::string config_path;
    std::string preset_name;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
};

wcr::ExperimentConfig load_config(const CommonArgs& args) {
    wcr::ExperimentConfig cfg;
    if (!args.preset_name.empty()) {
        cfg = wcr::preset(args.preset_name);
    } else if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        if (!in) throw wcr::ConfigError("cannot open config '" + args.config_path + "'");
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw wcr::ConfigError("config parse error: " + std::string(e.what()));
        }
        cfg = wcr::ExperimentConfig::from_json(j);
    } else {
        throw wcr::ConfigError("either --config or --preset is required");
    }
    if (args.seed_set) cfg.seed = args.seed;
    if (args.threads > 0) cfg.method.threads = args.threads;
    return cfg;
}

nlohmann::json load_json(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw wcr::DataError(std::string("cannot open ") + what + " '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw wcr::DataError(std::string(what) + " parse error: " + e.what());
    }
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw wcr::DataError("cannot write '" + path + "'");
    out << text;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "experiment config JSON");
    cmd->add_option("--preset", args.preset_name, "built-in preset name");
    cmd->add_option("--seed", args.seed, "override the config seed")
        ->each([&args](const std::string&) { args.seed_set = true; });
    cmd->add_option("--threads", args.threads, "worker threads (default: all cores)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weak-form collocation identification of SDE drift and diffusion "
                 "from snapshot data"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string data_path, out_path, plot_path, dump_prefix, report_path;
    std::string sweep = "N";
    std::vector<double> sweep_values;
    std::vector<std::uint64_t> seeds;

    auto* sim = app.add_subcommand("simulate", "integrate the configured SDE and write snapshot CSV");
    add_common(sim, args);
    sim->add_option("--out", out_path, "output CSV path")->required();

    auto* fit = app.add_subcommand("fit", "run the weak collocation regression on snapshot data");
    add_common(fit, args);
    fit->add_option("--data", data_path, "input snapshot CSV")->required();
    fit->add_option("--out", out_path, "fit report JSON path (default: stdout)");
    fit->add_option("--plot", plot_path, "write drift profile CSV");
    fit->add_option("--dump-system", dump_prefix, "dump stacked system to <prefix>_{matrix,rhs}.csv");

    auto* eval = app.add_subcommand("eval", "compare a fit report against the configured true model");
    add_common(eval, args);
    eval->add_option("--report", report_path, "fit report JSON")->required();
    eval->add_option("--out", out_path, "error report JSON path (default: stdout)");

    auto* bench = app.add_subcommand("bench", "time assembly and regression over size sweeps");
    add_common(bench, args);
    std::vector<double> m_values, n_values, l_values, d_values;
    int repeats = 1;
    bench->add_option("--m-values", m_values, "kernel-count sweep");
    bench->add_option("--n-values", n_values, "samples-per-snapshot sweep");
    bench->add_option("--l-values", l_values, "snapshot-count sweep");
    bench->add_option("--d-values", d_values, "dimension sweep");
    bench->add_option("--repeats", repeats, "repetitions per cell (best kept)");
    bench->add_option("--out", out_path, "bench CSV path (default: stdout)");

    auto* study = app.add_subcommand("study", "average MRE over seeds along an N or dt sweep");
    add_common(study, args);
    study->add_option("--sweep", sweep, "N | dt")->check(CLI::IsMember({"N", "dt"}));
    study->add_option("--values", sweep_values, "sweep values")->required();
    study->add_option("--seeds", seeds, "seeds to average (default: 1 2 3)");
    study->add_option("--out", out_path, "study CSV path (default: stdout)");

    auto* presets = app.add_subcommand("presets", "list presets or write them as JSON files");
    std::string preset_dir;
    presets->add_option("--out-dir", preset_dir, "write one JSON per preset into this directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            wcr::ExperimentConfig cfg = load_config(args);
            wcr::AggregateData data = wcr::run_simulate(cfg);
            wcr::save_aggregate_csv(data, out_path);
            std::cerr << "wrote " << data.total_samples() << " samples in "
                      << data.snapshot_count() << " snapshots to " << out_path << "\n";
        } else if (fit->parsed()) {
            wcr::ExperimentConfig cfg = load_config(args);
            wcr::AggregateData data = wcr::load_aggregate_csv(data_path);
            wcr::FitOptions options;
            if (!dump_prefix.empty()) options.dump_system = dump_prefix;
            wcr::FitResult result = wcr::run_fit(cfg, data, options);
            write_text(out_path, result.report.dump(2) + "\n");
            if (!plot_path.empty()) wcr::write_plot_csv(cfg, result.report, plot_path);
            std::cerr << "fit: " << result.rows << " rows, " << result.zeta.size()
                      << " columns, residual " << result.residual_norm << ", "
                      << result.total_seconds << "s\n";
        } else if (eval->parsed()) {
            wcr::ExperimentConfig cfg = load_config(args);
            nlohmann::json report = load_json(report_path, "report");
            write_text(out_path, wcr::run_eval(cfg, report).dump(2) + "\n");
        } else if (bench->parsed()) {
            wcr::ExperimentConfig cfg = load_config(args);
            wcr::BenchConfig bc;
            bc.m_values = m_values;
            bc.n_values = n_values;
            bc.l_values = l_values;
            bc.d_values = d_values;
            bc.repeats = repeats;
            write_text(out_path, wcr::bench_csv(wcr::run_bench(cfg, bc)));
        } else if (study->parsed()) {
            wcr::ExperimentConfig cfg = load_config(args);
            if (seeds.empty()) seeds = {1, 2, 3};
            wcr::StudyResult result = wcr::convergence_study(cfg, sweep, sweep_values, seeds);
            write_text(out_path, wcr::study_csv(result));
            std::cerr << "log-log slope: " << result.slope << "\n";
        } else if (presets->parsed()) {
            if (preset_dir.empty()) {
                for (const auto& name : wcr::preset_names()) std::cout << name << "\n";
            } else {
                std::filesystem::create_directories(preset_dir);
                for (const auto& name : wcr::preset_names()) {
                    std::ofstream out(std::filesystem::path(preset_dir) / (name + ".json"),
                                      std::ios::binary);
                    out << wcr::preset(name).to_json().dump(2) << "\n";
                }
                std::cerr << "wrote " << wcr::preset_names().size() << " preset configs\n";
            }
        }
    } catch (const wcr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const wcr::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const wcr::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
