#include "wcr/sde.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <thread>

#include "wcr/errors.hpp"

namespace wcr {

namespace {
constexpr double kBlowUpLimit = 1e12;

// Maps a requested time onto the integration grid, or -1 if off-grid.
long long grid_index(double t, double dt) {
    double q = t / dt;
    double r = std::round(q);
    if (std::abs(q - r) > 1e-9 * std::max(1.0, std::abs(q))) return -1;
    return static_cast<long long>(r);
}

void run_paths(const SdeModel& model, const InitialSampler& init, double dt,
               long long n_steps, const std::vector<long long>& record_steps,
               Eigen::Index path_begin, Eigen::Index path_end, std::uint64_t seed,
               std::vector<Eigen::MatrixXd>& states) {
    const int d = model.dimension;
    const int w = model.noise_dimension;
    Eigen::VectorXd x(d), noise(w);
    const double sqrt_dt = std::sqrt(dt);
    for (Eigen::Index p = path_begin; p < path_end; ++p) {
        RngStream init_rng(seed, RngDomain::initial_condition, static_cast<std::uint64_t>(p));
        if (init.kind == InitialSampler::Kind::gaussian) {
            for (int i = 0; i < d; ++i) x[i] = init.mean[i] + init.std[i] * init_rng.normal();
        } else {
            x = init.points.row(p % init.points.rows()).transpose();
        }
        RngStream step_rng(seed, RngDomain::simulation, static_cast<std::uint64_t>(p));
        std::size_t rec = 0;
        auto record = [&](long long step) {
            while (rec < record_steps.size() && record_steps[rec] == step) {
                states[rec].row(p) = x.transpose();
                ++rec;
            }
        };
        record(0);
        for (long long i = 0; i < n_steps; ++i) {
            for (int k = 0; k < w; ++k) noise[k] = step_rng.normal();
            x += model.drift(x) * dt + model.sigma(x) * noise * sqrt_dt;
            if (x.cwiseAbs().maxCoeff() > kBlowUpLimit || !x.allFinite())
                throw NumericalError("simulation blow-up at step " + std::to_string(i + 1) +
                                     " (path " + std::to_string(p) + ")");
            record(i + 1);
        }
    }
}

}  // namespace

InitialSampler InitialSampler::gaussian(Eigen::VectorXd mean, Eigen::VectorXd std) {
    if ((std.array() <= 0).any()) throw ConfigError("initial sampler std entries must be > 0");
    InitialSampler s;
    s.kind = Kind::gaussian;
    s.mean = std::move(mean);
    s.std = std::move(std);
    return s;
}

InitialSampler InitialSampler::point_set(Eigen::MatrixXd points) {
    if (points.rows() < 1) throw ConfigError("initial point set must be non-empty");
    InitialSampler s;
    s.kind = Kind::point_set;
    s.points = std::move(points);
    return s;
}

PathEnsemble euler_maruyama(const SdeModel& model, const InitialSampler& init, double dt,
                            double t_end, Eigen::Index n_paths, std::uint64_t seed,
                            const SimulateOptions& options) {
    if (dt <= 0) throw ConfigError("dt must be positive");
    if (t_end < dt) throw ConfigError("t_end must be at least dt");
    if (n_paths < 1) throw ConfigError("n_paths must be >= 1");
    const long long n_steps = grid_index(t_end, dt);
    if (n_steps < 0) throw ConfigError("t_end must be a multiple of dt");

    std::vector<long long> record_steps;
    std::vector<double> record_times;
    if (options.record_times.empty()) {
        record_steps.resize(static_cast<std::size_t>(n_steps) + 1);
        std::iota(record_steps.begin(), record_steps.end(), 0LL);
    } else {
        for (double t : options.record_times) {
            long long i = grid_index(t, dt);
            if (i < 0 || i > n_steps)
                throw ConfigError("record time " + std::to_string(t) +
                                  " not on simulation grid");
            record_steps.push_back(i);
        }
        std::sort(record_steps.begin(), record_steps.end());
        record_steps.erase(std::unique(record_steps.begin(), record_steps.end()),
                           record_steps.end());
    }
    for (long long i : record_steps) record_times.push_back(static_cast<double>(i) * dt);

    PathEnsemble out;
    out.dt = dt;
    out.dimension = model.dimension;
    out.n_paths = n_paths;
    out.times = record_times;
    out.states.assign(record_steps.size(), Eigen::MatrixXd(n_paths, model.dimension));

    int threads = std::max(1, options.threads);
    if (threads == 1 || n_paths < 256) {
        run_paths(model, init, dt, n_steps, record_steps, 0, n_paths, seed, out.states);
    } else {
        std::vector<std::thread> pool;
        std::exception_ptr error;
        std::mutex error_mutex;
        Eigen::Index chunk = (n_paths + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            Eigen::Index begin = t * chunk;
            Eigen::Index end = std::min(n_paths, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back([&, begin, end] {
                try {
                    run_paths(model, init, dt, n_steps, record_steps, begin, end, seed,
                              out.states);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        if (error) std::rethrow_exception(error);
    }
    return out;
}

AggregateData extract_snapshots(const PathEnsemble& paths, const std::vector<double>& times,
                                Eigen::Index n_samples, std::uint64_t seed) {
    if (n_samples < 1) throw ConfigError("n_samples must be >= 1");
    if (n_samples > paths.n_paths)
        throw ConfigError("n_samples (" + std::to_string(n_samples) + ") exceeds n_paths (" +
                          std::to_string(paths.n_paths) + ")");
    std::vector<Snapshot> snapshots;
    snapshots.reserve(times.size());
    for (std::size_t j = 0; j < times.size(); ++j) {
        double t = times[j];
        auto it = std::find_if(paths.times.begin(), paths.times.end(), [&](double rec) {
            return std::abs(rec - t) <= 1e-12 * paths.dt + 4 * std::numeric_limits<double>::epsilon() * std::abs(t);
        });
        if (it == paths.times.end())
            throw ConfigError("time " + std::to_string(t) + " not on simulation grid");
        const Eigen::MatrixXd& X = paths.states[static_cast<std::size_t>(it - paths.times.begin())];

        RngStream rng(seed, RngDomain::snapshot_extraction, j);
        std::vector<Eigen::Index> idx(static_cast<std::size_t>(paths.n_paths));
        std::iota(idx.begin(), idx.end(), Eigen::Index{0});
        // Partial Fisher-Yates: first n_samples entries are a uniform
        // without-replacement draw, already in shuffled order.
        for (Eigen::Index i = 0; i < n_samples; ++i) {
            auto pick = i + static_cast<Eigen::Index>(rng.uniform_below(
                                static_cast<std::uint64_t>(paths.n_paths - i)));
            std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick)]);
        }
        Snapshot s;
        s.time = t;
        s.samples.resize(n_samples, paths.dimension);
        for (Eigen::Index i = 0; i < n_samples; ++i)
            s.samples.row(i) = X.row(idx[static_cast<std::size_t>(i)]);
        snapshots.push_back(std::move(s));
    }
    return AggregateData(paths.dimension, std::move(snapshots));
}

}  // namespace wcr
