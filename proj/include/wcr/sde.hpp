#ifndef WCR_SDE_HPP
#define WCR_SDE_HPP

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <vector>

#include "wcr/data.hpp"

namespace wcr {

// dX = mu(X) dt + sigma(X) dW with d-dimensional state and w-dimensional
// Brownian motion; sigma(x) is d x w.
struct SdeModel {
    int dimension = 1;
    int noise_dimension = 1;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> drift;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> sigma;
};

struct InitialSampler {
    enum class Kind { gaussian, point_set };
    Kind kind = Kind::gaussian;
    Eigen::VectorXd mean;  // gaussian
    Eigen::VectorXd std;   // gaussian, entries > 0
    Eigen::MatrixXd points;  // point_set rows, cycled over paths

    static InitialSampler gaussian(Eigen::VectorXd mean, Eigen::VectorXd std);
    static InitialSampler point_set(Eigen::MatrixXd points);
};

// States recorded at a subset of the integration grid, one matrix
// (n_paths x d) per recorded time.
struct PathEnsemble {
    double dt = 0.0;
    int dimension = 0;
    Eigen::Index n_paths = 0;
    std::vector<double> times;
    std::vector<Eigen::MatrixXd> states;
};

struct SimulateOptions {
    // Empty: record every grid time. Otherwise only these (must lie on grid).
    std::vector<double> record_times;
    int threads = 1;
};

// Euler-Maruyama integration with per-path counter-based noise streams:
// results are independent of thread count and reproducible from the seed.
PathEnsemble euler_maruyama(const SdeModel& model, const InitialSampler& init, double dt,
                            double t_end, Eigen::Index n_paths, std::uint64_t seed,
                            const SimulateOptions& options = {});

// For each requested time, draws n_samples paths uniformly without
// replacement, independently per time (pairing across times is destroyed)
// and in shuffled row order.
AggregateData extract_snapshots(const PathEnsemble& paths, const std::vector<double>& times,
                                Eigen::Index n_samples, std::uint64_t seed);

}  // namespace wcr

#endif
