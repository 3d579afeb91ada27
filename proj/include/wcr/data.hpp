#ifndef WCR_DATA_HPP
#define WCR_DATA_HPP

#include <Eigen/Core>
#include <filesystem>
#include <vector>

#include "wcr/rng.hpp"

namespace wcr {

// One observation time: a bag of samples from the state distribution at that
// time. Rows are samples, columns are coordinates.
struct Snapshot {
    double time = 0.0;
    Eigen::MatrixXd samples;

    Eigen::Index count() const { return samples.rows(); }
};

// Ordered snapshots sharing one state dimension. Sample counts may differ per
// snapshot; times are strictly increasing; no pairing of rows across times.
class AggregateData {
public:
    AggregateData(int dimension, std::vector<Snapshot> snapshots);

    int dimension() const { return dimension_; }
    const std::vector<Snapshot>& snapshots() const { return snapshots_; }
    Eigen::Index snapshot_count() const { return static_cast<Eigen::Index>(snapshots_.size()); }
    std::vector<double> times() const;
    Eigen::Index total_samples() const;

private:
    int dimension_;
    std::vector<Snapshot> snapshots_;
};

struct Hypercube {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    // Expands each side by `fraction` of the axis width.
    Hypercube padded(double fraction) const;
};

// CSV with header `t,x1,...,xd`; rows grouped into snapshots by exact time
// equality, snapshots ordered by time.
AggregateData load_aggregate_csv(const std::filesystem::path& path);
void save_aggregate_csv(const AggregateData& data, const std::filesystem::path& path);

// Entry-wise x -> x*(1 + delta*u), u ~ Uniform[-1,1] i.i.d. per scalar.
AggregateData add_multiplicative_noise(const AggregateData& data, double delta, RngStream& rng);

// Tight axis-aligned bounding box over all samples of all snapshots.
Hypercube data_bounds(const AggregateData& data);

}  // namespace wcr

#endif
