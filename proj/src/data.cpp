#include "wcr/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "wcr/errors.hpp"

namespace wcr {

AggregateData::AggregateData(int dimension, std::vector<Snapshot> snapshots)
    : dimension_(dimension), snapshots_(std::move(snapshots)) {
    if (dimension_ < 1) throw DataError("dimension must be >= 1");
    if (snapshots_.size() < 2) throw DataError("aggregate data needs at least 2 snapshots");
    for (std::size_t j = 0; j < snapshots_.size(); ++j) {
        const Snapshot& s = snapshots_[j];
        if (s.count() < 1) throw DataError("snapshot " + std::to_string(j) + " is empty");
        if (s.samples.cols() != dimension_)
            throw DataError("snapshot " + std::to_string(j) + " has dimension " +
                            std::to_string(s.samples.cols()) + ", expected " +
                            std::to_string(dimension_));
        if (!s.samples.allFinite())
            throw DataError("snapshot " + std::to_string(j) + " contains non-finite samples");
        if (j > 0 && !(snapshots_[j - 1].time < s.time))
            throw DataError("snapshot times must be strictly increasing");
    }
}

std::vector<double> AggregateData::times() const {
    std::vector<double> out;
    out.reserve(snapshots_.size());
    for (const auto& s : snapshots_) out.push_back(s.time);
    return out;
}

Eigen::Index AggregateData::total_samples() const {
    Eigen::Index n = 0;
    for (const auto& s : snapshots_) n += s.count();
    return n;
}

Hypercube Hypercube::padded(double fraction) const {
    Hypercube out = *this;
    Eigen::VectorXd width = upper - lower;
    out.lower -= fraction * width;
    out.upper += fraction * width;
    return out;
}

namespace {

double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw DataError("non-numeric cell at row " + std::to_string(row) + ", column " +
                        std::to_string(col) + ": '" + cell + "'");
    return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

AggregateData load_aggregate_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty file: '" + path.string() + "'");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "t")
        throw DataError("malformed header: expected 't,x1,...,xd', got '" + line + "'");
    for (std::size_t i = 1; i < header.size(); ++i) {
        if (header[i] != "x" + std::to_string(i))
            throw DataError("malformed header: column " + std::to_string(i + 1) +
                            " should be 'x" + std::to_string(i) + "', got '" + header[i] + "'");
    }
    const int d = static_cast<int>(header.size()) - 1;

    // Snapshots keyed by exact time value; insertion order preserved separately
    // so ordering is by time, not first occurrence.
    std::map<double, std::vector<Eigen::VectorXd>> groups;
    std::size_t row_index = 1;
    while (std::getline(in, line)) {
        ++row_index;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (static_cast<int>(cells.size()) != d + 1)
            throw DataError("row " + std::to_string(row_index) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(d + 1));
        double t = parse_cell(cells[0], row_index, 1);
        Eigen::VectorXd x(d);
        for (int i = 0; i < d; ++i) x[i] = parse_cell(cells[i + 1], row_index, i + 2);
        groups[t].push_back(std::move(x));
    }
    if (groups.empty()) throw DataError("empty data: no rows in '" + path.string() + "'");
    if (groups.size() < 2)
        throw DataError("single distinct time in '" + path.string() +
                        "': at least 2 snapshots are required");

    std::vector<Snapshot> snapshots;
    snapshots.reserve(groups.size());
    for (auto& [t, rows] : groups) {
        Snapshot s;
        s.time = t;
        s.samples.resize(static_cast<Eigen::Index>(rows.size()), d);
        for (std::size_t i = 0; i < rows.size(); ++i) s.samples.row(static_cast<Eigen::Index>(i)) = rows[i];
        snapshots.push_back(std::move(s));
    }
    return AggregateData(d, std::move(snapshots));
}

void save_aggregate_csv(const AggregateData& data, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << "t";
    for (int i = 1; i <= data.dimension(); ++i) out << ",x" << i;
    out << "\n";
    char buf[64];
    auto write_value = [&](double v) {
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
        out.write(buf, ptr - buf);
    };
    for (const auto& s : data.snapshots()) {
        for (Eigen::Index r = 0; r < s.count(); ++r) {
            write_value(s.time);
            for (int c = 0; c < data.dimension(); ++c) {
                out.put(',');
                write_value(s.samples(r, c));
            }
            out.put('\n');
        }
    }
    if (!out) throw DataError("write failed for '" + path.string() + "'");
}

AggregateData add_multiplicative_noise(const AggregateData& data, double delta, RngStream& rng) {
    if (delta < 0) throw DataError("noise level must be non-negative");
    std::vector<Snapshot> snapshots = data.snapshots();
    for (auto& s : snapshots) {
        for (Eigen::Index r = 0; r < s.samples.rows(); ++r)
            for (Eigen::Index c = 0; c < s.samples.cols(); ++c) {
                double u = rng.uniform(-1.0, 1.0);
                s.samples(r, c) *= 1.0 + delta * u;
            }
    }
    return AggregateData(data.dimension(), std::move(snapshots));
}

Hypercube data_bounds(const AggregateData& data) {
    const int d = data.dimension();
    Hypercube box;
    box.lower = Eigen::VectorXd::Constant(d, std::numeric_limits<double>::infinity());
    box.upper = Eigen::VectorXd::Constant(d, -std::numeric_limits<double>::infinity());
    for (const auto& s : data.snapshots()) {
        box.lower = box.lower.cwiseMin(s.samples.colwise().minCoeff().transpose());
        box.upper = box.upper.cwiseMax(s.samples.colwise().maxCoeff().transpose());
    }
    return box;
}

}  // namespace wcr
