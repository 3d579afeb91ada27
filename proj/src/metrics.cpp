#include "wcr/metrics.hpp"

#include <cmath>
#include <limits>

#include "wcr/errors.hpp"

namespace wcr {

ErrorReport mre(const Eigen::VectorXd& true_coeffs, const Eigen::VectorXd& learned,
                Eigen::Index drift_size) {
    if (true_coeffs.size() != learned.size())
        throw ConfigError("mre: coefficient vectors have different lengths");
    if (drift_size < 0) drift_size = true_coeffs.size();
    ErrorReport report;
    report.per_coefficient =
        Eigen::VectorXd::Constant(true_coeffs.size(), std::numeric_limits<double>::quiet_NaN());
    for (Eigen::Index i = 0; i < true_coeffs.size(); ++i) {
        if (true_coeffs[i] != 0.0) {
            double rel = std::abs(learned[i] - true_coeffs[i]) / std::abs(true_coeffs[i]);
            report.per_coefficient[i] = rel;
            report.mre = std::max(report.mre, rel);
            if (i < drift_size)
                report.mre_drift = std::max(report.mre_drift, rel);
            else
                report.mre_diffusion = std::max(report.mre_diffusion, rel);
            if (learned[i] == 0.0) report.missed_nonzeros.push_back(static_cast<int>(i));
        } else if (learned[i] != 0.0) {
            report.spurious_nonzeros.push_back(static_cast<int>(i));
        }
    }
    return report;
}

double l2_relative_error(const std::function<double(const Eigen::VectorXd&)>& f_true,
                         const std::function<double(const Eigen::VectorXd&)>& f_learned,
                         const Hypercube& interval, int grid_points) {
    if (grid_points < 2) throw ConfigError("l2_relative_error needs at least 2 grid points");
    const auto d = interval.lower.size();
    // Tensor trapezoid: iterate the grid in mixed radix; weight is the
    // product of 1d trapezoid weights.
    std::vector<int> index(static_cast<std::size_t>(d), 0);
    Eigen::VectorXd x(d);
    Eigen::VectorXd step(d);
    for (Eigen::Index i = 0; i < d; ++i)
        step[i] = (interval.upper[i] - interval.lower[i]) / (grid_points - 1);
    double num = 0.0, den = 0.0;
    for (;;) {
        double w = 1.0;
        for (Eigen::Index i = 0; i < d; ++i) {
            int k = index[static_cast<std::size_t>(i)];
            x[i] = interval.lower[i] + k * step[i];
            w *= (k == 0 || k == grid_points - 1) ? 0.5 : 1.0;
        }
        double ft = f_true(x);
        double diff = ft - f_learned(x);
        num += w * diff * diff;
        den += w * ft * ft;
        Eigen::Index axis = 0;
        while (axis < d) {
            if (++index[static_cast<std::size_t>(axis)] < grid_points) break;
            index[static_cast<std::size_t>(axis)] = 0;
            ++axis;
        }
        if (axis == d) break;
    }
    if (den == 0.0) throw NumericalError("l2_relative_error: reference function is zero");
    return std::sqrt(num / den);
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw ConfigError("log_log_slope needs at least 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= 0 || y[i] <= 0) continue;
        double lx = std::log(x[i]);
        double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) throw NumericalError("log_log_slope: fewer than 2 positive cells");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace wcr
