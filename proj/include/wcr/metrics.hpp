#ifndef WCR_METRICS_HPP
#define WCR_METRICS_HPP

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "wcr/data.hpp"

namespace wcr {

// Coefficient-level comparison of a learned model against the truth. MRE
// maximizes over true-nonzero entries only; pattern defects are reported
// separately.
struct ErrorReport {
    double mre = 0.0;
    double mre_drift = 0.0;
    double mre_diffusion = 0.0;
    Eigen::VectorXd per_coefficient;  // relative error where true != 0, NaN elsewhere
    std::vector<int> missed_nonzeros;   // true != 0 but learned == 0
    std::vector<int> spurious_nonzeros; // true == 0 but learned != 0
};

// `drift_size`: leading entries belonging to the drift block (for the
// drift/diffusion split); pass the full length to treat all entries as drift.
ErrorReport mre(const Eigen::VectorXd& true_coeffs, const Eigen::VectorXd& learned,
                Eigen::Index drift_size = -1);

// || f_true - f_learned ||_2 / || f_true ||_2 by tensor-grid trapezoid
// quadrature with grid_points nodes per axis.
double l2_relative_error(const std::function<double(const Eigen::VectorXd&)>& f_true,
                         const std::function<double(const Eigen::VectorXd&)>& f_learned,
                         const Hypercube& interval, int grid_points);

// Least-squares slope of log(y) against log(x); ignores non-positive cells.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace wcr

#endif
