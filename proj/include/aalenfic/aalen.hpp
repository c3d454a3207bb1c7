#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "aalenfic/dataset.hpp"
#include "aalenfic/index_set.hpp"
#include "aalenfic/linalg.hpp"

namespace aalenfic {

/// Step-function estimate of the cumulative regressor functions: one
/// increment vector per grid time, zero at t = 0, right-continuous.
/// `index_set` is the full set for the full-model fit.
struct StepEstimate {
  EventGrid grid;
  std::vector<Eigen::VectorXd> increments;  // dimension |index_set| each
  IndexSet index_set;

  int dimension() const { return index_set.size(); }
  /// Sum of increments at grid times <= t.
  Eigen::VectorXd cumulative(double t) const;
};

/// G_n(u) = n^{-1} sum_i Y_i(u) x_i x_i^t.
Eigen::MatrixXd gn_at(const Dataset& data, double u);

StepEstimate fit_full(const Dataset& data, double tau,
                      double rcond_threshold = kDefaultRcondThreshold);

/// Aalen fit on the covariates in `index_set` only; identical to fit_full
/// applied to the column-projected dataset.
StepEstimate fit_submodel(const Dataset& data, const IndexSet& index_set, double tau,
                          double rcond_threshold = kDefaultRcondThreshold);

/// x^t A-hat(t), using the x components matching the estimate's index set.
/// `x` always has the dataset's full dimension r.
double cumulative_hazard(const StepEstimate& estimate, const Eigen::VectorXd& x, double t);

struct SurvivalValue {
  double value = 1.0;
  /// True when some product factor 1 - x^t dA-hat(u) fell outside (0, 1];
  /// the value is still returned as computed.
  bool flagged = false;
};

/// Product-limit estimate prod_{u <= t} {1 - x^t dA-hat(u)}.
SurvivalValue survival_estimate(const StepEstimate& estimate, const Eigen::VectorXd& x,
                                double t);

/// Largest grid time t such that the selected block of G_n passes the
/// condition test at every grid time <= t; 0 when already the first grid
/// time fails (or the grid is empty).
double invertibility_horizon(const Dataset& data, const IndexSet& index_set,
                             double rcond_threshold = kDefaultRcondThreshold);

namespace detail {

/// One descending sweep over the event grid. Per grid time u (ascending in
/// the result): G_n(u), n^{-1} sum_i x_i dN_i(u), and, where G_n passes the
/// condition test, its inverse and the full-model increment dA-hat(u).
struct GridPass {
  std::vector<double> times;
  std::vector<Eigen::MatrixXd> gn;
  std::vector<Eigen::MatrixXd> gn_inv;   // valid where ok
  std::vector<Eigen::VectorXd> dn;
  std::vector<Eigen::VectorXd> da;       // valid where ok
  std::vector<char> ok;
  std::optional<int> first_bad;

  int size() const { return static_cast<int>(times.size()); }
};

GridPass grid_pass(const Dataset& data, double tau, double rcond_threshold);

}  // namespace detail

}  // namespace aalenfic
