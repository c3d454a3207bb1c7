#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "aalenfic/index_set.hpp"

namespace aalenfic {

/// One censored follow-up: (T_i, delta_i, x_i).
struct SurvivalRecord {
  double time = 0.0;
  bool event = false;
  Eigen::VectorXd covariates;
};

/// Distinct observed event times in (0, tau], strictly increasing.
/// Every estimator step function jumps only at these times.
struct EventGrid {
  std::vector<double> times;

  bool empty() const { return times.empty(); }
  int size() const { return static_cast<int>(times.size()); }
};

/// Immutable collection of survival records with a fixed covariate
/// dimension. Construction validates; afterwards the object is safe for
/// concurrent read-only use.
class Dataset {
public:
  explicit Dataset(std::vector<SurvivalRecord> records);

  /// Parses `time,status,x1,...,xr` CSV; lines starting with '#' are
  /// skipped. Parse errors name the offending data row (1-based).
  static Dataset from_csv(std::istream& in);
  static Dataset from_csv_string(const std::string& text);
  static Dataset from_csv_file(const std::string& path);

  int n() const { return static_cast<int>(records_.size()); }
  int r() const { return r_; }
  const std::vector<SurvivalRecord>& records() const { return records_; }

  /// Processing order sorted by (time, event, covariates); makes every
  /// accumulated sum independent of the input row order, bit for bit.
  const std::vector<int>& canonical_order() const { return canonical_order_; }

  /// Largest observed event time, 0 if all records are censored. Used as
  /// the default tau.
  double max_event_time() const { return max_event_time_; }

  /// Covariate-projected copy (columns in `index_set`), same times.
  Dataset project(const IndexSet& index_set) const;

  std::string to_csv() const;

private:
  std::vector<SurvivalRecord> records_;
  std::vector<int> canonical_order_;
  int r_ = 0;
  double max_event_time_ = 0.0;
};

EventGrid event_grid(const Dataset& data, double tau);

/// Component i is true iff T_i >= u.
std::vector<bool> at_risk(const Dataset& data, double u);

}  // namespace aalenfic
