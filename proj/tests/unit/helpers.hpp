#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <initializer_list>
#include <vector>

#include "aalenfic/dataset.hpp"

namespace testutil {

inline aalenfic::Dataset make_dataset(std::vector<double> times, std::vector<int> status,
                                      std::vector<std::vector<double>> covariates) {
  std::vector<aalenfic::SurvivalRecord> records;
  for (size_t i = 0; i < times.size(); ++i) {
    aalenfic::SurvivalRecord rec;
    rec.time = times[i];
    rec.event = status[i] == 1;
    rec.covariates = Eigen::Map<Eigen::VectorXd>(covariates[i].data(), covariates[i].size());
    records.push_back(std::move(rec));
  }
  return aalenfic::Dataset(std::move(records));
}

inline Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd out(values.size());
  int k = 0;
  for (double v : values) out[k++] = v;
  return out;
}

// |a - b| <= tol * max(1, |a|, |b|): absolute near zero, relative otherwise
inline bool close(double a, double b, double tol = 1e-12) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// the four-record reference dataset used throughout (matches fixture 0 of
// the brute-force script)
inline aalenfic::Dataset four_record_fixture() {
  return make_dataset({1, 2, 3, 4}, {1, 1, 1, 0}, {{1, 1}, {1, 3}, {1, 2}, {1, 1}});
}

inline aalenfic::Dataset nelson_aalen_fixture() {
  return make_dataset({1, 2, 3}, {1, 1, 1}, {{1}, {1}, {1}});
}

}  // namespace testutil
