#include "aalenfic/piecewise.hpp"

#include <algorithm>
#include <cmath>

#include "aalenfic/errors.hpp"

namespace aalenfic {

PiecewiseConstant::PiecewiseConstant() : knots_{0.0}, values_{0.0} {}

PiecewiseConstant PiecewiseConstant::constant(double value) {
  return PiecewiseConstant({0.0}, {value});
}

PiecewiseConstant::PiecewiseConstant(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
  if (knots_.empty() || knots_.size() != values_.size())
    throw ValidationError("piecewise function needs matching knot and value lists");
  if (knots_.front() != 0.0)
    throw ValidationError("piecewise function must start at knot 0");
  for (size_t k = 0; k + 1 < knots_.size(); ++k)
    if (!(knots_[k] < knots_[k + 1]))
      throw ValidationError("piecewise knots must be strictly increasing");
  for (double v : values_)
    if (!std::isfinite(v)) throw ValidationError("piecewise values must be finite");
}

double PiecewiseConstant::operator()(double u) const {
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), u);
  const size_t k = static_cast<size_t>(it - knots_.begin());
  return values_[k == 0 ? 0 : k - 1];
}

double PiecewiseConstant::integral(double t) const {
  if (t <= 0.0) return 0.0;
  double sum = 0.0;
  for (size_t k = 0; k < knots_.size(); ++k) {
    const double lo = knots_[k];
    if (lo >= t) break;
    const double hi = k + 1 < knots_.size() ? std::min(knots_[k + 1], t) : t;
    sum += values_[k] * (hi - lo);
  }
  return sum;
}

bool PiecewiseConstant::is_constant() const {
  return std::all_of(values_.begin(), values_.end(),
                     [&](double v) { return v == values_.front(); });
}

double PiecewiseConstant::min_value() const {
  return *std::min_element(values_.begin(), values_.end());
}

}  // namespace aalenfic
