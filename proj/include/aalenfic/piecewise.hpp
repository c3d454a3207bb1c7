#pragma once

#include <vector>

namespace aalenfic {

/// Right-continuous piecewise-constant function on [0, inf): values[k] on
/// [knots[k], knots[k+1]) and values.back() from the last knot on.
/// knots[0] must be 0 and the sequence strictly increasing.
class PiecewiseConstant {
public:
  PiecewiseConstant();  // constant 0
  static PiecewiseConstant constant(double value);
  PiecewiseConstant(std::vector<double> knots, std::vector<double> values);

  double operator()(double u) const;
  /// Integral over [0, t].
  double integral(double t) const;

  bool is_constant() const;
  double min_value() const;
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& values() const { return values_; }

private:
  std::vector<double> knots_;
  std::vector<double> values_;
};

}  // namespace aalenfic
