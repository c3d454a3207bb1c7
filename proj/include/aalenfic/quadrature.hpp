#pragma once

#include <functional>
#include <vector>

namespace aalenfic {

/// Adaptive Gauss-Kronrod integration of f over [a, b], split at the given
/// interior breakpoints (knots of piecewise definitions, censoring cutoffs).
/// Throws QuadratureError when the accumulated error estimate exceeds
/// abs_tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10, const std::vector<double>& breakpoints = {});

}  // namespace aalenfic
