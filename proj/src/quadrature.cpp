#include "aalenfic/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>

#include "aalenfic/errors.hpp"

namespace aalenfic {

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 const std::vector<double>& breakpoints) {
  if (!(b >= a)) throw ValidationError("integration bounds must satisfy a <= b");
  if (a == b) return 0.0;

  std::vector<double> cuts{a, b};
  for (double c : breakpoints)
    if (c > a && c < b) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  using gk = boost::math::quadrature::gauss_kronrod<double, 15>;
  double total = 0.0;
  double err_total = 0.0;
  for (size_t k = 0; k + 1 < cuts.size(); ++k) {
    double err = 0.0;
    total += gk::integrate(f, cuts[k], cuts[k + 1], 15, 1e-14, &err);
    err_total += err;
  }
  if (!(err_total <= abs_tol) || !std::isfinite(total))
    throw QuadratureError("quadrature did not reach the requested tolerance (achieved " +
                              std::to_string(err_total) + ")",
                          err_total);
  return total;
}

}  // namespace aalenfic
