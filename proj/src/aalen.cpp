#include "aalenfic/aalen.hpp"

#include <algorithm>
#include <cmath>

#include "aalenfic/errors.hpp"

namespace aalenfic {

namespace detail {

// Single sweep in decreasing time: individuals enter the accumulated
// sum sum Y_i(u) x_i x_i^t as u passes below their follow-up time, in
// reverse canonical order, so results do not depend on the input row order.
GridPass grid_pass(const Dataset& data, double tau, double rcond_threshold) {
  const int n = data.n();
  const int r = data.r();
  const EventGrid grid = event_grid(data, tau);
  const int m = grid.size();

  GridPass pass;
  pass.times = grid.times;
  pass.gn.assign(m, Eigen::MatrixXd());
  pass.gn_inv.assign(m, Eigen::MatrixXd());
  pass.dn.assign(m, Eigen::VectorXd());
  pass.da.assign(m, Eigen::VectorXd());
  pass.ok.assign(m, 0);

  // events grouped per grid time, ascending canonical order within ties
  std::vector<std::vector<int>> events_at(m);
  for (int idx : data.canonical_order()) {
    const SurvivalRecord& rec = data.records()[idx];
    if (!rec.event || rec.time > tau) continue;
    const auto it = std::lower_bound(pass.times.begin(), pass.times.end(), rec.time);
    events_at[static_cast<int>(it - pass.times.begin())].push_back(idx);
  }

  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(r, r);
  const std::vector<int>& order = data.canonical_order();
  int next = n - 1;  // reverse canonical position of the next individual to add
  for (int k = m - 1; k >= 0; --k) {
    const double u = pass.times[k];
    while (next >= 0 && data.records()[order[next]].time >= u) {
      const Eigen::VectorXd& x = data.records()[order[next]].covariates;
      acc.noalias() += x * x.transpose();
      --next;
    }
    pass.gn[k] = acc / n;
    Eigen::VectorXd dn = Eigen::VectorXd::Zero(r);
    for (int idx : events_at[k]) dn += data.records()[idx].covariates;
    pass.dn[k] = dn / n;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pass.gn[k]);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (hi > 0.0 && lo > 0.0 && lo / hi >= rcond_threshold) {
      pass.ok[k] = 1;
      pass.gn_inv[k] = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
                       es.eigenvectors().transpose();
      pass.da[k] = pass.gn_inv[k] * pass.dn[k];
    }
  }
  for (int k = 0; k < m; ++k) {
    if (!pass.ok[k]) {
      pass.first_bad = k;
      break;
    }
  }
  return pass;
}

}  // namespace detail

Eigen::VectorXd StepEstimate::cumulative(double t) const {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(dimension());
  for (int k = 0; k < grid.size() && grid.times[k] <= t; ++k) sum += increments[k];
  return sum;
}

Eigen::MatrixXd gn_at(const Dataset& data, double u) {
  if (!(u >= 0.0)) throw ValidationError("u must be nonnegative");
  const int r = data.r();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(r, r);
  for (int idx : data.canonical_order()) {
    const SurvivalRecord& rec = data.records()[idx];
    if (rec.time >= u) {
      const Eigen::VectorXd& x = rec.covariates;
      acc.noalias() += x * x.transpose();
    }
  }
  return acc / data.n();
}

StepEstimate fit_full(const Dataset& data, double tau, double rcond_threshold) {
  if (tau <= 0.0)  // nothing can jump; covers the all-censored default tau = 0
    return StepEstimate{EventGrid{}, {}, IndexSet::full(data.r())};
  detail::GridPass pass = detail::grid_pass(data, tau, rcond_threshold);
  if (pass.first_bad) {
    throw SingularityError(
        "G_n failed the condition test at time " + std::to_string(pass.times[*pass.first_bad]),
        pass.times[*pass.first_bad]);
  }
  return StepEstimate{EventGrid{std::move(pass.times)}, std::move(pass.da),
                      IndexSet::full(data.r())};
}

StepEstimate fit_submodel(const Dataset& data, const IndexSet& index_set, double tau,
                          double rcond_threshold) {
  if (index_set.dimension() != data.r())
    throw ValidationError("index set dimension does not match dataset");
  StepEstimate est = fit_full(data.project(index_set), tau, rcond_threshold);
  est.index_set = index_set;
  return est;
}

namespace {

// x restricted to the estimate's index set; validates the dimension.
Eigen::VectorXd focal_projection(const StepEstimate& estimate, const Eigen::VectorXd& x) {
  if (x.size() != estimate.index_set.dimension())
    throw ValidationError("focal covariate vector has dimension " + std::to_string(x.size()) +
                          ", expected " + std::to_string(estimate.index_set.dimension()));
  return subvector(x, estimate.index_set.indices());
}

}  // namespace

double cumulative_hazard(const StepEstimate& estimate, const Eigen::VectorXd& x, double t) {
  const Eigen::VectorXd xi = focal_projection(estimate, x);
  double sum = 0.0;
  for (int k = 0; k < estimate.grid.size() && estimate.grid.times[k] <= t; ++k)
    sum += xi.dot(estimate.increments[k]);
  return sum;
}

SurvivalValue survival_estimate(const StepEstimate& estimate, const Eigen::VectorXd& x,
                                double t) {
  const Eigen::VectorXd xi = focal_projection(estimate, x);
  SurvivalValue out;
  for (int k = 0; k < estimate.grid.size() && estimate.grid.times[k] <= t; ++k) {
    const double factor = 1.0 - xi.dot(estimate.increments[k]);
    if (!(factor > 0.0 && factor <= 1.0)) out.flagged = true;
    out.value *= factor;
  }
  return out;
}

double invertibility_horizon(const Dataset& data, const IndexSet& index_set,
                             double rcond_threshold) {
  if (index_set.dimension() != data.r())
    throw ValidationError("index set dimension does not match dataset");
  const Dataset* d = &data;
  std::optional<Dataset> projected;
  if (!index_set.is_full()) {
    projected.emplace(data.project(index_set));
    d = &*projected;
  }
  const double tau = d->max_event_time();
  if (tau <= 0.0) return 0.0;
  detail::GridPass pass = detail::grid_pass(*d, tau, rcond_threshold);
  if (!pass.first_bad) return pass.times.empty() ? 0.0 : pass.times.back();
  return *pass.first_bad == 0 ? 0.0 : pass.times[*pass.first_bad - 1];
}

}  // namespace aalenfic
