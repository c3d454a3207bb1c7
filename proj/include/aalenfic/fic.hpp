#pragma once

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "aalenfic/aalen.hpp"
#include "aalenfic/dataset.hpp"
#include "aalenfic/index_set.hpp"

namespace aalenfic {

/// Grid-indexed symmetric matrix increments (d J-hat or d Q-hat).
struct MatrixIncrements {
  EventGrid grid;
  std::vector<Eigen::MatrixXd> increments;
};

/// b_{I,n}(u, x) = G_{n,10}(u) G_{n,00}(u)^{-1} x_I - x_{II}; dimension
/// q = r - |I| (empty for the full model).
Eigen::VectorXd bias_function(const Dataset& data, const IndexSet& index_set,
                              const Eigen::VectorXd& x, double u,
                              double rcond_threshold = kDefaultRcondThreshold);

/// d J-hat_n(u) = n^{-1} sum_i Y_i(u) x_i x_i^t (x_i^t dA-hat(u)) over the
/// grid of the supplied full-model estimate.
MatrixIncrements jhat_increments(const Dataset& data, const StepEstimate& ahat);

/// d Q-hat_n(u): the (II, II) block of G_n^{-1} dJ-hat_n G_n^{-1}.
MatrixIncrements qhat_increments(const Dataset& data, const StepEstimate& ahat,
                                 const IndexSet& index_set,
                                 double rcond_threshold = kDefaultRcondThreshold);

double sqb_hat(const Dataset& data, const IndexSet& index_set, const Eigen::VectorXd& x,
               double t, double rcond_threshold = kDefaultRcondThreshold);

double var_hat(const Dataset& data, const IndexSet& index_set, const Eigen::VectorXd& x,
               double t, double rcond_threshold = kDefaultRcondThreshold);

struct FicTerms {
  double sqb = 0.0;  // before truncation; may be negative
  double var = 0.0;
  double score = 0.0;  // max(sqb, 0) + var
};

FicTerms fic_score(const Dataset& data, const IndexSet& index_set, const Eigen::VectorXd& x,
                   double t, double rcond_threshold = kDefaultRcondThreshold);

/// All grid sums restricted to (t1, t2]; fic_interval(d, I, x, 0, t) equals
/// fic_score(d, I, x, t).
FicTerms fic_interval(const Dataset& data, const IndexSet& index_set,
                      const Eigen::VectorXd& x, double t1, double t2,
                      double rcond_threshold = kDefaultRcondThreshold);

struct WeightPoint {
  Eigen::VectorXd x;
  double t = 0.0;
  double w = 0.0;
};

/// Weight measure on (x, t): either an explicit point list (weights are
/// normalized at construction) or the empirical covariate distribution at a
/// fixed time.
class WeightSpec {
public:
  static WeightSpec from_points(std::vector<WeightPoint> points);
  static WeightSpec empirical(double t);

  bool is_empirical() const { return is_empirical_; }
  double empirical_time() const { return empirical_time_; }
  const std::vector<WeightPoint>& points() const { return points_; }

private:
  WeightSpec() = default;
  std::vector<WeightPoint> points_;
  bool is_empirical_ = false;
  double empirical_time_ = 0.0;
};

/// Weighted criterion; the nonnegativity truncation is applied to the
/// weighted squared-bias aggregate, not per point. For the empirical
/// variant the variance term uses the covariance trace identity.
FicTerms wfic_score(const Dataset& data, const IndexSet& index_set, const WeightSpec& w,
                    double rcond_threshold = kDefaultRcondThreshold);

struct FocalPoint {
  Eigen::VectorXd x;
  double t = 0.0;
};
struct FocalInterval {
  Eigen::VectorXd x;
  double t1 = 0.0;
  double t2 = 0.0;
};
using Focal = std::variant<FocalPoint, FocalInterval, WeightSpec>;

struct CandidateScore {
  IndexSet index_set;
  double sqb = 0.0;
  double var = 0.0;
  double score = 0.0;
  bool feasible = true;
  std::string note;  // infeasibility reason, or "negative variance" flag
};

/// Scores sorted ascending (ties: smaller |I|, then lexicographic);
/// infeasible candidates kept at the tail with a reason. `winner` is the
/// first feasible candidate; empty only in gliding-window reports where a
/// whole window was infeasible.
struct FicReport {
  Focal focal;
  std::vector<CandidateScore> candidates;
  std::optional<IndexSet> winner;
};

/// All nonempty subsets of {1..r} containing the protected indices.
/// Rejected for r > 12 (pass an explicit list instead).
std::vector<IndexSet> enumerate_candidates(int r, const std::vector<int>& protected_one_based = {});

FicReport rank_models(const Dataset& data, const std::vector<IndexSet>& candidates,
                      const Focal& focal, double rcond_threshold = kDefaultRcondThreshold);

/// One report per window [max(0, c - delta), c + delta].
std::vector<FicReport> gliding_window(const Dataset& data,
                                      const std::vector<IndexSet>& candidates,
                                      const Eigen::VectorXd& x,
                                      const std::vector<double>& centers, double delta,
                                      double rcond_threshold = kDefaultRcondThreshold);

/// Shared per-dataset state for scoring many candidates and focal points:
/// the event-grid pass, full-model increments, dJ-hat, dQ-hat source, and
/// per-candidate block factorizations. Build (and prepare() every candidate)
/// single-threaded; afterwards all scoring calls are const and safe to run
/// concurrently.
class RiskEngine {
public:
  RiskEngine(const Dataset& data, double tau,
             double rcond_threshold = kDefaultRcondThreshold);
  ~RiskEngine();
  RiskEngine(const RiskEngine&) = delete;
  RiskEngine& operator=(const RiskEngine&) = delete;

  struct Candidate;  // opaque cache entry

  const Candidate& prepare(const IndexSet& index_set);

  FicTerms point(const Candidate& c, const Eigen::VectorXd& x, double t) const;
  FicTerms interval(const Candidate& c, const Eigen::VectorXd& x, double t1, double t2) const;
  FicTerms weighted(const Candidate& c, const WeightSpec& w) const;

  const Dataset& data() const { return data_; }
  double tau() const { return tau_; }

private:
  struct Impl;
  const Dataset& data_;
  double tau_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace aalenfic
