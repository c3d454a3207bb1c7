#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <variant>
#include <vector>

#include "aalenfic/dataset.hpp"
#include "aalenfic/index_set.hpp"
#include "aalenfic/oracle.hpp"
#include "aalenfic/piecewise.hpp"

namespace aalenfic {

/// Covariate source: gamma draws, or an explicit list assigned cyclically
/// to individuals.
using CovariateGenerator = std::variant<GammaCovariateSpec, std::vector<Eigen::VectorXd>>;

int covariate_dimension(const CovariateGenerator& gen);

/// Whether covariates are redrawn each replication (marginal, the default)
/// or held fixed across replications (conditional on x).
enum class CovariateMode { marginal, conditional };

struct SimConfig {
  int n = 0;
  uint64_t seed = 0;
  CovariateGenerator covariates;
  std::vector<PiecewiseConstant> alphas;  // alpha_j(u) >= 0
  Censoring censoring;
  CovariateMode mode = CovariateMode::marginal;

  int r() const { return covariate_dimension(covariates); }
  void validate() const;
};

/// Smallest t with x^t A(t) >= e, or infinity when the total hazard mass
/// stays below e. The inverse-transform step of the sampler, exposed for
/// testing.
double invert_cumulative_hazard(const std::vector<PiecewiseConstant>& alphas,
                                const Eigen::VectorXd& x, double e);

/// True cumulative hazard H(t | x) = sum_j x_j A_j(t) under the config.
double true_cumulative_hazard(const std::vector<PiecewiseConstant>& alphas,
                              const Eigen::VectorXd& x, double t);

Dataset simulate_dataset(const SimConfig& cfg);
/// Same, for replication `rep` (per-replication substreams).
Dataset simulate_dataset(const SimConfig& cfg, uint64_t rep, int threads = 1);

struct MseEstimate {
  double mean = 0.0;
  double se = 0.0;
  int used = 0;     // replications entering the mean
  int dropped = 0;  // replications with a singular block before t
};

/// Monte Carlo mean and standard error of n (H-hat_I(t|x) - H(t|x))^2 over
/// `reps` replications. Results are independent of `threads`.
MseEstimate replicate_mse(const SimConfig& cfg, const IndexSet& index_set,
                          const Eigen::VectorXd& x, double t, int reps, int threads = 1);

}  // namespace aalenfic
