#include "aalenfic/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "aalenfic/aalen.hpp"
#include "aalenfic/errors.hpp"
#include "aalenfic/rng.hpp"

namespace aalenfic {

namespace {

constexpr uint64_t kCovariateStream = 0x636f76;  // stream tags
constexpr uint64_t kEventStream = 0x657674;
constexpr uint64_t kCensorStream = 0x636e73;

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

int covariate_dimension(const CovariateGenerator& gen) {
  if (const auto* spec = std::get_if<GammaCovariateSpec>(&gen)) return spec->r();
  const auto& list = std::get<std::vector<Eigen::VectorXd>>(gen);
  return list.empty() ? 0 : static_cast<int>(list.front().size());
}

void SimConfig::validate() const {
  if (n < 1) throw ValidationError("simulation needs n >= 1");
  const int dim = r();
  if (dim < 1) throw ValidationError("simulation needs at least one covariate");
  if (static_cast<int>(alphas.size()) != dim)
    throw ValidationError("alphas dimension does not match the covariate generator");
  for (const PiecewiseConstant& a : alphas)
    if (a.min_value() < 0.0) throw ValidationError("regressor levels alpha_j must be >= 0");
  censoring.validate();

  if (const auto* spec = std::get_if<GammaCovariateSpec>(&covariates)) {
    spec->validate();
  } else {
    const auto& list = std::get<std::vector<Eigen::VectorXd>>(covariates);
    if (list.empty()) throw ValidationError("explicit covariate list must be nonempty");
    for (const Eigen::VectorXd& v : list) {
      if (v.size() != dim)
        throw ValidationError("explicit covariate vectors have inconsistent dimensions");
      for (int j = 0; j < dim; ++j)
        if (!(v[j] >= 0.0) || !std::isfinite(v[j]))
          throw ValidationError("explicit covariates must be finite and nonnegative");
    }
  }

  // Finite total hazard mass leaves T^0 = infinity possible; only an
  // administrative cutoff turns that into a well-defined record.
  if (censoring.kind != CensoringKind::administrative) {
    bool tail_positive_possible = false;
    if (std::holds_alternative<GammaCovariateSpec>(covariates)) {
      for (const PiecewiseConstant& a : alphas)
        if (a.values().back() > 0.0) tail_positive_possible = true;
    } else {
      tail_positive_possible = true;
      for (const Eigen::VectorXd& v : std::get<std::vector<Eigen::VectorXd>>(covariates)) {
        double tail = 0.0;
        for (int j = 0; j < dim; ++j) tail += v[j] * alphas[j].values().back();
        if (tail == 0.0) tail_positive_possible = false;
      }
    }
    if (!tail_positive_possible)
      throw ValidationError(
          "non-terminating follow-up: total hazard mass is finite but no administrative "
          "censoring is configured");
  }
}

double true_cumulative_hazard(const std::vector<PiecewiseConstant>& alphas,
                              const Eigen::VectorXd& x, double t) {
  if (x.size() != static_cast<int>(alphas.size()))
    throw ValidationError("covariate vector dimension does not match alphas");
  double sum = 0.0;
  for (size_t j = 0; j < alphas.size(); ++j) sum += x[j] * alphas[j].integral(t);
  return sum;
}

double invert_cumulative_hazard(const std::vector<PiecewiseConstant>& alphas,
                                const Eigen::VectorXd& x, double e) {
  if (x.size() != static_cast<int>(alphas.size()))
    throw ValidationError("covariate vector dimension does not match alphas");
  if (!(e >= 0.0)) throw ValidationError("deviate must be nonnegative");
  if (e == 0.0) return 0.0;

  std::vector<double> knots;
  for (const PiecewiseConstant& a : alphas)
    knots.insert(knots.end(), a.knots().begin(), a.knots().end());
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  double h = 0.0;
  for (size_t s = 0; s < knots.size(); ++s) {
    double slope = 0.0;
    for (size_t j = 0; j < alphas.size(); ++j) slope += x[j] * alphas[j](knots[s]);
    if (slope < 0.0) throw ValidationError("negative hazard: x^t alpha(u) < 0");
    if (s + 1 < knots.size()) {
      const double len = knots[s + 1] - knots[s];
      if (slope > 0.0 && h + slope * len >= e) return knots[s] + (e - h) / slope;
      h += slope * len;
    } else {
      if (slope > 0.0) return knots[s] + (e - h) / slope;
    }
  }
  return kInf;
}

namespace {

SurvivalRecord draw_record(const SimConfig& cfg, uint64_t rep, int i) {
  const uint64_t cov_rep = cfg.mode == CovariateMode::conditional ? 0 : rep;
  SurvivalRecord rec;
  if (const auto* spec = std::get_if<GammaCovariateSpec>(&cfg.covariates)) {
    rng::Stream cov(rng::mix(cfg.seed, {kCovariateStream, cov_rep, static_cast<uint64_t>(i)}));
    rec.covariates.resize(spec->r());
    for (int j = 0; j < spec->r(); ++j)
      rec.covariates[j] = cov.gamma(spec->shape[j], spec->rate[j]);
  } else {
    const auto& list = std::get<std::vector<Eigen::VectorXd>>(cfg.covariates);
    rec.covariates = list[static_cast<size_t>(i) % list.size()];
  }

  rng::Stream evt(rng::mix(cfg.seed, {kEventStream, rep, static_cast<uint64_t>(i)}));
  const double t0 = invert_cumulative_hazard(cfg.alphas, rec.covariates, evt.exponential());

  double censor = kInf;
  if (cfg.censoring.kind == CensoringKind::exponential) {
    rng::Stream cen(rng::mix(cfg.seed, {kCensorStream, rep, static_cast<uint64_t>(i)}));
    censor = cen.exponential() / cfg.censoring.param;
  } else if (cfg.censoring.kind == CensoringKind::administrative) {
    censor = cfg.censoring.param;
  }

  if (t0 == kInf && censor == kInf)
    throw ValidationError("non-terminating follow-up for a simulated individual");
  rec.time = std::min(t0, censor);
  rec.event = t0 < censor;  // strict: a tie with the censoring time counts as censored
  return rec;
}

}  // namespace

Dataset simulate_dataset(const SimConfig& cfg, uint64_t rep, int threads) {
  cfg.validate();
  std::vector<SurvivalRecord> records(cfg.n);
  const int workers = std::clamp(threads, 1, cfg.n);
  if (workers == 1) {
    for (int i = 0; i < cfg.n; ++i) records[i] = draw_record(cfg, rep, i);
  } else {
    // per-individual substreams make rows independent of the partition
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int i = w; i < cfg.n; i += workers) records[i] = draw_record(cfg, rep, i);
      });
    }
    for (std::thread& th : pool) th.join();
  }
  return Dataset(std::move(records));
}

Dataset simulate_dataset(const SimConfig& cfg) { return simulate_dataset(cfg, 0, 1); }

MseEstimate replicate_mse(const SimConfig& cfg, const IndexSet& index_set,
                          const Eigen::VectorXd& x, double t, int reps, int threads) {
  cfg.validate();
  if (reps < 2) throw ValidationError("replicate_mse needs reps >= 2");
  if (index_set.dimension() != cfg.r())
    throw ValidationError("index set dimension does not match the simulation config");
  if (x.size() != cfg.r())
    throw ValidationError("focal covariate vector must have dimension " +
                          std::to_string(cfg.r()));
  if (!(t >= 0.0)) throw ValidationError("t must be nonnegative");

  MseEstimate out;
  if (t == 0.0) {  // H-hat(0) = H(0) = 0 identically
    out.used = reps;
    return out;
  }

  const double h_true = true_cumulative_hazard(cfg.alphas, x, t);
  std::vector<double> losses(reps, std::numeric_limits<double>::quiet_NaN());
  auto run_rep = [&](int rep) {
    const Dataset ds = simulate_dataset(cfg, static_cast<uint64_t>(rep) + 1, 1);
    try {
      const StepEstimate est = fit_submodel(ds, index_set, t);
      const double h_hat = cumulative_hazard(est, x, t);
      losses[rep] = cfg.n * (h_hat - h_true) * (h_hat - h_true);
    } catch (const SingularityError&) {
      // dropped: recorded as NaN
    }
  };
  const int workers = std::clamp(threads, 1, reps);
  if (workers == 1) {
    for (int rep = 0; rep < reps; ++rep) run_rep(rep);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int rep = w; rep < reps; rep += workers) run_rep(rep);
      });
    }
    for (std::thread& th : pool) th.join();
  }

  // fixed-order reduction: results do not depend on the thread count
  double sum = 0.0;
  int used = 0;
  for (double l : losses) {
    if (!std::isnan(l)) {
      sum += l;
      ++used;
    }
  }
  out.used = used;
  out.dropped = reps - used;
  if (out.dropped * 2 > reps || used < 2)
    throw InfeasibleError("more than half of the replications had a singular block before t=" +
                          std::to_string(t));
  out.mean = sum / used;
  double ss = 0.0;
  for (double l : losses)
    if (!std::isnan(l)) ss += (l - out.mean) * (l - out.mean);
  out.se = std::sqrt(ss / (used - 1) / used);
  return out;
}

}  // namespace aalenfic
