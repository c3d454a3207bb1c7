#include "aalenfic/fic.hpp"

#include <algorithm>
#include <cmath>

#include "aalenfic/errors.hpp"

namespace aalenfic {

Eigen::VectorXd bias_function(const Dataset& data, const IndexSet& index_set,
                              const Eigen::VectorXd& x, double u, double rcond_threshold) {
  if (index_set.dimension() != data.r())
    throw ValidationError("index set dimension does not match dataset");
  if (x.size() != data.r())
    throw ValidationError("focal covariate vector must have dimension " +
                          std::to_string(data.r()));
  const std::vector<int> comp = index_set.complement();
  if (comp.empty()) return Eigen::VectorXd(0);
  const GnBlocks blocks = partition_gn(gn_at(data, u), index_set);
  Eigen::MatrixXd g00_inv;
  try {
    g00_inv = sym_inverse(blocks.g00, rcond_threshold);
  } catch (const SingularityError&) {
    throw SingularityError("G_n00 failed the condition test at time " + std::to_string(u), u);
  }
  const Eigen::VectorXd x_in = subvector(x, index_set.indices());
  const Eigen::VectorXd x_out = subvector(x, comp);
  return blocks.g10 * (g00_inv * x_in) - x_out;
}

MatrixIncrements jhat_increments(const Dataset& data, const StepEstimate& ahat) {
  if (!ahat.index_set.is_full() || ahat.index_set.dimension() != data.r())
    throw ValidationError("jhat_increments requires a full-model estimate for this dataset");
  const int n = data.n();
  const int r = data.r();
  const int m = ahat.grid.size();
  std::vector<Eigen::MatrixXd> out(m);

  // s3[c] accumulates sum_{at risk} x_i x_i^t x_i[c]; contracting with the
  // dA-hat increment gives n dJ-hat without revisiting individuals.
  std::vector<Eigen::MatrixXd> s3(r, Eigen::MatrixXd::Zero(r, r));
  const std::vector<int>& order = data.canonical_order();
  int next = n - 1;
  for (int k = m - 1; k >= 0; --k) {
    const double u = ahat.grid.times[k];
    while (next >= 0 && data.records()[order[next]].time >= u) {
      const Eigen::VectorXd& x = data.records()[order[next]].covariates;
      const Eigen::MatrixXd xx = x * x.transpose();
      for (int c = 0; c < r; ++c) s3[c].noalias() += xx * x[c];
      --next;
    }
    Eigen::MatrixXd dj = Eigen::MatrixXd::Zero(r, r);
    for (int c = 0; c < r; ++c) dj.noalias() += s3[c] * ahat.increments[k][c];
    out[k] = dj / n;
  }
  return MatrixIncrements{ahat.grid, std::move(out)};
}

MatrixIncrements qhat_increments(const Dataset& data, const StepEstimate& ahat,
                                 const IndexSet& index_set, double rcond_threshold) {
  if (index_set.dimension() != data.r())
    throw ValidationError("index set dimension does not match dataset");
  const std::vector<int> comp = index_set.complement();
  const int m = ahat.grid.size();
  if (comp.empty())
    return MatrixIncrements{ahat.grid, std::vector<Eigen::MatrixXd>(m, Eigen::MatrixXd(0, 0))};
  MatrixIncrements jm = jhat_increments(data, ahat);
  std::vector<Eigen::MatrixXd> out(m);
  if (m == 0) return MatrixIncrements{ahat.grid, std::move(out)};
  detail::GridPass pass = detail::grid_pass(data, ahat.grid.times.back(), rcond_threshold);
  for (int k = 0; k < m; ++k) {
    if (!pass.ok[k])
      throw SingularityError(
          "G_n failed the condition test at time " + std::to_string(pass.times[k]),
          pass.times[k]);
    const Eigen::MatrixXd dq_full = pass.gn_inv[k] * jm.increments[k] * pass.gn_inv[k];
    out[k] = submatrix(dq_full, comp, comp);
  }
  return MatrixIncrements{ahat.grid, std::move(out)};
}

// ---------------------------------------------------------------------------
// RiskEngine

struct RiskEngine::Candidate {
  explicit Candidate(IndexSet is) : index_set(std::move(is)) {}

  IndexSet index_set;
  std::vector<int> idx;   // zero-based members
  std::vector<int> comp;  // zero-based complement
  int q = 0;

  // per grid point; entries valid while ok
  std::vector<Eigen::MatrixXd> g00_inv;  // |I| x |I|
  std::vector<Eigen::MatrixXd> k10;      // q x |I|: G10 G00^{-1}
  std::vector<Eigen::MatrixXd> dq;       // q x q block of G^{-1} dJ G^{-1}
  std::vector<Eigen::VectorXd> da_ii;    // complement part of the full-model increment
  std::vector<Eigen::MatrixXd> dj00;     // |I| x |I| block of dJ
  std::vector<char> ok;
  std::optional<int> first_bad;
};

struct RiskEngine::Impl {
  double rcond = kDefaultRcondThreshold;
  detail::GridPass pass;
  std::vector<Eigen::MatrixXd> dj;       // valid where pass.ok
  std::vector<Eigen::MatrixXd> dq_full;  // G^{-1} dJ G^{-1}, valid where pass.ok
  std::map<IndexSet, std::unique_ptr<Candidate>> candidates;
};

RiskEngine::RiskEngine(const Dataset& data, double tau, double rcond_threshold)
    : data_(data), tau_(tau), impl_(std::make_unique<Impl>()) {
  impl_->rcond = rcond_threshold;
  if (tau > 0.0) impl_->pass = detail::grid_pass(data, tau, rcond_threshold);
  const int m = impl_->pass.size();
  const int n = data.n();
  const int r = data.r();
  impl_->dj.assign(m, Eigen::MatrixXd());
  impl_->dq_full.assign(m, Eigen::MatrixXd());

  std::vector<Eigen::MatrixXd> s3(r, Eigen::MatrixXd::Zero(r, r));
  const std::vector<int>& order = data.canonical_order();
  int next = n - 1;
  for (int k = m - 1; k >= 0; --k) {
    const double u = impl_->pass.times[k];
    while (next >= 0 && data.records()[order[next]].time >= u) {
      const Eigen::VectorXd& x = data.records()[order[next]].covariates;
      const Eigen::MatrixXd xx = x * x.transpose();
      for (int c = 0; c < r; ++c) s3[c].noalias() += xx * x[c];
      --next;
    }
    if (!impl_->pass.ok[k]) continue;
    Eigen::MatrixXd dj = Eigen::MatrixXd::Zero(r, r);
    for (int c = 0; c < r; ++c) dj.noalias() += s3[c] * impl_->pass.da[k][c];
    impl_->dj[k] = dj / n;
    impl_->dq_full[k] = impl_->pass.gn_inv[k] * impl_->dj[k] * impl_->pass.gn_inv[k];
  }
}

RiskEngine::~RiskEngine() = default;

const RiskEngine::Candidate& RiskEngine::prepare(const IndexSet& index_set) {
  if (index_set.dimension() != data_.r())
    throw ValidationError("candidate dimension does not match dataset");
  auto it = impl_->candidates.find(index_set);
  if (it != impl_->candidates.end()) return *it->second;

  auto cand = std::make_unique<Candidate>(index_set);
  cand->idx = index_set.indices();
  cand->comp = index_set.complement();
  cand->q = static_cast<int>(cand->comp.size());
  const int m = impl_->pass.size();
  cand->g00_inv.assign(m, Eigen::MatrixXd());
  cand->k10.assign(m, Eigen::MatrixXd());
  cand->dq.assign(m, Eigen::MatrixXd());
  cand->da_ii.assign(m, Eigen::VectorXd());
  cand->dj00.assign(m, Eigen::MatrixXd());
  cand->ok.assign(m, 0);
  for (int k = 0; k < m; ++k) {
    if (!impl_->pass.ok[k]) break;  // the full matrix gates everything downstream
    const Eigen::MatrixXd g00 = submatrix(impl_->pass.gn[k], cand->idx, cand->idx);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g00);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(hi > 0.0) || !(lo > 0.0) || lo / hi < impl_->rcond) break;
    cand->ok[k] = 1;
    cand->g00_inv[k] = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
                       es.eigenvectors().transpose();
    cand->dj00[k] = submatrix(impl_->dj[k], cand->idx, cand->idx);
    if (cand->q > 0) {
      const Eigen::MatrixXd g10 = submatrix(impl_->pass.gn[k], cand->comp, cand->idx);
      cand->k10[k] = g10 * cand->g00_inv[k];
      cand->dq[k] = submatrix(impl_->dq_full[k], cand->comp, cand->comp);
      cand->da_ii[k] = subvector(impl_->pass.da[k], cand->comp);
    }
  }
  for (int k = 0; k < m; ++k) {
    if (!cand->ok[k]) {
      cand->first_bad = k;
      break;
    }
  }
  const Candidate& ref = *cand;
  impl_->candidates.emplace(index_set, std::move(cand));
  return ref;
}

FicTerms RiskEngine::interval(const Candidate& c, const Eigen::VectorXd& x, double t1,
                              double t2) const {
  if (x.size() != data_.r())
    throw ValidationError("focal covariate vector must have dimension " +
                          std::to_string(data_.r()));
  if (!(t1 >= 0.0) || !(t2 >= t1)) throw ValidationError("need 0 <= t1 <= t2");
  const Eigen::VectorXd x_in = subvector(x, c.idx);
  const Eigen::VectorXd x_out = subvector(x, c.comp);
  double s1 = 0.0, s2 = 0.0, v = 0.0;
  for (int k = 0; k < impl_->pass.size(); ++k) {
    const double u = impl_->pass.times[k];
    if (u > t2) break;
    if (!c.ok[k])
      throw SingularityError(
          "G_n block failed the condition test at time " + std::to_string(u), u);
    if (u <= t1) continue;  // sums are over (t1, t2]
    const Eigen::VectorXd w = c.g00_inv[k] * x_in;
    v += w.dot(c.dj00[k] * w);
    if (c.q > 0) {
      const Eigen::VectorXd b = c.k10[k] * x_in - x_out;
      s1 += b.dot(c.da_ii[k]);
      s2 += b.dot(c.dq[k] * b);
    }
  }
  FicTerms terms;
  terms.var = v;
  terms.sqb = c.q > 0 ? data_.n() * s1 * s1 - s2 : 0.0;
  terms.score = std::max(terms.sqb, 0.0) + terms.var;
  return terms;
}

FicTerms RiskEngine::point(const Candidate& c, const Eigen::VectorXd& x, double t) const {
  return interval(c, x, 0.0, t);
}

FicTerms RiskEngine::weighted(const Candidate& c, const WeightSpec& w) const {
  FicTerms terms;
  if (!w.is_empirical()) {
    for (size_t j = 0; j < w.points().size(); ++j) {
      const WeightPoint& p = w.points()[j];
      FicTerms pt;
      try {
        pt = point(c, p.x, p.t);
      } catch (const SingularityError& e) {
        throw InfeasibleError("weight point " + std::to_string(j + 1) + " (t=" +
                              std::to_string(p.t) + ") infeasible: " + e.what());
      }
      terms.sqb += p.w * pt.sqb;
      terms.var += p.w * pt.var;
    }
    terms.score = std::max(terms.sqb, 0.0) + terms.var;
    return terms;
  }

  // Empirical covariate weights at fixed t. Variance by the trace identity
  // Tr{(int G00^{-1} dJ00 G00^{-1}) (n^{-1} sum_i x_iI x_iI^t)}; squared
  // bias via B-hat_I and the dQ-hat quadratic forms.
  const double t = w.empirical_time();
  const int n = data_.n();
  const int p = static_cast<int>(c.idx.size());
  Eigen::MatrixXd kernel = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd b_hat = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd a_ii = Eigen::VectorXd::Zero(c.q);
  // integrated quadratic forms: b_i^t dQ b_i = x_iI^t S_kk x_iI - 2 x_iI^t S_k1 x_iII
  //                             + x_iII^t S_11 x_iII
  Eigen::MatrixXd s_kk = Eigen::MatrixXd::Zero(p, p);
  Eigen::MatrixXd s_k1 = Eigen::MatrixXd::Zero(p, c.q);
  Eigen::MatrixXd s_11 = Eigen::MatrixXd::Zero(c.q, c.q);
  for (int k = 0; k < impl_->pass.size(); ++k) {
    const double u = impl_->pass.times[k];
    if (u > t) break;
    if (!c.ok[k])
      throw InfeasibleError("G_n block failed the condition test at time " +
                            std::to_string(u));
    kernel.noalias() += c.g00_inv[k] * c.dj00[k] * c.g00_inv[k];
    if (c.q > 0) {
      b_hat.noalias() += c.k10[k].transpose() * c.da_ii[k];
      a_ii += c.da_ii[k];
      s_kk.noalias() += c.k10[k].transpose() * c.dq[k] * c.k10[k];
      s_k1.noalias() += c.k10[k].transpose() * c.dq[k];
      s_11 += c.dq[k];
    }
  }
  Eigen::MatrixXd sxx = Eigen::MatrixXd::Zero(p, p);
  for (int i : data_.canonical_order()) {
    const Eigen::VectorXd xi = subvector(data_.records()[i].covariates, c.idx);
    sxx.noalias() += xi * xi.transpose();
  }
  sxx /= n;
  terms.var = (kernel * sxx).trace();
  if (c.q > 0) {
    double first = 0.0, second = 0.0;
    for (int i : data_.canonical_order()) {
      const Eigen::VectorXd xi = subvector(data_.records()[i].covariates, c.idx);
      const Eigen::VectorXd xo = subvector(data_.records()[i].covariates, c.comp);
      const double beta = xi.dot(b_hat) - xo.dot(a_ii);
      first += beta * beta;
      second += xi.dot(s_kk * xi) - 2.0 * xi.dot(s_k1 * xo) + xo.dot(s_11 * xo);
    }
    terms.sqb = first - second / n;
  }
  terms.score = std::max(terms.sqb, 0.0) + terms.var;
  return terms;
}

// ---------------------------------------------------------------------------
// WeightSpec

WeightSpec WeightSpec::from_points(std::vector<WeightPoint> points) {
  if (points.empty()) throw ValidationError("weight spec needs at least one point");
  double sum = 0.0;
  for (size_t j = 0; j < points.size(); ++j) {
    if (!(points[j].w >= 0.0))
      throw ValidationError("weight " + std::to_string(j + 1) + " is negative");
    if (!(points[j].t >= 0.0))
      throw ValidationError("weight point " + std::to_string(j + 1) + " has negative time");
    if (points[j].x.size() != points[0].x.size())
      throw ValidationError("weight points have inconsistent covariate dimensions");
    sum += points[j].w;
  }
  if (!(sum > 0.0)) throw ValidationError("weights must have positive sum");
  for (WeightPoint& p : points) p.w /= sum;
  WeightSpec w;
  w.points_ = std::move(points);
  return w;
}

WeightSpec WeightSpec::empirical(double t) {
  if (!(t >= 0.0)) throw ValidationError("empirical weight time must be nonnegative");
  WeightSpec w;
  w.is_empirical_ = true;
  w.empirical_time_ = t;
  return w;
}

// ---------------------------------------------------------------------------
// spec-level wrappers

namespace {

double weights_horizon(const WeightSpec& w) {
  if (w.is_empirical()) return w.empirical_time();
  double t = 0.0;
  for (const WeightPoint& p : w.points()) t = std::max(t, p.t);
  return t;
}

}  // namespace

double sqb_hat(const Dataset& data, const IndexSet& index_set, const Eigen::VectorXd& x,
               double t, double rcond_threshold) {
  RiskEngine engine(data, t, rcond_threshold);
  return engine.point(engine.prepare(index_set), x, t).sqb;
}

double var_hat(const Dataset& data, const IndexSet& index_set, const Eigen::VectorXd& x,
               double t, double rcond_threshold) {
  RiskEngine engine(data, t, rcond_threshold);
  return engine.point(engine.prepare(index_set), x, t).var;
}

FicTerms fic_score(const Dataset& data, const IndexSet& index_set, const Eigen::VectorXd& x,
                   double t, double rcond_threshold) {
  RiskEngine engine(data, t, rcond_threshold);
  return engine.point(engine.prepare(index_set), x, t);
}

FicTerms fic_interval(const Dataset& data, const IndexSet& index_set, const Eigen::VectorXd& x,
                      double t1, double t2, double rcond_threshold) {
  RiskEngine engine(data, t2, rcond_threshold);
  return engine.interval(engine.prepare(index_set), x, t1, t2);
}

FicTerms wfic_score(const Dataset& data, const IndexSet& index_set, const WeightSpec& w,
                    double rcond_threshold) {
  RiskEngine engine(data, weights_horizon(w), rcond_threshold);
  return engine.weighted(engine.prepare(index_set), w);
}

std::vector<IndexSet> enumerate_candidates(int r, const std::vector<int>& protected_one_based) {
  if (r < 1) throw ValidationError("covariate dimension must be >= 1");
  if (r > 12)
    throw ValidationError("candidate enumeration is limited to r <= 12; pass an explicit list");
  unsigned protected_mask = 0;
  for (int j : protected_one_based) {
    if (j < 1 || j > r)
      throw ValidationError("protected index " + std::to_string(j) + " out of range");
    protected_mask |= 1u << (j - 1);
  }
  std::vector<IndexSet> out;
  for (unsigned mask = 1; mask < (1u << r); ++mask) {
    if ((mask & protected_mask) != protected_mask) continue;
    std::vector<int> idx;
    for (int j = 0; j < r; ++j)
      if (mask & (1u << j)) idx.push_back(j);
    out.push_back(IndexSet::from_zero_based(std::move(idx), r));
  }
  std::sort(out.begin(), out.end(), [](const IndexSet& a, const IndexSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.indices() < b.indices();
  });
  return out;
}

namespace {

struct RankOutcome {
  std::vector<CandidateScore> scores;
  std::optional<IndexSet> winner;
};

RankOutcome rank_impl(const Dataset& data, const std::vector<IndexSet>& candidates,
                      const Focal& focal, double rcond_threshold) {
  if (candidates.empty()) throw ValidationError("candidate list must be nonempty");
  double tau = 0.0;
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, FocalPoint>) {
          tau = f.t;
        } else if constexpr (std::is_same_v<T, FocalInterval>) {
          tau = f.t2;
        } else {
          tau = weights_horizon(f);
        }
      },
      focal);
  RiskEngine engine(data, tau, rcond_threshold);

  RankOutcome out;
  for (const IndexSet& index_set : candidates) {
    const RiskEngine::Candidate& c = engine.prepare(index_set);
    CandidateScore cs{index_set, 0.0, 0.0, 0.0, true, {}};
    try {
      FicTerms terms = std::visit(
          [&](const auto& f) -> FicTerms {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, FocalPoint>) {
              return engine.point(c, f.x, f.t);
            } else if constexpr (std::is_same_v<T, FocalInterval>) {
              return engine.interval(c, f.x, f.t1, f.t2);
            } else {
              return engine.weighted(c, f);
            }
          },
          focal);
      cs.sqb = terms.sqb;
      cs.var = terms.var;
      cs.score = terms.score;
      if (cs.var < 0.0) cs.note = "negative variance estimate";
    } catch (const SingularityError& e) {
      cs.feasible = false;
      cs.note = e.what();
    } catch (const InfeasibleError& e) {
      cs.feasible = false;
      cs.note = e.what();
    }
    out.scores.push_back(std::move(cs));
  }
  std::stable_sort(out.scores.begin(), out.scores.end(),
                   [](const CandidateScore& a, const CandidateScore& b) {
                     if (a.feasible != b.feasible) return a.feasible;
                     if (!a.feasible) {
                       if (a.index_set.size() != b.index_set.size())
                         return a.index_set.size() < b.index_set.size();
                       return a.index_set.indices() < b.index_set.indices();
                     }
                     if (a.score != b.score) return a.score < b.score;
                     if (a.index_set.size() != b.index_set.size())
                       return a.index_set.size() < b.index_set.size();
                     return a.index_set.indices() < b.index_set.indices();
                   });
  if (!out.scores.empty() && out.scores.front().feasible)
    out.winner = out.scores.front().index_set;
  return out;
}

}  // namespace

FicReport rank_models(const Dataset& data, const std::vector<IndexSet>& candidates,
                      const Focal& focal, double rcond_threshold) {
  RankOutcome out = rank_impl(data, candidates, focal, rcond_threshold);
  if (!out.winner) throw InfeasibleError("no candidate model is feasible for this focal point");
  return FicReport{focal, std::move(out.scores), std::move(out.winner)};
}

std::vector<FicReport> gliding_window(const Dataset& data,
                                      const std::vector<IndexSet>& candidates,
                                      const Eigen::VectorXd& x,
                                      const std::vector<double>& centers, double delta,
                                      double rcond_threshold) {
  if (!(delta > 0.0)) throw ValidationError("window half-width delta must be positive");
  std::vector<FicReport> reports;
  reports.reserve(centers.size());
  for (double c : centers) {
    const FocalInterval focal{x, std::max(0.0, c - delta), c + delta};
    RankOutcome out = rank_impl(data, candidates, focal, rcond_threshold);
    reports.push_back(FicReport{focal, std::move(out.scores), std::move(out.winner)});
  }
  return reports;
}

}  // namespace aalenfic
