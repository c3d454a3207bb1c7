#include <doctest.h>

#include <algorithm>
#include <random>

#include "aalenfic/errors.hpp"
#include "aalenfic/fic.hpp"
#include "helpers.hpp"

using namespace aalenfic;
using testutil::close;
using testutil::four_record_fixture;
using testutil::make_dataset;
using testutil::nelson_aalen_fixture;
using testutil::vec;

// frozen value for the four-record fixture, from the first-principles script
namespace frozen {
constexpr double sqb_1 = -0.26671675432005804;
}  // namespace frozen

TEST_CASE("bias_function: dimensions and hand values") {
  Dataset d = make_dataset({1, 2}, {1, 1}, {{1, 1}, {1, 3}});
  CHECK(bias_function(d, IndexSet::full(2), vec({1, 2}), 1.0).size() == 0);

  Eigen::VectorXd b = bias_function(d, IndexSet::from_one_based({1}, 2), vec({1, 2}), 1.0);
  REQUIRE(b.size() == 1);
  CHECK(close(b[0], 0.0, 1e-14));
  b = bias_function(d, IndexSet::from_one_based({1}, 2), vec({1, 0}), 1.0);
  CHECK(close(b[0], 2.0, 1e-14));
}

TEST_CASE("bias_function: singular block carries the offending time") {
  Dataset d = make_dataset({1, 2}, {1, 1}, {{0, 1}, {0, 1}});  // x1 identically zero
  try {
    bias_function(d, IndexSet::from_one_based({1}, 2), vec({1, 1}), 1.0);
    CHECK(false);
  } catch (const SingularityError& e) {
    CHECK(e.time() == 1.0);
  }
}

TEST_CASE("jhat_increments: hand values") {
  Dataset na = nelson_aalen_fixture();
  MatrixIncrements j = jhat_increments(na, fit_full(na, 3.0));
  REQUIRE(j.increments.size() == 3);
  CHECK(close(j.increments[0](0, 0), 1.0 / 3.0, 1e-15));

  Dataset ortho = make_dataset({1, 2}, {1, 1}, {{1, 0}, {0, 1}});
  StepEstimate est = fit_full(ortho, 1.5);
  MatrixIncrements jo = jhat_increments(ortho, est);
  REQUIRE(jo.increments.size() == 1);
  CHECK(close(jo.increments[0](0, 0), 0.5, 1e-14));
  CHECK(jo.increments[0](0, 1) == 0.0);
  CHECK(jo.increments[0](1, 1) == 0.0);

  // zero increments contract to zero matrices
  StepEstimate zero = est;
  zero.increments[0].setZero();
  MatrixIncrements jz = jhat_increments(ortho, zero);
  CHECK(jz.increments[0].isZero(0.0));
}

TEST_CASE("qhat_increments: full set gives 0x0, orthogonal case vanishes") {
  Dataset ortho = make_dataset({1, 2}, {1, 1}, {{1, 0}, {0, 1}});
  StepEstimate est = fit_full(ortho, 1.5);
  MatrixIncrements q_full = qhat_increments(ortho, est, IndexSet::full(2));
  REQUIRE(q_full.increments.size() == 1);
  CHECK(q_full.increments[0].rows() == 0);

  MatrixIncrements q = qhat_increments(ortho, est, IndexSet::from_one_based({1}, 2));
  REQUIRE(q.increments.size() == 1);
  CHECK(close(q.increments[0](0, 0), 0.0, 1e-14));

  CHECK_THROWS_AS(IndexSet::from_one_based({}, 1), ValidationError);
}

TEST_CASE("sqb_hat: full model and vanishing bias give zero") {
  Dataset d = four_record_fixture();
  CHECK(sqb_hat(d, IndexSet::full(2), vec({1, 2}), 3.0) == 0.0);

  // single grid point at which b(u, x) = 0: both terms vanish
  Dataset flat = make_dataset({1, 2}, {1, 0}, {{1, 1}, {1, 3}});
  CHECK(close(sqb_hat(flat, IndexSet::from_one_based({1}, 2), vec({1, 2}), 1.0), 0.0, 1e-14));
}

TEST_CASE("sqb_hat/var_hat/fic_score on the four-record fixture match the script") {
  Dataset d = four_record_fixture();
  const IndexSet sub = IndexSet::from_one_based({1}, 2);
  const Eigen::VectorXd x = vec({1, 2});
  CHECK(close(sqb_hat(d, sub, x, 3.0), frozen::sqb_1));
  CHECK(close(var_hat(d, sub, x, 3.0), 61.0 / 36.0));
  FicTerms terms = fic_score(d, sub, x, 3.0);
  CHECK(terms.sqb < 0.0);
  CHECK(terms.score == terms.var);  // truncation at zero
}

TEST_CASE("var_hat on the Nelson-Aalen fixture") {
  Dataset d = nelson_aalen_fixture();
  const IndexSet full = IndexSet::full(1);
  CHECK(close(var_hat(d, full, vec({1}), 1.0), 1.0 / 3.0, 1e-14));
  // 1/3 + (1/3)/(2/3)^2 + (1/3)/(1/3)^2 = 49/12; equals n * sum dN/Ybar^2,
  // the classical normalized Nelson-Aalen variance
  CHECK(close(var_hat(d, full, vec({1}), 3.0), 49.0 / 12.0, 1e-14));
  CHECK(var_hat(d, full, vec({0}), 3.0) == 0.0);
}

TEST_CASE("fic_score: full-model identity is exact") {
  Dataset d = four_record_fixture();
  for (double t : {1.0, 2.0, 3.0}) {
    FicTerms terms = fic_score(d, IndexSet::full(2), vec({1, 2}), t);
    CHECK(terms.sqb == 0.0);
    CHECK(terms.score == terms.var);
  }
}

TEST_CASE("fic_interval: empty window, prefix identity, hand value") {
  Dataset d = nelson_aalen_fixture();
  const IndexSet full = IndexSet::full(1);
  FicTerms empty = fic_interval(d, full, vec({1}), 2.0, 2.0);
  CHECK(empty.sqb == 0.0);
  CHECK(empty.var == 0.0);
  CHECK(empty.score == 0.0);

  FicTerms prefix = fic_interval(d, full, vec({1}), 0.0, 3.0);
  FicTerms direct = fic_score(d, full, vec({1}), 3.0);
  CHECK(prefix.sqb == direct.sqb);
  CHECK(prefix.var == direct.var);

  // jumps at 2 and 3 only: (1/3)/(2/3)^2 + (1/3)/(1/3)^2 = 15/4
  CHECK(close(fic_interval(d, full, vec({1}), 1.5, 3.0).var, 15.0 / 4.0, 1e-14));
}

TEST_CASE("property: variance decomposes over adjacent windows") {
  Dataset d = four_record_fixture();
  for (const IndexSet& index_set :
       {IndexSet::from_one_based({1}, 2), IndexSet::full(2)}) {
    for (double t1 : {1.0, 1.5, 2.0}) {
      const double left = fic_interval(d, index_set, vec({1, 2}), 0.0, t1).var;
      const double right = fic_interval(d, index_set, vec({1, 2}), t1, 3.0).var;
      const double whole = fic_interval(d, index_set, vec({1, 2}), 0.0, 3.0).var;
      CHECK(close(left + right, whole, 1e-15));
    }
  }
}

TEST_CASE("gliding_window: degenerate and composed cases") {
  Dataset d = nelson_aalen_fixture();
  const std::vector<IndexSet> cands{IndexSet::full(1)};
  CHECK(gliding_window(d, cands, vec({1}), {}, 0.5).empty());

  // delta >= center: the window covers [0, c + delta]
  auto reports = gliding_window(d, cands, vec({1}), {2.0}, 2.0);
  REQUIRE(reports.size() == 1);
  FicTerms direct = fic_score(d, IndexSet::full(1), vec({1}), 4.0);
  CHECK(reports[0].candidates[0].score == direct.score);

  auto two = gliding_window(d, cands, vec({1}), {1.0, 2.5}, 0.75);
  REQUIRE(two.size() == 2);
  CHECK(two[0].candidates[0].var ==
        fic_interval(d, IndexSet::full(1), vec({1}), 0.25, 1.75).var);
  CHECK(two[1].candidates[0].var ==
        fic_interval(d, IndexSet::full(1), vec({1}), 1.75, 3.25).var);
}

TEST_CASE("wfic: a single unit-weight point reproduces the pointwise score") {
  Dataset d = four_record_fixture();
  const IndexSet sub = IndexSet::from_one_based({1}, 2);
  WeightSpec w = WeightSpec::from_points({{vec({1, 2}), 3.0, 1.0}});
  FicTerms weighted = wfic_score(d, sub, w);
  FicTerms pointwise = fic_score(d, sub, vec({1, 2}), 3.0);
  CHECK(weighted.sqb == pointwise.sqb);
  CHECK(weighted.var == pointwise.var);
  CHECK(weighted.score == pointwise.score);
}

TEST_CASE("wfic: truncation happens after weighting") {
  Dataset d = four_record_fixture();
  const IndexSet sub = IndexSet::from_one_based({1}, 2);
  // sqb is negative at x = (1,2) and positive at x = (0,1)
  const FicTerms neg = fic_score(d, sub, vec({1, 2}), 3.0);
  const FicTerms pos = fic_score(d, sub, vec({0, 1}), 3.0);
  REQUIRE(neg.sqb < 0.0);
  REQUIRE(pos.sqb > 0.0);

  WeightSpec w = WeightSpec::from_points({{vec({1, 2}), 3.0, 0.9}, {vec({0, 1}), 3.0, 0.1}});
  FicTerms weighted = wfic_score(d, sub, w);
  const double w_sqb = 0.9 * neg.sqb + 0.1 * pos.sqb;
  REQUIRE(w_sqb < 0.0);
  CHECK(close(weighted.sqb, w_sqb, 1e-14));
  CHECK(close(weighted.score, std::max(w_sqb, 0.0) + 0.9 * neg.var + 0.1 * pos.var, 1e-14));

  const double truncated_average = 0.9 * neg.score + 0.1 * pos.score;
  CHECK(weighted.score < truncated_average);
}

TEST_CASE("wfic: empirical variance matches the direct average of pointwise variances") {
  Dataset d = four_record_fixture();
  for (const IndexSet& index_set :
       {IndexSet::from_one_based({1}, 2), IndexSet::from_one_based({2}, 2),
        IndexSet::full(2)}) {
    FicTerms w = wfic_score(d, index_set, WeightSpec::empirical(3.0));
    double direct_var = 0.0, direct_sqb = 0.0;
    for (const SurvivalRecord& rec : d.records()) {
      FicTerms pt = fic_score(d, index_set, rec.covariates, 3.0);
      direct_var += pt.var / d.n();
      direct_sqb += pt.sqb / d.n();
    }
    CHECK(close(w.var, direct_var, 1e-10));
    CHECK(close(w.sqb, direct_sqb, 1e-10));
  }
}

TEST_CASE("weight spec validation") {
  CHECK_THROWS_AS(WeightSpec::from_points({}), ValidationError);
  CHECK_THROWS_AS(WeightSpec::from_points({{vec({1}), 1.0, -0.5}}), ValidationError);
  CHECK_THROWS_AS(WeightSpec::from_points({{vec({1}), 1.0, 0.0}}), ValidationError);
  // weights are normalized
  Dataset d = four_record_fixture();
  FicTerms a = wfic_score(d, IndexSet::full(2),
                          WeightSpec::from_points({{vec({1, 2}), 3.0, 2.0}}));
  FicTerms b = fic_score(d, IndexSet::full(2), vec({1, 2}), 3.0);
  CHECK(a.score == b.score);
}

TEST_CASE("enumerate_candidates") {
  auto all = enumerate_candidates(2);
  REQUIRE(all.size() == 3);
  CHECK(all[0].one_based() == std::vector<int>{1});
  CHECK(all[1].one_based() == std::vector<int>{2});
  CHECK(all[2].one_based() == std::vector<int>{1, 2});

  auto prot = enumerate_candidates(3, {2});
  CHECK(prot.size() == 4);
  for (const IndexSet& c : prot) CHECK(c.contains(1));

  CHECK_THROWS_AS(enumerate_candidates(13), ValidationError);
}

TEST_CASE("rank_models: winner, tie-breaks, infeasibility") {
  Dataset d = four_record_fixture();
  const std::vector<IndexSet> all = enumerate_candidates(2);

  FicReport single = rank_models(d, {IndexSet::full(2)}, FocalPoint{vec({1, 2}), 3.0});
  REQUIRE(single.winner.has_value());
  CHECK(single.winner->is_full());

  // x = 0 scores every candidate 0: ties resolved by |I|, then lexicographic
  FicReport tie = rank_models(d, all, FocalPoint{vec({0, 0}), 3.0});
  CHECK(tie.candidates[0].index_set.one_based() == std::vector<int>{1});
  CHECK(tie.candidates[1].index_set.one_based() == std::vector<int>{2});
  CHECK(tie.candidates[2].index_set.one_based() == std::vector<int>{1, 2});
  CHECK(tie.winner->one_based() == std::vector<int>{1});

  // collinear covariates: the full G_n is singular from the first event on,
  // so no candidate can be scored
  Dataset collinear = make_dataset({1, 2, 3}, {1, 1, 1}, {{1, 2}, {1, 2}, {2, 4}});
  CHECK_THROWS_AS(rank_models(collinear, all, FocalPoint{vec({1, 2}), 3.0}), InfeasibleError);

  // gliding_window demotes the same failure to per-candidate flags
  auto reports = gliding_window(collinear, all, vec({1, 2}), {2.0}, 1.0);
  REQUIRE(reports.size() == 1);
  CHECK(!reports[0].winner.has_value());
  for (const CandidateScore& c : reports[0].candidates) CHECK(!c.feasible);
}

TEST_CASE("property: duplicating records eventually flips the ranking to the full model") {
  // at x = (1,0) the estimated bias of {1} is positive, so its squared-bias
  // term grows linearly with the duplication factor while variances stay put
  const std::vector<IndexSet> cands{IndexSet::from_one_based({1}, 2), IndexSet::full(2)};
  std::vector<double> times{1, 2, 3, 4};
  std::vector<int> status{1, 1, 1, 0};
  std::vector<std::vector<double>> xs{{1, 1}, {1, 3}, {1, 2}, {1, 1}};

  auto duplicated = [&](int m) {
    std::vector<double> t2;
    std::vector<int> s2;
    std::vector<std::vector<double>> x2;
    for (int rep = 0; rep < m; ++rep)
      for (size_t i = 0; i < times.size(); ++i) {
        t2.push_back(times[i]);
        s2.push_back(status[i]);
        x2.push_back(xs[i]);
      }
    return make_dataset(t2, s2, x2);
  };

  Dataset base = duplicated(1);
  REQUIRE(sqb_hat(base, cands[0], vec({1, 0}), 3.0) > 0.0);
  FicReport m1 = rank_models(base, cands, FocalPoint{vec({1, 0}), 3.0});
  CHECK(m1.winner->one_based() == std::vector<int>{1});

  FicReport m8 = rank_models(duplicated(8), cands, FocalPoint{vec({1, 0}), 3.0});
  CHECK(m8.winner->is_full());

  // variances are invariant under duplication while sqb grows
  const double sqb1 = sqb_hat(base, cands[0], vec({1, 0}), 3.0);
  const double sqb8 = sqb_hat(duplicated(8), cands[0], vec({1, 0}), 3.0);
  const double var1 = var_hat(base, cands[0], vec({1, 0}), 3.0);
  const double var8 = var_hat(duplicated(8), cands[0], vec({1, 0}), 3.0);
  CHECK(close(var1, var8, 1e-12));
  CHECK(sqb8 > sqb1);
}

TEST_CASE("property: per-column rescaling leaves scores and ranking unchanged") {
  Dataset d = four_record_fixture();
  const std::vector<IndexSet> cands = enumerate_candidates(2);
  const Eigen::VectorXd x = vec({1, 2});
  FicReport base = rank_models(d, cands, FocalPoint{x, 3.0});

  std::mt19937 urbg(11);
  std::uniform_real_distribution<double> scale(0.2, 5.0);
  for (int trial = 0; trial < 5; ++trial) {
    const double c1 = scale(urbg);
    const double c2 = scale(urbg);
    std::vector<std::vector<double>> xs;
    for (const SurvivalRecord& rec : d.records())
      xs.push_back({c1 * rec.covariates[0], c2 * rec.covariates[1]});
    Dataset ds = make_dataset({1, 2, 3, 4}, {1, 1, 1, 0}, xs);
    FicReport scaled = rank_models(ds, cands, FocalPoint{vec({c1 * 1, c2 * 2}), 3.0});
    REQUIRE(scaled.candidates.size() == base.candidates.size());
    for (size_t k = 0; k < base.candidates.size(); ++k) {
      CHECK(scaled.candidates[k].index_set == base.candidates[k].index_set);
      CHECK(close(scaled.candidates[k].score, base.candidates[k].score, 1e-10));
      CHECK(close(scaled.candidates[k].sqb, base.candidates[k].sqb, 1e-10));
      CHECK(close(scaled.candidates[k].var, base.candidates[k].var, 1e-10));
    }
  }
}
