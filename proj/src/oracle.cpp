#include "aalenfic/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "aalenfic/errors.hpp"
#include "aalenfic/linalg.hpp"
#include "aalenfic/quadrature.hpp"

namespace aalenfic {

void GammaCovariateSpec::validate() const {
  if (shape.size() != rate.size() || shape.size() == 0)
    throw ValidationError("gamma covariate spec needs matching shape and rate vectors");
  for (int j = 0; j < r(); ++j)
    if (!(shape[j] > 0.0) || !(rate[j] > 0.0))
      throw ValidationError("gamma shape and rate parameters must be positive");
}

GammaLaplace::GammaLaplace(double shape, double rate) : a_(shape), b_(rate) {
  if (!(a_ > 0.0) || !(b_ > 0.0))
    throw ValidationError("gamma shape and rate parameters must be positive");
}

LaplaceDerivs GammaLaplace::at(double theta) const {
  if (!(theta > -b_))
    throw ValidationError("laplace exponent domain error: theta must exceed -rate");
  const double d = 1.0 + theta / b_;
  const double xi = a_ / b_;
  LaplaceDerivs out;
  out.m = a_ * std::log1p(theta / b_);
  out.d1 = xi / d;
  out.d2 = -(xi / b_) / (d * d);
  out.d3 = 2.0 * (xi / (b_ * b_)) / (d * d * d);
  return out;
}

LaplaceDerivs laplace_derivatives(const GammaCovariateSpec& spec, int j, double theta) {
  spec.validate();
  if (j < 0 || j >= spec.r()) throw ValidationError("covariate index out of range");
  return GammaLaplace(spec.shape[j], spec.rate[j]).at(theta);
}

double Censoring::survival(double u) const {
  switch (kind) {
    case CensoringKind::none:
      return 1.0;
    case CensoringKind::exponential:
      return std::exp(-param * u);
    case CensoringKind::administrative:
      return u <= param ? 1.0 : 0.0;
  }
  return 1.0;
}

void Censoring::validate() const {
  if (kind == CensoringKind::exponential && !(param > 0.0))
    throw ValidationError("exponential censoring needs a positive rate");
  if (kind == CensoringKind::administrative && !(param > 0.0))
    throw ValidationError("administrative censoring needs a positive cutoff time");
}

LaplaceDerivs OracleConfig::laplace_at(int j, double theta) const {
  if (!laplace.empty()) return laplace[j]->at(theta);
  return GammaLaplace(covariates.shape[j], covariates.rate[j]).at(theta);
}

void OracleConfig::validate() const {
  const int dim = r();
  if (dim < 1) throw ValidationError("oracle config needs at least one covariate");
  if (laplace.empty()) {
    covariates.validate();
    if (covariates.r() != dim)
      throw ValidationError("covariate spec dimension does not match alphas");
  } else if (static_cast<int>(laplace.size()) != dim) {
    throw ValidationError("laplace family list dimension does not match alphas");
  }
  for (const PiecewiseConstant& a : alphas)
    if (a.min_value() < 0.0) throw ValidationError("regressor levels alpha_j must be >= 0");
  if (focal_x.size() != dim)
    throw ValidationError("focal covariate vector must have dimension " + std::to_string(dim));
  if (!(horizon > 0.0)) throw ValidationError("oracle horizon t must be positive");
  censoring.validate();
  if (censoring.kind == CensoringKind::administrative && horizon > censoring.param)
    throw ValidationError("horizon exceeds the administrative censoring time; G(u) vanishes there");
}

namespace {

struct PopulationPoint {
  double f = 1.0;       // exp{-sum_l M_l(A_l(u))}
  Eigen::VectorXd z;    // M_j'(A_j(u))
  Eigen::VectorXd d;    // -M_j''(A_j(u))
  Eigen::VectorXd d2;   // M_j''
  Eigen::VectorXd d3;   // M_j'''
};

PopulationPoint population_point(const OracleConfig& cfg, double u) {
  const int r = cfg.r();
  PopulationPoint p;
  p.z.resize(r);
  p.d.resize(r);
  p.d2.resize(r);
  p.d3.resize(r);
  double msum = 0.0;
  for (int j = 0; j < r; ++j) {
    const LaplaceDerivs ld = cfg.laplace_at(j, cfg.cumulative_alpha(j, u));
    msum += ld.m;
    p.z[j] = ld.d1;
    p.d[j] = -ld.d2;
    p.d2[j] = ld.d2;
    p.d3[j] = ld.d3;
  }
  p.f = std::exp(-msum);
  return p;
}

std::vector<double> alpha_breakpoints(const OracleConfig& cfg) {
  std::vector<double> cuts;
  for (const PiecewiseConstant& a : cfg.alphas)
    cuts.insert(cuts.end(), a.knots().begin(), a.knots().end());
  return cuts;
}

}  // namespace

Eigen::MatrixXd g_exact(const OracleConfig& cfg, double u) {
  cfg.validate();
  if (!(u >= 0.0)) throw ValidationError("u must be nonnegative");
  const PopulationPoint p = population_point(cfg, u);
  Eigen::MatrixXd g = p.d.asDiagonal();
  g.noalias() += p.z * p.z.transpose();
  return g * (p.f * cfg.censoring.survival(u));
}

Eigen::VectorXd b_exact(const OracleConfig& cfg, const IndexSet& index_set, double u) {
  cfg.validate();
  if (index_set.dimension() != cfg.r())
    throw ValidationError("index set dimension does not match oracle config");
  const std::vector<int> comp = index_set.complement();
  if (comp.empty()) return Eigen::VectorXd(0);
  const PopulationPoint p = population_point(cfg, u);
  const Eigen::VectorXd z0 = subvector(p.z, index_set.indices());
  const Eigen::VectorXd z1 = subvector(p.z, comp);
  const Eigen::VectorXd d0 = subvector(p.d, index_set.indices());
  const Eigen::VectorXd x_in = subvector(cfg.focal_x, index_set.indices());
  const Eigen::VectorXd x_out = subvector(cfg.focal_x, comp);
  // rank-one inversion of D0 + z0 z0^t collapses G10 G00^{-1} x_I to a scalar
  const double num = (z0.array() / d0.array() * x_in.array()).sum();
  const double den = 1.0 + (z0.array().square() / d0.array()).sum();
  return z1 * (num / den) - x_out;
}

Eigen::VectorXd b_exact_gamma(const OracleConfig& cfg, const IndexSet& index_set, double u) {
  cfg.validate();
  if (!cfg.laplace.empty())
    throw ValidationError("the componentwise form is defined for the gamma family only");
  if (index_set.dimension() != cfg.r())
    throw ValidationError("index set dimension does not match oracle config");
  const std::vector<int> comp = index_set.complement();
  if (comp.empty()) return Eigen::VectorXd(0);
  double g_in = 0.0;   // sum_{l in I} (b_l + A_l(u)) x_l
  double den = 1.0;    // 1 + sum_{l in I} b_l xi_l
  for (int l : index_set.indices()) {
    g_in += (cfg.covariates.rate[l] + cfg.cumulative_alpha(l, u)) * cfg.focal_x[l];
    den += cfg.covariates.rate[l] * (cfg.covariates.shape[l] / cfg.covariates.rate[l]);
  }
  Eigen::VectorXd out(comp.size());
  for (size_t k = 0; k < comp.size(); ++k) {
    const int j = comp[k];
    const double xi = cfg.covariates.shape[j] / cfg.covariates.rate[j];
    out[k] = g_in / den * xi / (1.0 + cfg.cumulative_alpha(j, u) / cfg.covariates.rate[j]) -
             cfg.focal_x[j];
  }
  return out;
}

Eigen::MatrixXd dj_exact(const OracleConfig& cfg, double u) {
  cfg.validate();
  if (!(u >= 0.0)) throw ValidationError("u must be nonnegative");
  const int r = cfg.r();
  for (const PiecewiseConstant& a : cfg.alphas)
    if (!a.is_constant())
      throw ValidationError("dJ closed form requires constant regressor levels alpha_j");
  const PopulationPoint p = population_point(cfg, u);
  Eigen::VectorXd alpha(r);
  for (int j = 0; j < r; ++j) alpha[j] = cfg.alphas[j](0.0);
  const double g = p.z.dot(alpha);

  Eigen::MatrixXd m(r, r);
  for (int j = 0; j < r; ++j) {
    for (int k = 0; k < r; ++k) {
      double v = -p.z[j] * p.d2[k] * alpha[k] - p.d2[j] * p.z[k] * alpha[j] +
                 g * p.z[j] * p.z[k];
      if (j == k) v += p.d3[j] * alpha[j] - g * p.d2[j];
      m(j, k) = v;
    }
  }
  return m * (p.f * cfg.censoring.survival(u));
}

ExactRisk exact_risk(const OracleConfig& cfg, const IndexSet& index_set, double n,
                     double abs_tol) {
  cfg.validate();
  if (index_set.dimension() != cfg.r())
    throw ValidationError("index set dimension does not match oracle config");
  if (!(n > 0.0)) throw ValidationError("sample size n must be positive");
  const double t = cfg.horizon;
  const std::vector<double> cuts = alpha_breakpoints(cfg);
  const std::vector<int> comp = index_set.complement();
  const Eigen::VectorXd x_in = subvector(cfg.focal_x, index_set.indices());

  ExactRisk out;
  if (!comp.empty()) {
    const double beta = integrate(
        [&](double u) {
          const Eigen::VectorXd b = b_exact(cfg, index_set, u);
          double s = 0.0;
          for (size_t k = 0; k < comp.size(); ++k) s += b[k] * cfg.alphas[comp[k]](u);
          return s;
        },
        0.0, t, abs_tol, cuts);
    out.sqb = n * beta * beta;
  }
  out.var = integrate(
      [&](double u) {
        const GnBlocks blocks = partition_gn(g_exact(cfg, u), index_set);
        const Eigen::MatrixXd dj00 =
            submatrix(dj_exact(cfg, u), index_set.indices(), index_set.indices());
        const Eigen::VectorXd w = sym_inverse(blocks.g00) * x_in;
        return w.dot(dj00 * w);
      },
      0.0, t, abs_tol, cuts);
  out.mse = out.sqb + out.var;
  return out;
}

ToleranceRadius tolerance_radius(const OracleConfig& cfg, const IndexSet& index_set,
                                 double n, double abs_tol) {
  const ExactRisk sub = exact_risk(cfg, index_set, n, abs_tol);
  const ExactRisk full = exact_risk(cfg, IndexSet::full(cfg.r()), n, abs_tol);
  ToleranceRadius out;
  out.lhs = sub.sqb;
  out.rhs = full.var - sub.var;
  out.submodel_preferred = out.lhs <= out.rhs;
  return out;
}

}  // namespace aalenfic
