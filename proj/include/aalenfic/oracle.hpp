#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "aalenfic/index_set.hpp"
#include "aalenfic/piecewise.hpp"

namespace aalenfic {

/// Independent Gamma(a_j, b_j) covariates; xi_j = a_j / b_j is the mean.
struct GammaCovariateSpec {
  Eigen::VectorXd shape;  // a_j > 0
  Eigen::VectorXd rate;   // b_j > 0

  int r() const { return static_cast<int>(shape.size()); }
  void validate() const;
};

struct LaplaceDerivs {
  double m = 0.0;   // M(theta) = -log E exp(-theta x)
  double d1 = 0.0;  // M'
  double d2 = 0.0;  // M''
  double d3 = 0.0;  // M'''
};

/// Pluggable Laplace-exponent family for one covariate component. The
/// population formulas below only consume M and its first three
/// derivatives, so any independent covariate distribution can be supplied;
/// gamma is the built-in family.
class CovariateLaplace {
public:
  virtual ~CovariateLaplace() = default;
  virtual LaplaceDerivs at(double theta) const = 0;
};

class GammaLaplace final : public CovariateLaplace {
public:
  GammaLaplace(double shape, double rate);
  LaplaceDerivs at(double theta) const override;

private:
  double a_, b_;
};

LaplaceDerivs laplace_derivatives(const GammaCovariateSpec& spec, int j, double theta);

enum class CensoringKind { none, exponential, administrative };

/// Censoring survival function C(u) = Pr{C_i >= u}.
struct Censoring {
  CensoringKind kind = CensoringKind::none;
  double param = 0.0;  // rate (exponential) or cutoff time (administrative)

  double survival(double u) const;
  void validate() const;
};

/// Closed-form population setting: independent covariates with known
/// Laplace exponents, piecewise-constant alpha_j >= 0, and a censoring
/// survival function.
struct OracleConfig {
  GammaCovariateSpec covariates;
  std::vector<PiecewiseConstant> alphas;
  Censoring censoring;
  Eigen::VectorXd focal_x;
  double horizon = 0.0;  // t

  /// Optional override of the built-in gamma family, one entry per
  /// component.
  std::vector<std::shared_ptr<const CovariateLaplace>> laplace;

  int r() const { return static_cast<int>(alphas.size()); }
  double cumulative_alpha(int j, double u) const { return alphas[j].integral(u); }
  LaplaceDerivs laplace_at(int j, double theta) const;
  void validate() const;
};

/// G(u) = f(u) {D(u) + z(u) z(u)^t} C(u).
Eigen::MatrixXd g_exact(const OracleConfig& cfg, double u);

/// Population bias b_I(u) via the rank-one (Sherman-Morrison) closed form.
Eigen::VectorXd b_exact(const OracleConfig& cfg, const IndexSet& index_set, double u);

/// The componentwise gamma form of b_I(u); must agree with b_exact.
Eigen::VectorXd b_exact_gamma(const OracleConfig& cfg, const IndexSet& index_set, double u);

/// dJ(u)/du = f(u) {E(u) + F(u)} C(u); requires constant alphas.
Eigen::MatrixXd dj_exact(const OracleConfig& cfg, double u);

struct ExactRisk {
  double sqb = 0.0;
  double var = 0.0;
  double mse = 0.0;
};

/// sqb = n (int_0^t b_I^t dA_II)^2, var = x_I^t int_0^t G00^{-1} dJ00
/// G00^{-1} x_I by adaptive quadrature, mse = sqb + var.
ExactRisk exact_risk(const OracleConfig& cfg, const IndexSet& index_set, double n,
                     double abs_tol = 1e-10);

struct ToleranceRadius {
  double lhs = 0.0;  // n {int b_I^t dA_II}^2
  double rhs = 0.0;  // var(full) - var(I)
  bool submodel_preferred = false;
};

ToleranceRadius tolerance_radius(const OracleConfig& cfg, const IndexSet& index_set,
                                 double n, double abs_tol = 1e-10);

}  // namespace aalenfic
