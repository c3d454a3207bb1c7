#pragma once

#include <Eigen/Dense>

#include "aalenfic/index_set.hpp"

namespace aalenfic {

// Singular blocks are detected with a reciprocal-condition test on the
// eigenvalues of the symmetric matrix; kDefaultRcondThreshold rejects
// anything with lambda_min / lambda_max below 1e-12.
inline constexpr double kDefaultRcondThreshold = 1e-12;

/// Reciprocal condition number lambda_min / lambda_max of a symmetric
/// matrix; 0 for matrices that are singular or not positive semidefinite.
double sym_rcond(const Eigen::MatrixXd& m);

/// Inverse of a symmetric positive definite matrix via its eigensystem.
/// Throws SingularityError (time = NaN) when the rcond test fails.
Eigen::MatrixXd sym_inverse(const Eigen::MatrixXd& m,
                            double rcond_threshold = kDefaultRcondThreshold);

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<int>& rows,
                          const std::vector<int>& cols);
Eigen::VectorXd subvector(const Eigen::VectorXd& v, const std::vector<int>& idx);

/// The (I, I^c) block partition of a symmetric r x r matrix.
struct GnBlocks {
  Eigen::MatrixXd full;
  Eigen::MatrixXd g00;  // |I| x |I|
  Eigen::MatrixXd g01;  // |I| x q
  Eigen::MatrixXd g10;  // q x |I|
  Eigen::MatrixXd g11;  // q x q
};

GnBlocks partition_gn(const Eigen::MatrixXd& full, const IndexSet& index_set);

}  // namespace aalenfic
