#include "aalenfic/linalg.hpp"

#include <limits>

#include "aalenfic/errors.hpp"

namespace aalenfic {

double sym_rcond(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double lo = ev.minCoeff();
  const double hi = ev.maxCoeff();
  if (!(hi > 0.0) || !(lo > 0.0)) return 0.0;
  return lo / hi;
}

Eigen::MatrixXd sym_inverse(const Eigen::MatrixXd& m, double rcond_threshold) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const auto& ev = es.eigenvalues();
  const double lo = ev.minCoeff();
  const double hi = ev.maxCoeff();
  if (!(hi > 0.0) || !(lo > 0.0) || lo / hi < rcond_threshold) {
    throw SingularityError("matrix failed the condition test (rcond below threshold)",
                           std::numeric_limits<double>::quiet_NaN());
  }
  return es.eigenvectors() * ev.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<int>& rows,
                          const std::vector<int>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  return out;
}

Eigen::VectorXd subvector(const Eigen::VectorXd& v, const std::vector<int>& idx) {
  Eigen::VectorXd out(idx.size());
  for (size_t i = 0; i < idx.size(); ++i) out[i] = v[idx[i]];
  return out;
}

GnBlocks partition_gn(const Eigen::MatrixXd& full, const IndexSet& index_set) {
  const std::vector<int>& in = index_set.indices();
  const std::vector<int> out = index_set.complement();
  return GnBlocks{full, submatrix(full, in, in), submatrix(full, in, out),
                  submatrix(full, out, in), submatrix(full, out, out)};
}

}  // namespace aalenfic
