#include "rmscale/cholesky.hpp"

#include <cmath>

#include "rmscale/errors.hpp"

namespace rmscale {

Eigen::MatrixXd cholesky(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  if (n != m.cols()) throw DecompositionError("cholesky: matrix not square");
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = m(j, j) - l.row(j).head(j).squaredNorm();
    if (!(pivot > 0.0))
      throw DecompositionError("cholesky: matrix not positive definite");
    l(j, j) = std::sqrt(pivot);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = m(i, j) - l.row(i).head(j).dot(l.row(j).head(j));
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

}  // namespace rmscale
