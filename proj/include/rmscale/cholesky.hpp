#pragma once

#include <Eigen/Core>

namespace rmscale {

// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
// Throws DecompositionError when a pivot is not strictly positive, which is
// how non-positive-definite inputs (and asymmetric garbage) surface.
Eigen::MatrixXd cholesky(const Eigen::MatrixXd& m);

}  // namespace rmscale
