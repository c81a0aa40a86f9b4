#include "lfmhop/solve.hpp"

#include <Eigen/QR>

#include "lfmhop/instrumentation.hpp"

namespace lfmhop {

FeatureMatrix solve_w_given_z(const Matrix& x, double tau,
                              const BinaryMatrix& z) {
  if (z.rows() != x.rows()) {
    throw DimensionError("solve_w_given_z: Z and X row counts disagree");
  }
  if (tau < 0.0) throw DomainError("solve_w_given_z: tau must be >= 0");
  instrumentation::count_row_scan();
  const Matrix zr = z.as_real();
  if (tau > 0.0) {
    const Eigen::Index k = z.cols();
    Matrix a = zr.transpose() * zr;
    a.diagonal().array() += tau;
    return a.ldlt().solve(zr.transpose() * x);
  }
  // tau = 0: minimum-norm least squares, robust to rank-deficient Z.
  return zr.completeOrthogonalDecomposition().solve(x);
}

FeatureMatrix solve_w_given_z(const LfmInstance& inst, const BinaryMatrix& z) {
  return solve_w_given_z(inst.x, inst.tau, z);
}

}  // namespace lfmhop
