#pragma once

#include "lfmhop/types.hpp"

namespace lfmhop {

/// Closed-form minimizer of the objective for fixed Z: solves
/// (Z^T Z + tau I) W = Z^T X. For tau = 0 with singular Z^T Z the
/// minimum-norm least-squares solution is returned.
FeatureMatrix solve_w_given_z(const LfmInstance& inst, const BinaryMatrix& z);
FeatureMatrix solve_w_given_z(const Matrix& x, double tau,
                              const BinaryMatrix& z);

}  // namespace lfmhop
