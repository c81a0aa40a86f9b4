#pragma once

#include "lfmhop/types.hpp"

namespace lfmhop {

/// Frobenius norm of X - ZW.
double residual(const Matrix& x, const BinaryMatrix& z, const FeatureMatrix& w);

/// ||X - ZW||_F^2 + tau ||W||_F^2.
double map_objective(const LfmInstance& inst, const BinaryMatrix& z,
                     const FeatureMatrix& w);
double map_objective(const Matrix& x, double tau, const BinaryMatrix& z,
                     const FeatureMatrix& w);

/// min over column permutations s of ||Z s - Z*||_0 / (N K), solved exactly
/// as a linear assignment problem over the K x K column-distance matrix.
double hamming_error(const BinaryMatrix& z, const BinaryMatrix& z_star);

/// Diagnostic variant that also allows matching a column against the
/// complement 1 - z_k of a column.
double hamming_error_allowing_complements(const BinaryMatrix& z,
                                          const BinaryMatrix& z_star);

/// ||W||_F / (K D).
double regularizer_metric(const FeatureMatrix& w);

/// Exact minimum-cost assignment on a square cost matrix; O(n^3).
std::int64_t assignment_min_cost(
    const std::vector<std::vector<std::int64_t>>& cost);

}  // namespace lfmhop
