#pragma once

#include "lfmhop/types.hpp"

namespace lfmhop {

/// Binarity defect of an integer matrix: (1/2) sum m(m-1), in exact integer
/// arithmetic. Nonnegative; zero iff every entry lies in {0,1}.
std::int64_t defect(const IntMatrix& m);

/// Real-matrix overload; throws DomainError on fractional entries.
std::int64_t defect(const Matrix& m);

/// Defect of the single column Z u evaluated from the Gram caches:
/// (1/2)(u^T (Z^T Z) u - u^T (Z^T 1)). Exact integers throughout; equal to
/// defect(Z u) for every integer u.
std::int64_t column_defect(const IntMatrix& gram, const IntVector& col_sum,
                           const IntVector& u);

/// Geometry of the zero-defect sphere: Lambda with Lambda Lambda^T =
/// (Z^T Z)^{-1} built from the SVD of Z, the sphere center mu =
/// (1/2) Lambda^T Z^T 1, and the integer Gram caches.
struct SphereGeometry {
  Eigen::Index k = 0;
  Eigen::Index n = 0;
  Matrix lambda;      // Psi Sigma^{-1}
  Matrix lambda_inv;  // Sigma Psi^T, maps u to sphere coordinates s
  Vector mu;
  double mu_norm_sq = 0.0;
  Vector singular_values;
  IntMatrix gram;
  IntVector col_sum;
};

/// Requires rank(Z) = K: every singular value above rel_tol times the
/// largest, otherwise RankError naming the deficient values.
SphereGeometry build_geometry(const BinaryMatrix& z, double rel_tol = 1e-8);

/// Float route for the column defect: s = Lambda^{-1} u, then
/// (1/2)||s - mu||^2 - (1/2)||mu||^2. Agrees with column_defect to ~1e-6.
double sphere_defect(const SphereGeometry& geom, const IntVector& u);

}  // namespace lfmhop
