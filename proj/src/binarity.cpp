#include "lfmhop/binarity.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>

#include "lfmhop/instrumentation.hpp"

namespace lfmhop {

std::int64_t defect(const IntMatrix& m) {
  instrumentation::count_row_scan();
  std::int64_t twice = 0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const std::int64_t v = m(i, j);
      twice += v * (v - 1);
    }
  }
  return twice / 2;  // v(v-1) is even for every integer v
}

std::int64_t defect(const Matrix& m) {
  instrumentation::count_row_scan();
  IntMatrix mi(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double v = m(i, j);
      if (!std::isfinite(v) || v != std::nearbyint(v)) {
        throw DomainError("defect: non-integer entry");
      }
      mi(i, j) = static_cast<std::int64_t>(std::llround(v));
    }
  }
  return defect(mi);
}

std::int64_t column_defect(const IntMatrix& gram, const IntVector& col_sum,
                           const IntVector& u) {
  if (gram.rows() != gram.cols() || gram.rows() != u.size() ||
      col_sum.size() != u.size()) {
    throw DimensionError("column_defect: K-sized arguments disagree");
  }
  const std::int64_t quad = u.dot(gram * u);
  const std::int64_t lin = u.dot(col_sum);
  return (quad - lin) / 2;  // always even: equals sum of (Zu)(Zu - 1)
}

SphereGeometry build_geometry(const BinaryMatrix& z, double rel_tol) {
  SphereGeometry geom;
  geom.n = z.rows();
  geom.k = z.cols();
  geom.gram = z.gram();
  geom.col_sum = z.col_sums();

  Eigen::JacobiSVD<Matrix> svd(z.as_real(),
                               Eigen::ComputeThinU | Eigen::ComputeThinV);
  geom.singular_values = svd.singularValues();
  const double largest = geom.singular_values(0);
  const double threshold = rel_tol * largest;
  std::ostringstream deficient;
  bool rank_ok = true;
  for (Eigen::Index i = 0; i < geom.singular_values.size(); ++i) {
    if (geom.singular_values(i) <= threshold) {
      if (!rank_ok) deficient << ", ";
      deficient << geom.singular_values(i);
      rank_ok = false;
    }
  }
  if (!rank_ok || geom.singular_values.size() < geom.k) {
    throw RankError("build_geometry: Z is rank deficient (singular values " +
                    deficient.str() + " below " + std::to_string(threshold) +
                    ")");
  }

  const Matrix psi = svd.matrixV();
  geom.lambda = psi * geom.singular_values.cwiseInverse().asDiagonal();
  geom.lambda_inv = geom.singular_values.asDiagonal() * psi.transpose();
  geom.mu =
      0.5 * geom.lambda.transpose() * geom.col_sum.cast<double>();
  geom.mu_norm_sq = geom.mu.squaredNorm();
  return geom;
}

double sphere_defect(const SphereGeometry& geom, const IntVector& u) {
  if (u.size() != geom.k) {
    throw DimensionError("sphere_defect: u has wrong length");
  }
  const Vector s = geom.lambda_inv * u.cast<double>();
  return 0.5 * (s - geom.mu).squaredNorm() - 0.5 * geom.mu_norm_sq;
}

}  // namespace lfmhop
