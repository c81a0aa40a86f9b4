#include "lfmhop/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lfmhop/instrumentation.hpp"

namespace lfmhop {

double residual(const Matrix& x, const BinaryMatrix& z,
                const FeatureMatrix& w) {
  if (z.rows() != x.rows() || w.cols() != x.cols() || z.cols() != w.rows()) {
    throw DimensionError("residual: X, Z, W shapes disagree");
  }
  instrumentation::count_row_scan();
  return (x - z.as_real() * w).norm();
}

double map_objective(const Matrix& x, double tau, const BinaryMatrix& z,
                     const FeatureMatrix& w) {
  if (tau < 0.0) throw DomainError("map_objective: tau must be >= 0");
  const double r = residual(x, z, w);
  return r * r + tau * w.squaredNorm();
}

double map_objective(const LfmInstance& inst, const BinaryMatrix& z,
                     const FeatureMatrix& w) {
  return map_objective(inst.x, inst.tau, z, w);
}

std::int64_t assignment_min_cost(
    const std::vector<std::vector<std::int64_t>>& cost) {
  const auto n = cost.size();
  if (n == 0) return 0;
  // Hungarian algorithm with potentials, 1-based internal indexing.
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<std::int64_t> minv(n + 1, kInf);
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      std::int64_t delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::int64_t total = 0;
  for (std::size_t j = 1; j <= n; ++j) total += cost[p[j] - 1][j - 1];
  return total;
}

namespace {

std::int64_t column_hamming(const BinaryMatrix& a, Eigen::Index i,
                            const BinaryMatrix& b, Eigen::Index j) {
  std::int64_t d = 0;
  for (Eigen::Index n = 0; n < a.rows(); ++n) d += a(n, i) != b(n, j);
  return d;
}

double hamming_impl(const BinaryMatrix& z, const BinaryMatrix& z_star,
                    bool allow_complements) {
  detail::require_same_shape("hamming_error", z.rows(), z.cols(),
                             z_star.rows(), z_star.cols());
  instrumentation::count_row_scan();
  const auto k = static_cast<std::size_t>(z.cols());
  const std::int64_t n = z.rows();
  std::vector<std::vector<std::int64_t>> cost(k,
                                              std::vector<std::int64_t>(k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      std::int64_t d = column_hamming(z, static_cast<Eigen::Index>(i), z_star,
                                      static_cast<Eigen::Index>(j));
      if (allow_complements) d = std::min(d, n - d);
      cost[i][j] = d;
    }
  }
  const std::int64_t best = assignment_min_cost(cost);
  return static_cast<double>(best) /
         (static_cast<double>(n) * static_cast<double>(k));
}

}  // namespace

double hamming_error(const BinaryMatrix& z, const BinaryMatrix& z_star) {
  return hamming_impl(z, z_star, false);
}

double hamming_error_allowing_complements(const BinaryMatrix& z,
                                          const BinaryMatrix& z_star) {
  return hamming_impl(z, z_star, true);
}

double regularizer_metric(const FeatureMatrix& w) {
  return w.norm() /
         (static_cast<double>(w.rows()) * static_cast<double>(w.cols()));
}

}  // namespace lfmhop
