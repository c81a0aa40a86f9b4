// Independent reference implementations the tests check the library
// against. Everything here is deliberately written the slow, obvious way
// and shares no code with the implementation under test.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "lfmhop/types.hpp"

namespace oracles {

using lfmhop::BinaryMatrix;
using lfmhop::IntMatrix;
using lfmhop::IntVector;
using lfmhop::Matrix;
using lfmhop::Vector;

/// Elementwise Frobenius norm of X - ZW.
inline double residual_bruteforce(const Matrix& x, const BinaryMatrix& z,
                                  const Matrix& w) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      double v = x(i, j);
      for (Eigen::Index k = 0; k < z.cols(); ++k) {
        v -= z(i, k) * w(k, j);
      }
      sum += v * v;
    }
  }
  return std::sqrt(sum);
}

/// Dense Gaussian elimination with partial pivoting; solves A X = B.
inline Matrix gauss_solve(Matrix a, Matrix b) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index p = 0; p < n; ++p) {
    Eigen::Index pivot = p;
    for (Eigen::Index i = p + 1; i < n; ++i) {
      if (std::abs(a(i, p)) > std::abs(a(pivot, p))) pivot = i;
    }
    if (a(pivot, p) == 0.0) throw std::runtime_error("singular system");
    if (pivot != p) {
      a.row(pivot).swap(a.row(p));
      b.row(pivot).swap(b.row(p));
    }
    for (Eigen::Index i = p + 1; i < n; ++i) {
      const double f = a(i, p) / a(p, p);
      a.row(i) -= f * a.row(p);
      b.row(i) -= f * b.row(p);
    }
  }
  Matrix x = Matrix::Zero(n, b.cols());
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    x.row(i) = b.row(i);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      x.row(i) -= a(i, j) * x.row(j);
    }
    x.row(i) /= a(i, i);
  }
  return x;
}

/// Ridge normal equations (Z^T Z + tau I) W = Z^T X solved elementwise.
inline Matrix solve_w_normal_equations(const Matrix& x, double tau,
                                       const BinaryMatrix& z) {
  const Eigen::Index k = z.cols();
  Matrix a = Matrix::Zero(k, k);
  for (Eigen::Index p = 0; p < k; ++p) {
    for (Eigen::Index q = 0; q < k; ++q) {
      for (Eigen::Index i = 0; i < z.rows(); ++i) {
        a(p, q) += z(i, p) * z(i, q);
      }
    }
    a(p, p) += tau;
  }
  Matrix rhs = Matrix::Zero(k, x.cols());
  for (Eigen::Index p = 0; p < k; ++p) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      for (Eigen::Index i = 0; i < z.rows(); ++i) {
        rhs(p, j) += z(i, p) * x(i, j);
      }
    }
  }
  return gauss_solve(std::move(a), std::move(rhs));
}

/// Exhaustive min over all K! column permutations.
inline double hamming_bruteforce(const BinaryMatrix& z,
                                 const BinaryMatrix& z_star) {
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(z.cols()));
  std::iota(perm.begin(), perm.end(), 0);
  std::int64_t best = -1;
  do {
    std::int64_t total = 0;
    for (Eigen::Index k = 0; k < z.cols(); ++k) {
      for (Eigen::Index i = 0; i < z.rows(); ++i) {
        total += z(i, perm[static_cast<std::size_t>(k)]) != z_star(i, k);
      }
    }
    if (best < 0 || total < best) best = total;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) /
         (static_cast<double>(z.rows()) * static_cast<double>(z.cols()));
}

/// (1/2) sum m(m-1), elementwise.
inline std::int64_t defect_elementwise(const IntMatrix& m) {
  std::int64_t twice = 0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      twice += m(i, j) * (m(i, j) - 1);
    }
  }
  return twice / 2;
}

inline std::int64_t defect_column_elementwise(const BinaryMatrix& z,
                                              const IntVector& u) {
  std::int64_t twice = 0;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    std::int64_t v = 0;
    for (Eigen::Index k = 0; k < z.cols(); ++k) v += z(i, k) * u[k];
    twice += v * (v - 1);
  }
  return twice / 2;
}

inline Eigen::Index rank_of(const BinaryMatrix& z) {
  return Eigen::FullPivLU<Matrix>(z.as_real()).rank();
}

inline BinaryMatrix random_binary(std::mt19937_64& rng, Eigen::Index n,
                                  Eigen::Index k, double p = 0.5) {
  std::bernoulli_distribution coin(p);
  BinaryMatrix z(n, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) z.set(i, j, coin(rng));
  }
  return z;
}

inline BinaryMatrix random_full_rank_binary(std::mt19937_64& rng,
                                            Eigen::Index n, Eigen::Index k,
                                            double p = 0.5) {
  for (int tries = 0; tries < 1000; ++tries) {
    BinaryMatrix z = random_binary(rng, n, k, p);
    if (rank_of(z) == k) return z;
  }
  throw std::runtime_error("random_full_rank_binary: no luck");
}

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index r,
                            Eigen::Index c, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = normal(rng);
  }
  return m;
}

inline IntVector random_int_vector(std::mt19937_64& rng, Eigen::Index k,
                                   std::int64_t lo, std::int64_t hi) {
  std::uniform_int_distribution<std::int64_t> pick(lo, hi);
  IntVector u(k);
  for (Eigen::Index i = 0; i < k; ++i) u[i] = pick(rng);
  return u;
}

/// The literal sweep over all 2^N binary targets: candidate columns u with
/// Z u = b solved by least squares and verified exactly. Exponential in N;
/// usable for N <= 12 or so.
inline std::vector<Vector> candidate_columns_via_targets(
    const BinaryMatrix& z) {
  const Eigen::Index n = z.rows();
  const Eigen::Index k = z.cols();
  const Matrix zr = z.as_real();
  const auto solver = zr.completeOrthogonalDecomposition();
  std::vector<Vector> out;
  for (std::uint64_t bits = 1; bits < (std::uint64_t{1} << n); ++bits) {
    Vector b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      b[i] = (bits >> i) & 1 ? 1.0 : 0.0;
    }
    const Vector u = solver.solve(b);
    if ((zr * u - b).lpNorm<Eigen::Infinity>() <= 1e-8) out.push_back(u);
  }
  (void)k;
  return out;
}

}  // namespace oracles
