#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "lfmhop/errors.hpp"

namespace lfmhop {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

/// K x D matrix of latent features (row k = feature k, data units).
using FeatureMatrix = Matrix;

/// Dense N x K incidence matrix with entries in {0,1}.
class BinaryMatrix {
 public:
  using Storage = Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic>;

  BinaryMatrix(Eigen::Index rows, Eigen::Index cols);
  explicit BinaryMatrix(Storage entries);

  /// Validates that every entry of `m` is exactly 0 or 1.
  static BinaryMatrix from_real(const Matrix& m);
  static BinaryMatrix from_int(const IntMatrix& m);

  Eigen::Index rows() const { return m_.rows(); }
  Eigen::Index cols() const { return m_.cols(); }

  int operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  void set(Eigen::Index i, Eigen::Index j, bool v) {
    m_(i, j) = static_cast<std::int8_t>(v);
  }

  const Storage& entries() const { return m_; }

  Matrix as_real() const;
  IntMatrix as_int() const;

  /// Z^T Z in exact integer arithmetic.
  IntMatrix gram() const;
  /// Z^T 1 in exact integer arithmetic.
  IntVector col_sums() const;
  /// Z * U over the integers.
  IntMatrix transformed(const IntMatrix& u) const;

  /// Column j packed into 64-bit words, LSB-first; for set operations.
  std::vector<std::uint64_t> column_bits(Eigen::Index j) const;

  bool operator==(const BinaryMatrix& other) const { return m_ == other.m_; }

 private:
  void check_shape() const;
  Storage m_;
};

/// Observed data plus model hyperparameters.
struct LfmInstance {
  Matrix x;
  double tau = 0.0;
  double sigma_x = 0.0;
  double sigma_w = 1.0;
  Vector pi;  // empty means pi_k = 1/2 for all k

  /// Checks tau == sigma_x^2/sigma_w^2 (1e-12 relative) and 0 < pi_k < 1.
  static LfmInstance make(Matrix x, double sigma_x, double sigma_w,
                          Vector pi = Vector());
  /// Convenience: sigma_w = 1, sigma_x = sqrt(tau).
  static LfmInstance from_tau(Matrix x, double tau, Vector pi = Vector());

  bool uniform_prior() const;
};

/// An estimate (Z, W) with cached residual and Gram data.
struct SolutionPair {
  BinaryMatrix z;
  FeatureMatrix w;
  double residual = 0.0;
  IntMatrix gram;     // Z^T Z
  IntVector col_sum;  // Z^T 1

  static SolutionPair make(const Matrix& x, BinaryMatrix z, FeatureMatrix w);

  /// Re-derives the caches and throws NumericalDriftError on mismatch
  /// (residual 1e-9 relative; Gram data exact).
  void verify(const Matrix& x) const;
};

namespace detail {
void require_same_shape(const char* what, Eigen::Index r1, Eigen::Index c1,
                        Eigen::Index r2, Eigen::Index c2);
void require_finite(const char* what, const Matrix& m);
}  // namespace detail

}  // namespace lfmhop
