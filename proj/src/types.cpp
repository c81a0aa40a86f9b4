#include "lfmhop/types.hpp"

#include <cmath>
#include <sstream>

#include "lfmhop/instrumentation.hpp"
#include "lfmhop/metrics.hpp"

namespace lfmhop {

namespace detail {

void require_same_shape(const char* what, Eigen::Index r1, Eigen::Index c1,
                        Eigen::Index r2, Eigen::Index c2) {
  if (r1 != r2 || c1 != c2) {
    std::ostringstream os;
    os << what << ": shape mismatch, " << r1 << "x" << c1 << " vs " << r2
       << "x" << c2;
    throw DimensionError(os.str());
  }
}

void require_finite(const char* what, const Matrix& m) {
  if (!m.allFinite()) {
    throw DomainError(std::string(what) + ": non-finite entry");
  }
}

}  // namespace detail

BinaryMatrix::BinaryMatrix(Eigen::Index rows, Eigen::Index cols)
    : m_(Storage::Zero(rows, cols)) {
  check_shape();
}

BinaryMatrix::BinaryMatrix(Storage entries) : m_(std::move(entries)) {
  check_shape();
  for (Eigen::Index j = 0; j < m_.cols(); ++j) {
    for (Eigen::Index i = 0; i < m_.rows(); ++i) {
      if (m_(i, j) != 0 && m_(i, j) != 1) {
        throw DomainError("BinaryMatrix: entry not in {0,1}");
      }
    }
  }
}

void BinaryMatrix::check_shape() const {
  if (m_.rows() < 1 || m_.cols() < 1) {
    throw DimensionError("BinaryMatrix: N >= 1 and K >= 1 required");
  }
}

BinaryMatrix BinaryMatrix::from_real(const Matrix& m) {
  instrumentation::count_row_scan();
  Storage s(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double v = m(i, j);
      if (v != 0.0 && v != 1.0) {
        throw DomainError("BinaryMatrix: entry not exactly 0 or 1");
      }
      s(i, j) = static_cast<std::int8_t>(v);
    }
  }
  return BinaryMatrix(std::move(s));
}

BinaryMatrix BinaryMatrix::from_int(const IntMatrix& m) {
  instrumentation::count_row_scan();
  Storage s(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const std::int64_t v = m(i, j);
      if (v != 0 && v != 1) {
        throw DomainError("BinaryMatrix: entry not in {0,1}");
      }
      s(i, j) = static_cast<std::int8_t>(v);
    }
  }
  return BinaryMatrix(std::move(s));
}

Matrix BinaryMatrix::as_real() const {
  instrumentation::count_row_scan();
  return m_.cast<double>();
}

IntMatrix BinaryMatrix::as_int() const {
  instrumentation::count_row_scan();
  return m_.cast<std::int64_t>();
}

IntMatrix BinaryMatrix::gram() const {
  instrumentation::count_row_scan();
  const IntMatrix zi = m_.cast<std::int64_t>();
  return zi.transpose() * zi;
}

IntVector BinaryMatrix::col_sums() const {
  instrumentation::count_row_scan();
  return m_.cast<std::int64_t>().colwise().sum().transpose();
}

IntMatrix BinaryMatrix::transformed(const IntMatrix& u) const {
  if (u.rows() != cols()) {
    throw DimensionError("transformed: U rows must equal Z cols");
  }
  instrumentation::count_row_scan();
  return m_.cast<std::int64_t>() * u;
}

std::vector<std::uint64_t> BinaryMatrix::column_bits(Eigen::Index j) const {
  const auto n = static_cast<std::size_t>(rows());
  std::vector<std::uint64_t> bits((n + 63) / 64, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (m_(static_cast<Eigen::Index>(i), j)) {
      bits[i / 64] |= (std::uint64_t{1} << (i % 64));
    }
  }
  return bits;
}

LfmInstance LfmInstance::make(Matrix x, double sigma_x, double sigma_w,
                              Vector pi) {
  detail::require_finite("LfmInstance.x", x);
  if (sigma_w <= 0.0) throw DomainError("LfmInstance: sigma_w must be > 0");
  if (sigma_x < 0.0) throw DomainError("LfmInstance: sigma_x must be >= 0");
  LfmInstance inst;
  inst.x = std::move(x);
  inst.sigma_x = sigma_x;
  inst.sigma_w = sigma_w;
  inst.tau = (sigma_x * sigma_x) / (sigma_w * sigma_w);
  for (Eigen::Index k = 0; k < pi.size(); ++k) {
    if (!(pi[k] > 0.0 && pi[k] < 1.0)) {
      throw DomainError("LfmInstance: pi_k must lie in (0,1)");
    }
  }
  inst.pi = std::move(pi);
  return inst;
}

LfmInstance LfmInstance::from_tau(Matrix x, double tau, Vector pi) {
  if (tau < 0.0) throw DomainError("LfmInstance: tau must be >= 0");
  return make(std::move(x), std::sqrt(tau), 1.0, std::move(pi));
}

bool LfmInstance::uniform_prior() const {
  for (Eigen::Index k = 0; k < pi.size(); ++k) {
    if (pi[k] != 0.5) return false;
  }
  return true;
}

SolutionPair SolutionPair::make(const Matrix& x, BinaryMatrix z,
                                FeatureMatrix w) {
  SolutionPair p{std::move(z), std::move(w), 0.0, IntMatrix(), IntVector()};
  p.residual = lfmhop::residual(x, p.z, p.w);
  p.gram = p.z.gram();
  p.col_sum = p.z.col_sums();
  return p;
}

void SolutionPair::verify(const Matrix& x) const {
  const double fresh = lfmhop::residual(x, z, w);
  if (std::abs(fresh - residual) > 1e-9 * (1.0 + fresh)) {
    throw NumericalDriftError("SolutionPair: cached residual stale");
  }
  if (gram != z.gram() || col_sum != z.col_sums()) {
    throw NumericalDriftError("SolutionPair: cached Gram data stale");
  }
}

}  // namespace lfmhop
