#include "lfmhop/enumeration.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "lfmhop/instrumentation.hpp"
#include "lfmhop/rng.hpp"

namespace lfmhop {

const char* pdc_kind_name(PdcKind kind) {
  switch (kind) {
    case PdcKind::kPdc1:
      return "pdc1";
    case PdcKind::kPdc2:
      return "pdc2";
    case PdcKind::kPdc3:
      return "pdc3";
  }
  return "?";
}

std::int64_t integer_determinant(IntMatrix m) {
  if (m.rows() != m.cols()) {
    throw DimensionError("integer_determinant: square matrix required");
  }
  const Eigen::Index n = m.rows();
  std::int64_t prev = 1;
  int sign = 1;
  for (Eigen::Index p = 0; p < n; ++p) {
    Eigen::Index pivot = -1;
    for (Eigen::Index i = p; i < n; ++i) {
      if (m(i, p) != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) return 0;
    if (pivot != p) {
      m.row(pivot).swap(m.row(p));
      sign = -sign;
    }
    for (Eigen::Index i = p + 1; i < n; ++i) {
      for (Eigen::Index j = p + 1; j < n; ++j) {
        m(i, j) = (m(p, p) * m(i, j) - m(i, p) * m(p, j)) / prev;
      }
      m(i, p) = 0;
    }
    prev = m(p, p);
  }
  return sign * m(n - 1, n - 1);
}

Eigen::Index integer_rank(IntMatrix m) {
  // Fraction-free elimination. A pivotless column is linearly dependent on
  // the earlier ones; drop it and restart so the exact-division property of
  // Bareiss pivots is preserved.
  while (true) {
    const Eigen::Index rows = m.rows();
    const Eigen::Index cols = m.cols();
    std::int64_t prev = 1;
    Eigen::Index row = 0;
    Eigen::Index dependent_col = -1;
    for (Eigen::Index col = 0; col < cols; ++col) {
      if (row == rows) break;
      Eigen::Index pivot = -1;
      for (Eigen::Index i = row; i < rows; ++i) {
        if (m(i, col) != 0) {
          pivot = i;
          break;
        }
      }
      if (pivot < 0) {
        dependent_col = col;
        break;
      }
      if (pivot != row) m.row(pivot).swap(m.row(row));
      for (Eigen::Index i = row + 1; i < rows; ++i) {
        for (Eigen::Index j = col + 1; j < cols; ++j) {
          m(i, j) = (m(row, col) * m(i, j) - m(i, col) * m(row, j)) / prev;
        }
        m(i, col) = 0;
      }
      prev = m(row, col);
      ++row;
    }
    if (dependent_col < 0) return std::min(row, cols);
    IntMatrix reduced(rows, cols - 1);
    reduced.leftCols(dependent_col) = m.leftCols(dependent_col);
    reduced.rightCols(cols - 1 - dependent_col) =
        m.rightCols(cols - 1 - dependent_col);
    m = std::move(reduced);
  }
}

namespace {

bool column_lex_less(const IntVector& a, const IntVector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

std::vector<Eigen::Index> pivot_rows(const Matrix& z, double tol) {
  // Row-pivoted elimination over a copy; records which original rows carry
  // the pivots.
  Matrix work = z;
  const Eigen::Index n = work.rows();
  const Eigen::Index k = work.cols();
  std::vector<Eigen::Index> row_of(static_cast<std::size_t>(n));
  std::iota(row_of.begin(), row_of.end(), 0);
  std::vector<Eigen::Index> picked;
  Eigen::Index top = 0;
  for (Eigen::Index col = 0; col < k && top < n; ++col) {
    Eigen::Index best = -1;
    double best_abs = tol;
    for (Eigen::Index i = top; i < n; ++i) {
      const double a = std::abs(work(i, col));
      if (a > best_abs) {
        best_abs = a;
        best = i;
      }
    }
    if (best < 0) continue;
    work.row(best).swap(work.row(top));
    std::swap(row_of[static_cast<std::size_t>(best)],
              row_of[static_cast<std::size_t>(top)]);
    for (Eigen::Index i = top + 1; i < n; ++i) {
      const double f = work(i, col) / work(top, col);
      if (f != 0.0) work.row(i) -= f * work.row(top);
    }
    picked.push_back(row_of[static_cast<std::size_t>(top)]);
    ++top;
  }
  return picked;
}

}  // namespace

CandidateColumns enumerate_candidate_columns(const BinaryMatrix& z) {
  const Eigen::Index n = z.rows();
  const Eigen::Index k = z.cols();
  const Matrix zr = z.as_real();
  const auto rows = pivot_rows(zr, 1e-10);
  if (static_cast<Eigen::Index>(rows.size()) < k) {
    throw RankError("enumerate_candidate_columns: rank(Z) < K");
  }
  Matrix zeta(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    zeta.row(i) = zr.row(rows[static_cast<std::size_t>(i)]);
  }
  const Eigen::PartialPivLU<Matrix> lu(zeta);
  const IntMatrix zi = z.as_int();

  CandidateColumns out;
  const std::uint64_t patterns = std::uint64_t{1} << k;
  for (std::uint64_t bits = 1; bits < patterns; ++bits) {
    Vector b = Vector::Zero(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      if (bits & (std::uint64_t{1} << i)) b[i] = 1.0;
    }
    const Vector u = lu.solve(b);
    // u is pinned by the pivot rows; keep it iff Z u is binary everywhere.
    instrumentation::count_row_scan();
    const Vector zu = zr * u;
    bool ok = true;
    for (Eigen::Index i = 0; i < n && ok; ++i) {
      const double v = zu[i];
      ok = std::abs(v) <= 1e-8 || std::abs(v - 1.0) <= 1e-8;
    }
    if (!ok) continue;

    bool integral = true;
    IntVector ui(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      const double r = std::nearbyint(u[i]);
      if (std::abs(u[i] - r) > 1e-6) {
        integral = false;
        break;
      }
      ui[i] = static_cast<std::int64_t>(r);
    }
    if (integral) {
      const IntVector zui = zi * ui;
      for (Eigen::Index i = 0; i < n && integral; ++i) {
        integral = zui[i] == 0 || zui[i] == 1;
      }
    }
    if (integral) {
      out.integer_columns.push_back(std::move(ui));
    } else {
      out.noninteger_columns.push_back(u);
    }
  }
  std::sort(out.integer_columns.begin(), out.integer_columns.end(),
            column_lex_less);
  return out;
}

AssemblyResult assemble_integer_classes(const std::vector<IntVector>& columns,
                                        Eigen::Index k, bool collect,
                                        std::size_t node_cap) {
  AssemblyResult result;
  if (static_cast<Eigen::Index>(columns.size()) < k) return result;
  for (const auto& c : columns) {
    if (c.size() != k) {
      throw DimensionError("assemble_integer_classes: column length != K");
    }
  }
  std::vector<IntVector> sorted = columns;
  std::sort(sorted.begin(), sorted.end(), column_lex_less);

  std::vector<std::size_t> chosen;
  chosen.reserve(static_cast<std::size_t>(k));
  IntMatrix partial(k, k);
  std::size_t nodes = 0;

  auto independent = [&](std::size_t depth) {
    IntMatrix sub = partial.leftCols(static_cast<Eigen::Index>(depth));
    return integer_rank(std::move(sub)) ==
           static_cast<Eigen::Index>(depth);
  };

  auto emit = [&]() {
    ++result.count;
    if (collect) {
      result.transforms.push_back(partial);  // columns already in lex order
    }
  };

  auto dfs = [&](auto&& self, std::size_t start, std::size_t depth) -> void {
    if (depth == static_cast<std::size_t>(k)) {
      emit();
      return;
    }
    const std::size_t remaining = static_cast<std::size_t>(k) - depth;
    for (std::size_t i = start; i + remaining <= sorted.size(); ++i) {
      if (result.capped) return;
      if (++nodes > node_cap) {
        result.capped = true;
        return;
      }
      partial.col(static_cast<Eigen::Index>(depth)) = sorted[i];
      if (!independent(depth + 1)) continue;
      self(self, i + 1, depth + 1);
    }
  };
  dfs(dfs, 0, 0);
  return result;
}

namespace {

/// Count of regular K-subsets over mixed real/integer columns; float rank.
std::size_t count_real_classes(const std::vector<Vector>& columns,
                               Eigen::Index k, std::size_t node_cap) {
  if (static_cast<Eigen::Index>(columns.size()) < k) return 0;
  std::size_t count = 0;
  std::size_t nodes = 0;
  Matrix partial(k, k);
  auto independent = [&](std::size_t depth) {
    const Matrix sub = partial.leftCols(static_cast<Eigen::Index>(depth));
    Eigen::ColPivHouseholderQR<Matrix> qr(sub);
    qr.setThreshold(1e-8);
    return qr.rank() == static_cast<Eigen::Index>(depth);
  };
  auto dfs = [&](auto&& self, std::size_t start, std::size_t depth) -> void {
    if (depth == static_cast<std::size_t>(k)) {
      ++count;
      return;
    }
    const std::size_t remaining = static_cast<std::size_t>(k) - depth;
    for (std::size_t i = start; i + remaining <= columns.size(); ++i) {
      if (++nodes > node_cap) return;
      partial.col(static_cast<Eigen::Index>(depth)) = columns[i];
      if (!independent(depth + 1)) continue;
      self(self, i + 1, depth + 1);
    }
  };
  dfs(dfs, 0, 0);
  return count;
}

}  // namespace

EquivalenceClassReport enumerate_equivalents(const BinaryMatrix& z,
                                             const EnumerationLimits& limits) {
  if (z.rows() > limits.max_n || z.cols() > limits.max_k) {
    throw LimitError("enumerate_equivalents: instance exceeds limits (N <= " +
                     std::to_string(limits.max_n) + ", K <= " +
                     std::to_string(limits.max_k) + ")");
  }
  EquivalenceClassReport report;
  report.certification = certify_integer_closure(z).kind;

  const auto candidates = enumerate_candidate_columns(z);
  auto assembly =
      assemble_integer_classes(candidates.integer_columns, z.cols(), true);
  report.count = assembly.count;
  report.transforms = std::move(assembly.transforms);
  report.capped = assembly.capped;

  if (!candidates.noninteger_columns.empty()) {
    std::vector<Vector> all;
    all.reserve(candidates.integer_columns.size() +
                candidates.noninteger_columns.size());
    for (const auto& c : candidates.integer_columns) {
      all.push_back(c.cast<double>());
    }
    for (const auto& c : candidates.noninteger_columns) all.push_back(c);
    const std::size_t total = count_real_classes(all, z.cols(), 50'000'000);
    report.noninteger_class_count =
        total > report.count ? total - report.count : 0;
  }
  report.identifiable =
      (report.count + report.noninteger_class_count) == 1 && !report.capped;
  return report;
}

std::vector<IntMatrix> pdc_transforms(PdcKind kind, Eigen::Index i,
                                      Eigen::Index j, Eigen::Index k) {
  if (i == j) throw DomainError("pdc_transforms: indices must differ");
  if (i < 0 || j < 0 || i >= k || j >= k) {
    throw DomainError("pdc_transforms: index out of range");
  }
  auto with_column = [&](Eigen::Index col, const IntVector& v) {
    IntMatrix u = IntMatrix::Identity(k, k);
    u.col(col) = v;
    return u;
  };
  IntVector ei = IntVector::Zero(k);
  ei[i] = 1;
  IntVector ej = IntVector::Zero(k);
  ej[j] = 1;
  switch (kind) {
    case PdcKind::kPdc1:
      // z_i and z_j disjoint: z_i + z_j stays binary.
      return {with_column(i, ei + ej), with_column(j, ei + ej)};
    case PdcKind::kPdc2:
      // z_i <= z_j: z_j - z_i stays binary.
      return {with_column(j, ej - ei), with_column(i, ej - ei)};
    case PdcKind::kPdc3:
      // z_j <= z_i: z_i - z_j stays binary.
      return {with_column(i, ei - ej), with_column(j, ei - ej)};
  }
  throw DomainError("pdc_transforms: unknown kind");
}

std::vector<IntMatrix> bias_transform_family(Eigen::Index k,
                                             Eigen::Index bias_index) {
  if (k < 2) throw DomainError("bias_transform_family: K >= 2 required");
  if (bias_index < 0 || bias_index >= k) {
    throw DomainError("bias_transform_family: bias index out of range");
  }
  std::vector<IntVector> pool;
  for (Eigen::Index i = 0; i < k; ++i) {
    IntVector e = IntVector::Zero(k);
    e[i] = 1;
    pool.push_back(std::move(e));
  }
  for (Eigen::Index i = 0; i < k; ++i) {
    if (i == bias_index) continue;
    IntVector v = IntVector::Zero(k);
    v[bias_index] = 1;
    v[i] = -1;
    pool.push_back(std::move(v));
  }
  auto assembly = assemble_integer_classes(pool, k, true);
  return std::move(assembly.transforms);
}

IntMatrix canonical_form(const IntMatrix& u) {
  std::vector<IntVector> cols;
  cols.reserve(static_cast<std::size_t>(u.cols()));
  for (Eigen::Index j = 0; j < u.cols(); ++j) cols.push_back(u.col(j));
  std::sort(cols.begin(), cols.end(), column_lex_less);
  IntMatrix out(u.rows(), u.cols());
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    out.col(j) = cols[static_cast<std::size_t>(j)];
  }
  return out;
}

namespace {

std::optional<Certificate> first_appearance_certificate(
    const BinaryMatrix& z) {
  const Eigen::Index k = z.cols();
  std::vector<Eigen::Index> first(static_cast<std::size_t>(k), -1);
  for (Eigen::Index col = 0; col < k; ++col) {
    for (Eigen::Index row = 0; row < z.rows(); ++row) {
      if (z(row, col)) {
        first[static_cast<std::size_t>(col)] = row;
        break;
      }
    }
    if (first[static_cast<std::size_t>(col)] < 0) return std::nullopt;
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return first[static_cast<std::size_t>(a)] <
           first[static_cast<std::size_t>(b)];
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (first[static_cast<std::size_t>(order[i])] ==
        first[static_cast<std::size_t>(order[i - 1])]) {
      return std::nullopt;
    }
  }
  Certificate cert;
  cert.kind = CertificationKind::kFirstAppearance;
  cert.col_order = order;
  cert.zeta = IntMatrix(k, k);
  for (Eigen::Index r = 0; r < k; ++r) {
    const auto row = first[static_cast<std::size_t>(
        order[static_cast<std::size_t>(r)])];
    cert.rows.push_back(row);
    for (Eigen::Index c = 0; c < k; ++c) {
      cert.zeta(r, c) = z(row, order[static_cast<std::size_t>(c)]);
    }
  }
  return cert;
}

std::optional<Certificate> unimodular_from_rows(
    const BinaryMatrix& z, const std::vector<Eigen::Index>& rows) {
  const Eigen::Index k = z.cols();
  IntMatrix zeta(k, k);
  for (Eigen::Index r = 0; r < k; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) {
      zeta(r, c) = z(rows[static_cast<std::size_t>(r)], c);
    }
  }
  const std::int64_t det = integer_determinant(zeta);
  if (det != 1 && det != -1) return std::nullopt;
  Certificate cert;
  cert.kind = CertificationKind::kUnimodularSubmatrix;
  cert.zeta = std::move(zeta);
  cert.rows = rows;
  cert.col_order.resize(static_cast<std::size_t>(k));
  std::iota(cert.col_order.begin(), cert.col_order.end(), 0);
  return cert;
}

}  // namespace

Certificate certify_integer_closure(const BinaryMatrix& z,
                                    const CertifyOptions& opts) {
  const Eigen::Index n = z.rows();
  const Eigen::Index k = z.cols();
  if (integer_rank(z.as_int()) < k) {
    throw RankError("certify_integer_closure: rank(Z) < K");
  }
  if (auto cert = first_appearance_certificate(z)) return *cert;

  // Condition (b): look for a unimodular K x K submatrix.
  if (n <= opts.exhaustive_n_limit) {
    std::vector<Eigen::Index> comb(static_cast<std::size_t>(k));
    std::iota(comb.begin(), comb.end(), 0);
    while (true) {
      if (auto cert = unimodular_from_rows(z, comb)) return *cert;
      // next combination
      Eigen::Index pos = k - 1;
      while (pos >= 0 && comb[static_cast<std::size_t>(pos)] ==
                             n - k + pos) {
        --pos;
      }
      if (pos < 0) break;
      ++comb[static_cast<std::size_t>(pos)];
      for (Eigen::Index p = pos + 1; p < k; ++p) {
        comb[static_cast<std::size_t>(p)] =
            comb[static_cast<std::size_t>(p - 1)] + 1;
      }
    }
  } else {
    // Pivot rows of the elimination first, then bounded random search.
    const auto pivots = pivot_rows(z.as_real(), 1e-10);
    if (static_cast<Eigen::Index>(pivots.size()) == k) {
      if (auto cert = unimodular_from_rows(z, pivots)) return *cert;
    }
    Rng rng(derive_seed(opts.seed, 0x6365727469ULL));
    std::vector<Eigen::Index> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    for (std::size_t t = 0; t < opts.random_tries; ++t) {
      for (Eigen::Index i = 0; i < k; ++i) {
        std::uniform_int_distribution<Eigen::Index> pick(i, n - 1);
        std::swap(all[static_cast<std::size_t>(i)],
                  all[static_cast<std::size_t>(pick(rng))]);
      }
      std::vector<Eigen::Index> rows(all.begin(), all.begin() + k);
      std::sort(rows.begin(), rows.end());
      if (auto cert = unimodular_from_rows(z, rows)) return *cert;
    }
  }
  Certificate cert;
  cert.kind = CertificationKind::kNotFound;
  return cert;
}

}  // namespace lfmhop
