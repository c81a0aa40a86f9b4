#pragma once

#include <optional>
#include <vector>

#include "lfmhop/types.hpp"

namespace lfmhop {

/// Pairwise dependency conditions between feature columns i and j,
/// quantified over every row:
///   kPdc1: z_i = 1 implies z_j = 0 (disjointness)
///   kPdc2: z_i = 1 implies z_j = 1 (i subsumed by j)
///   kPdc3: z_i = 0 implies z_j = 0 (j subsumed by i)
enum class PdcKind { kPdc1, kPdc2, kPdc3 };

const char* pdc_kind_name(PdcKind kind);

enum class CertificationKind {
  kFirstAppearance,      // features first appear on distinct rows
  kUnimodularSubmatrix,  // some K x K submatrix has |det| = 1
  kNotFound,
};

/// Witness that every regular transform keeping ZU binary is integer.
struct Certificate {
  CertificationKind kind = CertificationKind::kNotFound;
  IntMatrix zeta;                       // the witnessing K x K submatrix
  std::vector<Eigen::Index> rows;       // rows of Z forming zeta
  std::vector<Eigen::Index> col_order;  // column order applied to zeta
  bool certified() const { return kind != CertificationKind::kNotFound; }
};

struct CertifyOptions {
  Eigen::Index exhaustive_n_limit = 16;
  std::size_t random_tries = 20000;
  std::uint64_t seed = 0;
};

Certificate certify_integer_closure(const BinaryMatrix& z,
                                    const CertifyOptions& opts = {});

/// All u != 0 with Z u in {0,1}^N, found by sweeping the 2^K binary patterns
/// on K independent rows (u is pinned by those rows since rank(Z) = K).
/// Columns that verify exactly over the integers are separated from the
/// (rare, uncertified) non-integer ones.
struct CandidateColumns {
  std::vector<IntVector> integer_columns;
  std::vector<Vector> noninteger_columns;
};

CandidateColumns enumerate_candidate_columns(const BinaryMatrix& z);

struct AssemblyResult {
  std::size_t count = 0;
  std::vector<IntMatrix> transforms;  // canonical forms, when collected
  bool capped = false;
};

/// Counts (and optionally collects) the regular K-subsets of the given
/// integer columns; each subset is one equivalence class representative with
/// columns in lexicographic order.
AssemblyResult assemble_integer_classes(const std::vector<IntVector>& columns,
                                        Eigen::Index k, bool collect,
                                        std::size_t node_cap = 50'000'000);

struct EnumerationLimits {
  Eigen::Index max_n = 16;
  Eigen::Index max_k = 5;
};

struct EquivalenceClassReport {
  std::vector<IntMatrix> transforms;  // canonical integer transforms
  std::size_t count = 0;              // integer classes
  std::size_t noninteger_class_count = 0;
  bool identifiable = false;
  CertificationKind certification = CertificationKind::kNotFound;
  bool capped = false;
};

/// Exhaustive enumeration of the transform classes of Z (quotiented by
/// column permutations). Requires rank(Z) = K and sizes within limits.
EquivalenceClassReport enumerate_equivalents(const BinaryMatrix& z,
                                             const EnumerationLimits& limits =
                                                 {});

/// The two non-identity transforms guaranteed by a pairwise dependency
/// condition on columns (i, j); each is the identity with one column
/// replaced. Determinants are +1 and -1 for the second kind's reflection.
std::vector<IntMatrix> pdc_transforms(PdcKind kind, Eigen::Index i,
                                      Eigen::Index j, Eigen::Index k);

/// All regular transforms whose columns come from
/// {e_1..e_K} union {e_bias - e_i, i != bias}; cardinality (K+1) 2^{K-2}.
std::vector<IntMatrix> bias_transform_family(Eigen::Index k,
                                             Eigen::Index bias_index);

/// Columns sorted lexicographically (entry 0 most significant).
IntMatrix canonical_form(const IntMatrix& u);

/// Exact determinant by fraction-free (Bareiss) elimination.
std::int64_t integer_determinant(IntMatrix m);
Eigen::Index integer_rank(IntMatrix m);

}  // namespace lfmhop
