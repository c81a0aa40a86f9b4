#include <doctest.h>

#include <random>
#include <set>

#include "lfmhop/binarity.hpp"
#include "lfmhop/enumeration.hpp"
#include "lfmhop/metrics.hpp"
#include "oracles.hpp"

using namespace lfmhop;

namespace {

BinaryMatrix all_patterns(Eigen::Index k) {
  const Eigen::Index n = Eigen::Index{1} << k;
  BinaryMatrix z(n, k);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) z.set(r, c, (r >> c) & 1);
  }
  return z;
}

std::set<std::vector<std::int64_t>> canonical_set(
    const std::vector<IntMatrix>& transforms) {
  std::set<std::vector<std::int64_t>> out;
  for (const auto& u : transforms) {
    std::vector<std::int64_t> flat;
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
      for (Eigen::Index i = 0; i < u.rows(); ++i) flat.push_back(u(i, j));
    }
    out.insert(std::move(flat));
  }
  return out;
}

/// Independent class count: all K-subsets of the oracle's candidate
/// columns, kept when the float determinant is clearly nonzero.
std::size_t count_classes_bruteforce(const std::vector<Vector>& columns,
                                     Eigen::Index k) {
  std::size_t count = 0;
  std::vector<std::size_t> idx(static_cast<std::size_t>(k));
  const std::size_t n = columns.size();
  if (n < static_cast<std::size_t>(k)) return 0;
  std::function<void(std::size_t, Eigen::Index)> rec =
      [&](std::size_t start, Eigen::Index depth) {
        if (depth == k) {
          Matrix m(k, k);
          for (Eigen::Index c = 0; c < k; ++c) {
            m.col(c) = columns[idx[static_cast<std::size_t>(c)]];
          }
          if (std::abs(Eigen::FullPivLU<Matrix>(m).determinant()) > 1e-7) {
            ++count;
          }
          return;
        }
        for (std::size_t i = start; i < n; ++i) {
          idx[static_cast<std::size_t>(depth)] = i;
          rec(i + 1, depth + 1);
        }
      };
  rec(0, 0);
  return count;
}

}  // namespace

TEST_CASE("integer determinant and rank") {
  std::mt19937_64 rng(59);
  IntMatrix m(3, 3);
  m << 2, 0, 1, 1, 1, 0, 0, 3, 1;
  CHECK(integer_determinant(m) == 5);
  CHECK(integer_rank(m) == 3);

  IntMatrix singular(3, 3);
  singular << 1, 2, 3, 2, 4, 6, 0, 1, 1;
  CHECK(integer_determinant(singular) == 0);
  CHECK(integer_rank(singular) == 2);

  for (int t = 0; t < 200; ++t) {
    IntMatrix r(4, 4);
    for (Eigen::Index i = 0; i < 4; ++i) {
      for (Eigen::Index j = 0; j < 4; ++j) {
        r(i, j) = oracles::random_int_vector(rng, 1, -4, 4)[0];
      }
    }
    const double dd = r.cast<double>().determinant();
    CHECK(integer_determinant(r) == doctest::Approx(dd).epsilon(1e-9));
  }
}

TEST_CASE("candidate column enumeration matches the 2^N target sweep") {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 40; ++t) {
    const Eigen::Index k = 2 + t % 2;
    const Eigen::Index n = k + 2 + t % 5;
    const auto z = oracles::random_full_rank_binary(rng, n, k);
    const auto got = enumerate_candidate_columns(z);
    const auto want = oracles::candidate_columns_via_targets(z);
    CHECK(got.integer_columns.size() + got.noninteger_columns.size() ==
          want.size());
    // Every integer column verifies exactly.
    for (const auto& u : got.integer_columns) {
      const IntVector zu = z.as_int() * u;
      for (Eigen::Index i = 0; i < n; ++i) {
        CHECK((zu[i] == 0 || zu[i] == 1));
      }
    }
  }
}

TEST_CASE("all 2^K rows leave only the trivial class") {
  for (Eigen::Index k = 2; k <= 3; ++k) {
    const auto z = all_patterns(k);
    const auto report = enumerate_equivalents(z);
    CHECK(report.count == 1);
    CHECK(report.noninteger_class_count == 0);
    CHECK(report.identifiable);
    // The only class is the identity (canonical form of any permutation).
    CHECK(canonical_set(report.transforms).count(
        canonical_set({IntMatrix::Identity(k, k)}).extract(
            *canonical_set({IntMatrix::Identity(k, k)}).begin()).value()));
  }
}

TEST_CASE("planted disjoint pair yields the R transforms") {
  // Columns: z_0 and z_1 never active together, both nonzero, rank 2.
  BinaryMatrix z(6, 2);
  z.set(0, 0, true);
  z.set(1, 0, true);
  z.set(2, 1, true);
  z.set(3, 1, true);
  const auto report = enumerate_equivalents(z);
  CHECK(report.count >= 3);

  const auto classes = canonical_set(report.transforms);
  const auto members = pdc_transforms(PdcKind::kPdc1, 0, 1, 2);
  IntMatrix r01(2, 2), r10(2, 2);
  r01 << 1, 0, 1, 1;
  r10 << 1, 1, 0, 1;
  CHECK(members[0] == r01);
  CHECK(members[1] == r10);
  for (const auto& u : members) {
    CHECK(classes.count(canonical_set({u}).extract(
        *canonical_set({u}).begin()).value()));
  }
  CHECK(classes.count(canonical_set({IntMatrix::Identity(2, 2)})
                          .extract(*canonical_set({IntMatrix::Identity(2, 2)})
                                        .begin())
                          .value()));
}

TEST_CASE("bias instance hits the family bound exactly") {
  // K = 3, third column all ones, first two covering {0,1}^2.
  BinaryMatrix z(12, 3);
  for (Eigen::Index r = 0; r < 12; ++r) {
    z.set(r, 0, (r >> 0) & 1);
    z.set(r, 1, (r >> 1) & 1);
    z.set(r, 2, true);
  }
  const auto report = enumerate_equivalents(z);
  CHECK(report.count == 8);  // (K+1) 2^{K-2}
  CHECK(report.noninteger_class_count == 0);
  CHECK_FALSE(report.identifiable);

  const auto family = bias_transform_family(3, 2);
  CHECK(family.size() == 8);
  CHECK(canonical_set(report.transforms) == canonical_set(family));
}

TEST_CASE("enumeration count matches a brute-force subset count") {
  std::mt19937_64 rng(67);
  for (int t = 0; t < 25; ++t) {
    const Eigen::Index k = 2 + t % 2;
    const Eigen::Index n = k + 3 + t % 4;
    const auto z = oracles::random_full_rank_binary(rng, n, k, 0.4);
    const auto report = enumerate_equivalents(z);
    const auto oracle_columns = oracles::candidate_columns_via_targets(z);
    CHECK(report.count + report.noninteger_class_count ==
          count_classes_bruteforce(oracle_columns, k));
  }
}

TEST_CASE("oracle soundness: enumerated transforms are regular and binary") {
  std::mt19937_64 rng(71);
  for (int t = 0; t < 50; ++t) {
    const Eigen::Index k = 2 + t % 3;
    const Eigen::Index n = k + 2 + t % 6;
    const auto z = oracles::random_full_rank_binary(rng, n, k);
    const auto report = enumerate_equivalents(z);
    CHECK(report.count >= 1);  // identity class
    for (const auto& u : report.transforms) {
      CHECK(integer_determinant(u) != 0);
      const IntMatrix zu = z.as_int() * u;
      for (Eigen::Index i = 0; i < zu.rows(); ++i) {
        for (Eigen::Index j = 0; j < zu.cols(); ++j) {
          CHECK((zu(i, j) == 0 || zu(i, j) == 1));
        }
      }
    }
  }
}

TEST_CASE("size limits are enforced") {
  const auto z = all_patterns(2);
  EnumerationLimits limits;
  limits.max_n = 3;
  CHECK_THROWS_AS(enumerate_equivalents(z, limits), LimitError);
}

TEST_CASE("pdc transform families") {
  std::mt19937_64 rng(73);

  SUBCASE("index validation") {
    CHECK_THROWS_AS(pdc_transforms(PdcKind::kPdc1, 1, 1, 3), DomainError);
    CHECK_THROWS_AS(pdc_transforms(PdcKind::kPdc2, 0, 3, 3), DomainError);
  }

  SUBCASE("determinants") {
    for (Eigen::Index k = 2; k <= 5; ++k) {
      const auto r = pdc_transforms(PdcKind::kPdc1, 0, k - 1, k);
      CHECK(integer_determinant(r[0]) == 1);
      CHECK(integer_determinant(r[1]) == 1);
      const auto s = pdc_transforms(PdcKind::kPdc2, 0, k - 1, k);
      CHECK(integer_determinant(s[0]) == 1);
      CHECK(integer_determinant(s[1]) == -1);
      const auto q = pdc_transforms(PdcKind::kPdc3, 0, k - 1, k);
      CHECK(integer_determinant(q[0]) == 1);
      CHECK(integer_determinant(q[1]) == -1);
    }
  }

  SUBCASE("transforms keep conforming Z binary (200 random instances)") {
    for (int t = 0; t < 200; ++t) {
      const Eigen::Index k = 3 + t % 3;
      const Eigen::Index n = 6 + t % 7;
      const Eigen::Index i = t % k;
      const Eigen::Index j = (i + 1 + t % (k - 1)) % k;
      const auto kind = static_cast<PdcKind>(t % 3);
      BinaryMatrix z = oracles::random_binary(rng, n, k);
      for (Eigen::Index r = 0; r < n; ++r) {
        // Repair the pair to satisfy the condition.
        switch (kind) {
          case PdcKind::kPdc1:
            if (z(r, i) && z(r, j)) z.set(r, j, false);
            break;
          case PdcKind::kPdc2:
            if (z(r, i) && !z(r, j)) z.set(r, j, true);
            break;
          case PdcKind::kPdc3:
            if (!z(r, i) && z(r, j)) z.set(r, j, false);
            break;
        }
      }
      for (const auto& u : pdc_transforms(kind, i, j, k)) {
        CHECK(defect(z.transformed(u)) == 0);
      }
    }
  }
}

TEST_CASE("bias transform family cardinalities") {
  CHECK(bias_transform_family(2, 1).size() == 3);
  CHECK(bias_transform_family(3, 2).size() == 8);
  CHECK(bias_transform_family(4, 3).size() == 20);
  CHECK(bias_transform_family(6, 5).size() == 112);

  std::mt19937_64 rng(79);
  const Eigen::Index k = 4;
  BinaryMatrix z = oracles::random_binary(rng, 20, k);
  for (Eigen::Index r = 0; r < 20; ++r) z.set(r, k - 1, true);
  for (const auto& u : bias_transform_family(k, k - 1)) {
    CHECK(defect(z.transformed(u)) == 0);
  }
}

TEST_CASE("integer closure certificates") {
  SUBCASE("distinct first appearances") {
    BinaryMatrix z(5, 3);
    z.set(0, 0, true);
    z.set(1, 1, true);
    z.set(2, 2, true);
    z.set(3, 0, true);
    z.set(3, 1, true);
    z.set(4, 2, true);
    const auto cert = certify_integer_closure(z);
    CHECK(cert.kind == CertificationKind::kFirstAppearance);
    // zeta is lower triangular with unit diagonal under the column order.
    for (Eigen::Index i = 0; i < 3; ++i) {
      CHECK(cert.zeta(i, i) == 1);
      for (Eigen::Index j = i + 1; j < 3; ++j) CHECK(cert.zeta(i, j) == 0);
    }
    CHECK(integer_determinant(cert.zeta) == 1);
  }

  SUBCASE("ones row forces the submatrix search") {
    BinaryMatrix z(5, 3);
    for (Eigen::Index c = 0; c < 3; ++c) z.set(0, c, true);
    z.set(1, 0, true);
    z.set(2, 1, true);
    z.set(3, 2, true);
    z.set(4, 1, true);
    const auto cert = certify_integer_closure(z);
    CHECK(cert.kind == CertificationKind::kUnimodularSubmatrix);
    const auto det = integer_determinant(cert.zeta);
    CHECK((det == 1 || det == -1));
  }

  SUBCASE("appendix-style staircase gives a triangular witness") {
    // Feature k first appears at row k; later rows arbitrary.
    std::mt19937_64 rng(83);
    for (int t = 0; t < 20; ++t) {
      const Eigen::Index k = 3 + t % 3;
      BinaryMatrix z = oracles::random_binary(rng, k + 5, k);
      for (Eigen::Index r = 0; r < k; ++r) {
        for (Eigen::Index c = 0; c < k; ++c) {
          z.set(r, c, c == r);  // staircase head
        }
      }
      const auto cert = certify_integer_closure(z);
      CHECK(cert.kind == CertificationKind::kFirstAppearance);
      CHECK(std::abs(integer_determinant(cert.zeta)) == 1);
    }
  }

  SUBCASE("rank-deficient input is rejected") {
    BinaryMatrix z(3, 2);
    z.set(0, 0, true);
    z.set(1, 0, true);
    CHECK_THROWS_AS(certify_integer_closure(z), RankError);
  }
}

TEST_CASE("chained subsumption composes") {
  // z_0 <= z_1 <= z_2 plus independent columns; the (0,2) pair inherits
  // the condition and the class count exceeds 3^2.
  std::mt19937_64 rng(89);
  BinaryMatrix z(14, 3);
  std::bernoulli_distribution coin(0.5);
  for (Eigen::Index r = 0; r < 14; ++r) {
    const bool z0 = coin(rng);
    const bool z1 = z0 || coin(rng);
    const bool z2 = z1 || coin(rng);
    z.set(r, 0, z0);
    z.set(r, 1, z1);
    z.set(r, 2, z2);
  }
  // Ensure rank 3 and all strict levels appear.
  z.set(0, 0, true);
  z.set(0, 1, true);
  z.set(0, 2, true);
  z.set(1, 0, false);
  z.set(1, 1, true);
  z.set(1, 2, true);
  z.set(2, 0, false);
  z.set(2, 1, false);
  z.set(2, 2, true);
  z.set(3, 0, false);
  z.set(3, 1, false);
  z.set(3, 2, false);
  const auto report = enumerate_equivalents(z);
  CHECK(report.count > 9);
}
