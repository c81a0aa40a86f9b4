#include <doctest.h>

#include <random>

#include "lfmhop/binarity.hpp"
#include "oracles.hpp"

using namespace lfmhop;

TEST_CASE("defect basics") {
  std::mt19937_64 rng(41);
  const auto z = oracles::random_binary(rng, 6, 4);
  CHECK(defect(z.as_int()) == 0);

  IntMatrix m = IntMatrix::Zero(3, 3);
  m(1, 1) = 2;
  CHECK(defect(m) == 1);
  m.setZero();
  m(0, 2) = -1;
  m(2, 0) = 1;
  CHECK(defect(m) == 1);

  Matrix fractional = Matrix::Zero(2, 2);
  fractional(0, 0) = 0.5;
  CHECK_THROWS_AS(defect(fractional), DomainError);
}

TEST_CASE("column defect equals the elementwise defect of Z u") {
  std::mt19937_64 rng(43);

  SUBCASE("worked example") {
    BinaryMatrix z(3, 2);
    z.set(0, 0, true);
    z.set(1, 1, true);
    z.set(2, 0, true);
    z.set(2, 1, true);
    IntVector u(2);
    u << 1, 1;
    CHECK(column_defect(z.gram(), z.col_sums(), u) == 1);
  }

  SUBCASE("unit vectors give zero") {
    const auto z = oracles::random_binary(rng, 8, 4);
    for (Eigen::Index k = 0; k < 4; ++k) {
      IntVector e = IntVector::Zero(4);
      e[k] = 1;
      CHECK(column_defect(z.gram(), z.col_sums(), e) == 0);
    }
  }

  SUBCASE("1000 random cases match the elementwise oracle") {
    for (int t = 0; t < 1000; ++t) {
      const Eigen::Index n = 3 + t % 10;
      const Eigen::Index k = 2 + t % 4;
      const auto z = oracles::random_binary(rng, n, k);
      const IntVector u = oracles::random_int_vector(rng, k, -3, 3);
      CHECK(column_defect(z.gram(), z.col_sums(), u) ==
            oracles::defect_column_elementwise(z, u));
    }
  }

  SUBCASE("zero defect with u != 0 implies Z u is binary") {
    int hits = 0;
    for (int t = 0; t < 2000; ++t) {
      const auto z = oracles::random_binary(rng, 5, 3);
      const IntVector u = oracles::random_int_vector(rng, 3, -2, 2);
      if (u.isZero()) continue;
      if (column_defect(z.gram(), z.col_sums(), u) != 0) continue;
      ++hits;
      const IntVector zu = z.as_int() * u;
      for (Eigen::Index i = 0; i < zu.size(); ++i) {
        CHECK((zu[i] == 0 || zu[i] == 1));
      }
    }
    CHECK(hits > 50);
  }

  SUBCASE("defect counts out-of-range entries when -1 <= ZU <= 2") {
    int used = 0;
    for (int t = 0; t < 4000 && used < 200; ++t) {
      const auto z = oracles::random_binary(rng, 5, 3);
      IntMatrix u(3, 2);
      for (Eigen::Index i = 0; i < 3; ++i) {
        for (Eigen::Index j = 0; j < 2; ++j) {
          u(i, j) = oracles::random_int_vector(rng, 1, -1, 1)[0];
        }
      }
      const IntMatrix zu = z.as_int() * u;
      if (zu.minCoeff() < -1 || zu.maxCoeff() > 2) continue;
      ++used;
      std::int64_t outside = 0;
      for (Eigen::Index i = 0; i < zu.rows(); ++i) {
        for (Eigen::Index j = 0; j < zu.cols(); ++j) {
          outside += zu(i, j) != 0 && zu(i, j) != 1;
        }
      }
      CHECK(defect(zu) == outside);
    }
    CHECK(used == 200);
  }
}

TEST_CASE("sphere geometry") {
  std::mt19937_64 rng(47);

  SUBCASE("identity Z") {
    BinaryMatrix z(4, 4);
    for (Eigen::Index i = 0; i < 4; ++i) z.set(i, i, true);
    const auto geom = build_geometry(z);
    CHECK(geom.mu_norm_sq == doctest::Approx(4.0 / 4.0));
  }

  SUBCASE("all 2^K rows, K = 2") {
    BinaryMatrix z(4, 2);
    z.set(1, 1, true);
    z.set(2, 0, true);
    z.set(3, 0, true);
    z.set(3, 1, true);
    const auto geom = build_geometry(z);
    CHECK(geom.gram(0, 0) == 2);
    CHECK(geom.gram(0, 1) == 1);
    CHECK(geom.gram(1, 0) == 1);
    CHECK(geom.gram(1, 1) == 2);
    CHECK(geom.col_sum[0] == 2);
    CHECK(geom.col_sum[1] == 2);
  }

  SUBCASE("Lambda Lambda^T inverts the Gram matrix") {
    for (int t = 0; t < 30; ++t) {
      const auto z = oracles::random_full_rank_binary(rng, 9, 4);
      const auto geom = build_geometry(z);
      const Matrix id = geom.lambda * geom.lambda.transpose() *
                        geom.gram.cast<double>();
      CHECK((id - Matrix::Identity(4, 4)).norm() < 1e-7);
      CHECK((geom.lambda_inv * geom.lambda - Matrix::Identity(4, 4)).norm() <
            1e-8);
    }
  }

  SUBCASE("mu norm is basis independent") {
    const auto z = oracles::random_full_rank_binary(rng, 8, 3);
    const auto geom = build_geometry(z);
    // 1/4 * 1^T Z (Z^T Z)^-1 Z^T 1, computed directly.
    const Matrix gram_inv = geom.gram.cast<double>().inverse();
    const Vector c = geom.col_sum.cast<double>();
    const double direct = 0.25 * c.dot(gram_inv * c);
    CHECK(geom.mu_norm_sq == doctest::Approx(direct).epsilon(1e-8));

    // Right-multiplying Lambda by a rotation leaves ||mu|| unchanged.
    for (int t = 0; t < 10; ++t) {
      const Matrix q = Eigen::HouseholderQR<Matrix>(
                           oracles::random_matrix(rng, 3, 3))
                           .householderQ();
      const Matrix lam2 = geom.lambda * q;
      const Vector mu2 = 0.5 * lam2.transpose() * c;
      CHECK(mu2.squaredNorm() ==
            doctest::Approx(geom.mu_norm_sq).epsilon(1e-8));
    }
  }

  SUBCASE("rank-deficient Z is rejected with the deficient values") {
    BinaryMatrix z(4, 2);
    z.set(0, 0, true);
    z.set(0, 1, true);
    z.set(1, 0, true);
    z.set(1, 1, true);
    try {
      build_geometry(z);
      FAIL("expected RankError");
    } catch (const RankError& e) {
      CHECK(std::string(e.what()).find("singular value") !=
            std::string::npos);
    }
  }
}

TEST_CASE("sphere route agrees with the integer route") {
  std::mt19937_64 rng(53);

  SUBCASE("u = 0 gives zero") {
    const auto z = oracles::random_full_rank_binary(rng, 7, 3);
    const auto geom = build_geometry(z);
    CHECK(sphere_defect(geom, IntVector::Zero(3)) ==
          doctest::Approx(0.0).epsilon(1e-9));
  }

  SUBCASE("binary Z u lands on the zero sphere") {
    const auto z = oracles::random_full_rank_binary(rng, 7, 3);
    const auto geom = build_geometry(z);
    for (Eigen::Index k = 0; k < 3; ++k) {
      IntVector e = IntVector::Zero(3);
      e[k] = 1;
      CHECK(std::abs(sphere_defect(geom, e)) < 1e-6);
    }
  }

  SUBCASE("1000 random cross-checks within 1e-6") {
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const Eigen::Index n = 5 + t % 8;
      const Eigen::Index k = 2 + t % 3;
      const auto z = oracles::random_full_rank_binary(rng, n, k);
      const auto geom = build_geometry(z);
      const IntVector u = oracles::random_int_vector(rng, k, -3, 3);
      const double via_sphere = sphere_defect(geom, u);
      const auto exact = column_defect(geom.gram, geom.col_sum, u);
      worst = std::max(worst,
                       std::abs(via_sphere - static_cast<double>(exact)));
    }
    CHECK(worst <= 1e-6);
  }
}
