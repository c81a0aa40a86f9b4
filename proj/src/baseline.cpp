#include "lfmhop/baseline.hpp"

#include <bit>
#include <cmath>

#include "lfmhop/instrumentation.hpp"
#include "lfmhop/metrics.hpp"
#include "lfmhop/rng.hpp"
#include "lfmhop/solve.hpp"

namespace lfmhop {

namespace {

/// Exact per-row minimizer of z^T G z - 2 z.h over {0,1}^K (Gray-code walk).
std::uint32_t best_row_exhaustive(const Matrix& gram, const Vector& h) {
  const auto k = static_cast<unsigned>(gram.rows());
  std::vector<std::int8_t> z(k, 0);
  double quad = 0.0;
  double lin = 0.0;
  double best = 0.0;  // z = 0
  std::uint32_t best_bits = 0;
  std::uint32_t bits = 0;
  const std::uint64_t total = std::uint64_t{1} << k;
  for (std::uint64_t t = 1; t < total; ++t) {
    const unsigned b = static_cast<unsigned>(std::countr_zero(t));
    double dot = 0.0;
    if (bits & (1u << b)) {
      bits &= ~(1u << b);
      z[b] = 0;
      for (unsigned c = 0; c < k; ++c) {
        if (z[c]) dot += gram(b, c);
      }
      quad -= 2.0 * dot + gram(b, b);
      lin -= h[b];
    } else {
      for (unsigned c = 0; c < k; ++c) {
        if (z[c]) dot += gram(b, c);
      }
      quad += 2.0 * dot + gram(b, b);
      lin += h[b];
      bits |= (1u << b);
      z[b] = 1;
    }
    const double cost = quad - 2.0 * lin;
    if (cost < best) {
      best = cost;
      best_bits = bits;
    }
  }
  return best_bits;
}

std::uint32_t best_row_coordinate(const Matrix& gram, const Vector& h,
                                  std::uint32_t start) {
  const auto k = static_cast<unsigned>(gram.rows());
  std::uint32_t bits = start;
  for (unsigned sweep = 0; sweep < 4 * k + 8; ++sweep) {
    double best_delta = -1e-12;
    int best_bit = -1;
    for (unsigned b = 0; b < k; ++b) {
      double dot = 0.0;
      for (unsigned c = 0; c < k; ++c) {
        if (c != b && (bits & (1u << c))) dot += gram(b, c);
      }
      // delta of turning the bit on, relative to off
      const double on_minus_off = 2.0 * dot + gram(b, b) - 2.0 * h[b];
      const bool is_on = bits & (1u << b);
      const double delta = is_on ? -on_minus_off : on_minus_off;
      if (delta < best_delta) {
        best_delta = delta;
        best_bit = static_cast<int>(b);
      }
    }
    if (best_bit < 0) break;
    bits ^= (1u << static_cast<unsigned>(best_bit));
  }
  return bits;
}

}  // namespace

FitResult fit_map(const LfmInstance& inst, Eigen::Index k,
                  const BaselineConfig& cfg) {
  if (k < 1) throw ConfigError("fit_map: K must be >= 1");
  if (cfg.max_outer_iters < 1 || cfg.restarts < 1) {
    throw ConfigError("fit_map: positive iteration counts required");
  }
  if (cfg.z_update == ZUpdate::kExhaustiveRow && k > 16) {
    throw ConfigError("fit_map: exhaustive row updates require K <= 16");
  }
  const Eigen::Index n = inst.x.rows();

  FitResult best{BinaryMatrix(1, 1), FeatureMatrix(), {}, 0.0};
  bool have_best = false;
  for (std::size_t restart = 0; restart < cfg.restarts; ++restart) {
    Rng rng(derive_seed(cfg.rng_seed, restart));
    std::bernoulli_distribution coin(0.5);
    BinaryMatrix z(n, k);
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index c = 0; c < k; ++c) z.set(r, c, coin(rng));
    }

    FeatureMatrix w;
    std::vector<double> trace;
    double objective = 0.0;
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t outer = 0; outer < cfg.max_outer_iters; ++outer) {
      w = solve_w_given_z(inst, z);
      objective = map_objective(inst, z, w);
      trace.push_back(objective);

      const Matrix gram = w * w.transpose();
      const Matrix h = inst.x * w.transpose();  // row n: W x_n
      instrumentation::count_row_scan();
      for (Eigen::Index r = 0; r < n; ++r) {
        std::uint32_t bits = 0;
        if (cfg.z_update == ZUpdate::kExhaustiveRow) {
          bits = best_row_exhaustive(gram, h.row(r).transpose());
        } else {
          std::uint32_t start = 0;
          for (Eigen::Index c = 0; c < k; ++c) {
            if (z(r, c)) start |= (1u << static_cast<unsigned>(c));
          }
          bits = best_row_coordinate(gram, h.row(r).transpose(), start);
        }
        for (Eigen::Index c = 0; c < k; ++c) {
          z.set(r, c, bits & (1u << static_cast<unsigned>(c)));
        }
      }
      objective = map_objective(inst, z, w);
      trace.push_back(objective);

      if (previous - objective < cfg.convergence_tol) break;
      previous = objective;
    }
    w = solve_w_given_z(inst, z);
    objective = map_objective(inst, z, w);
    trace.push_back(objective);

    if (!have_best || objective < best.objective) {
      best = FitResult{std::move(z), std::move(w), std::move(trace),
                       objective};
      have_best = true;
    }
  }
  return best;
}

}  // namespace lfmhop
