#pragma once

#include <vector>

#include "lfmhop/types.hpp"

namespace lfmhop {

enum class ZUpdate { kExhaustiveRow, kCoordinateFlip };

struct BaselineConfig {
  std::size_t max_outer_iters = 100;
  ZUpdate z_update = ZUpdate::kExhaustiveRow;  // exact rows, K <= 16
  std::size_t restarts = 1;
  std::uint64_t rng_seed = 0;
  double convergence_tol = 1e-9;  // absolute objective decrease
};

struct FitResult {
  BinaryMatrix z;
  FeatureMatrix w;
  std::vector<double> objective_trace;  // after every half-step, best restart
  double objective = 0.0;
};

/// Alternating MAP estimator: closed-form W for fixed Z, then per-row Z
/// updates (exhaustive over {0,1}^K, or best single-bit flips). The
/// objective is non-increasing along the trace; the best restart wins.
FitResult fit_map(const LfmInstance& inst, Eigen::Index k,
                  const BaselineConfig& cfg);

}  // namespace lfmhop
