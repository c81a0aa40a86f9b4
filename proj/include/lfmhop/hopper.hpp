#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lfmhop/sampler.hpp"
#include "lfmhop/types.hpp"

namespace lfmhop {

struct HopperConfig {
  /// Boltzmann inverse temperature; infinity selects greedy column moves.
  double beta = std::numeric_limits<double>::infinity();
  /// Weight of the binarity-defect penalty in the cost.
  double gamma = 1.0;
  std::size_t iterations = 1000;
  std::size_t resample_every = 50;
  std::uint64_t rng_seed = 0;
  /// Rank-1 determinant factors below this are treated as singular.
  double det_tolerance = 1e-9;
  /// Cached inverse/Omega are recomputed from scratch (and drift-checked)
  /// after this many applied column updates.
  std::size_t refresh_every = 100;
  /// When set, candidates are redrawn every resample_every iterations.
  std::optional<SamplerConfig> resample;

  bool greedy() const { return !std::isfinite(beta); }
};

struct TraceRow {
  std::size_t iteration = 0;
  double cost = 0.0;
  std::int64_t defect = 0;
  double prior_w = 0.0;
  Eigen::Index column = -1;
};

/// Full cost of a transform U on the given estimate:
/// tau ||U^-1 W||_F^2 + gamma f(Z U) - sum_nk [z' log pi + (1-z') log(1-pi)]
/// with z' = clamp01(Z U). The Bernoulli term is a constant when every
/// pi_k = 1/2 and is then omitted entirely.
double hopper_cost(const LfmInstance& inst, const BinaryMatrix& z_hat,
                   const FeatureMatrix& w_hat, const IntMatrix& u,
                   double gamma);

/// Markov chain over regular integer transforms U. One step replaces a
/// uniformly chosen column of U by a candidate column, sampled from the
/// Boltzmann law over the nonsingular replacements (greedy argmin when
/// beta is infinite, ties kept on the incumbent).
///
/// All per-candidate quantities come from cached U^-1, Omega = U^-1 W W^T
/// U^-T and P = U^-1 C (C = candidate columns), so a step costs
/// O(n_candidates K + K^2) and never rescans the N data rows.
class EquivalenceHopper {
 public:
  EquivalenceHopper(const SolutionPair& estimate, const LfmInstance& inst,
                    CandidateSet candidates, HopperConfig cfg);

  /// Performs one chain step; returns the column index that was considered.
  Eigen::Index step();

  /// Replaces the candidate pool by a fresh draw (current columns and unit
  /// vectors are re-injected so every neighborhood keeps the incumbent).
  void resample_candidates();

  // State accessors.
  const IntMatrix& transform() const { return u_; }
  const Matrix& transform_inverse() const { return u_inv_; }
  const Matrix& omega() const { return omega_; }
  double log_abs_det() const { return log_abs_det_; }
  std::int64_t defect_total() const { return defect_total_; }
  double norm_w_sq() const { return norm_w_sq_; }
  double prior_w_cost() const { return tau_ * norm_w_sq_; }
  double prior_z_cost() const { return include_prior_z_ ? prior_z_cost_ : 0.0; }
  double cost() const;
  std::size_t iterations_run() const { return iteration_; }
  std::size_t empty_neighbor_events() const { return empty_neighbor_events_; }
  const CandidateSet& candidates() const { return candidates_; }

  /// Multiplicative determinant factor of replacing column k with u_new,
  /// from the cached inverse: 1 + e_k^T U^-1 (u_new - u_k).
  double det_update_factor(Eigen::Index k, const IntVector& u_new) const;

  /// Delta of ||U^-1 W||_F^2 for the same replacement, plus the update
  /// direction v = U^-1 du / factor.
  std::pair<double, Vector> cost_update(Eigen::Index k,
                                        const IntVector& u_new) const;

  /// Applies a column replacement (must be nonsingular), updating every
  /// cache incrementally in O(K^2 + n_candidates K).
  void apply_column_update(Eigen::Index k, const IntVector& u_new);

  /// Recomputes U^-1, Omega, P, norms and defects from scratch; throws
  /// NumericalDriftError if any cache drifted beyond 1e-6.
  void refresh_from_scratch();

  /// State invariant suite (inverse consistency, trace identity, exact
  /// defects, regularity).
  void verify_invariants() const;

 private:
  std::size_t ensure_candidate(const IntVector& u);
  void append_candidate_columns(std::size_t first_new);
  double candidate_prior_z(std::size_t cand, Eigen::Index column) const;
  double candidate_cost_delta(std::size_t cand, Eigen::Index column,
                              double factor) const;
  void apply_by_index(Eigen::Index k, std::size_t cand);

  HopperConfig cfg_;
  Eigen::Index k_dim_;
  Eigen::Index n_rows_;
  double tau_;
  double gamma_;
  bool include_prior_z_ = false;
  Vector log_pi_;
  Vector log_1m_pi_;
  Matrix w_hat_;

  CandidateSet candidates_;
  Matrix cand_cols_;                 // K x n_c
  std::vector<std::int64_t> ones_;   // (Z^T 1) . u per candidate

  IntMatrix u_;
  Matrix u_inv_;
  Matrix omega_;
  Matrix p_;  // U^-1 * cand_cols_
  double norm_w_sq_ = 0.0;
  double log_abs_det_ = 0.0;
  std::int64_t defect_total_ = 0;
  double prior_z_cost_ = 0.0;
  std::vector<std::size_t> column_candidate_;  // candidate index per column

  Rng rng_;
  std::size_t iteration_ = 0;
  std::size_t updates_since_refresh_ = 0;
  std::uint64_t resample_round_ = 0;
  std::size_t empty_neighbor_events_ = 0;
};

struct HopResult {
  IntMatrix u_best;
  BinaryMatrix z_out;
  FeatureMatrix w_out;
  std::vector<TraceRow> trace;
  double best_cost = 0.0;
  bool clamped = false;
  double residual_before = 0.0;
  double residual_after = 0.0;
  std::uint64_t row_scans_in_loop = 0;
  std::size_t empty_neighbor_events = 0;
  std::vector<std::string> warnings;
};

/// Runs the chain for cfg.iterations steps from U = I and returns the
/// best-cost transform visited, the repaired solution pair and the
/// per-iteration trace.
HopResult hop(const BinaryMatrix& z_hat, const FeatureMatrix& w_hat,
              const LfmInstance& inst, const CandidateSet& candidates,
              const HopperConfig& cfg);

}  // namespace lfmhop
