#include "lfmhop/hopper.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>

#include "lfmhop/instrumentation.hpp"
#include "lfmhop/metrics.hpp"
#include "lfmhop/solve.hpp"

namespace lfmhop {

namespace {

BinaryMatrix clamp01(const IntMatrix& m, bool* changed) {
  BinaryMatrix::Storage s(m.rows(), m.cols());
  bool any = false;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const std::int64_t v = m(i, j);
      const std::int64_t c = std::clamp<std::int64_t>(v, 0, 1);
      any = any || (c != v);
      s(i, j) = static_cast<std::int8_t>(c);
    }
  }
  if (changed) *changed = any;
  return BinaryMatrix(std::move(s));
}

}  // namespace

double hopper_cost(const LfmInstance& inst, const BinaryMatrix& z_hat,
                   const FeatureMatrix& w_hat, const IntMatrix& u,
                   double gamma) {
  if (u.rows() != u.cols() || u.rows() != z_hat.cols() ||
      w_hat.rows() != z_hat.cols()) {
    throw DimensionError("hopper_cost: K-sized arguments disagree");
  }
  const Matrix y = u.cast<double>().partialPivLu().solve(w_hat);
  const IntMatrix zu = z_hat.transformed(u);
  double cost = inst.tau * y.squaredNorm() +
                gamma * static_cast<double>(defect(zu));
  if (!inst.uniform_prior()) {
    if (inst.pi.size() != z_hat.cols()) {
      throw DimensionError("hopper_cost: pi has wrong length");
    }
    bool changed = false;
    const BinaryMatrix clamped = clamp01(zu, &changed);
    instrumentation::count_row_scan();
    for (Eigen::Index k = 0; k < clamped.cols(); ++k) {
      const double lp = std::log(inst.pi[k]);
      const double lq = std::log1p(-inst.pi[k]);
      for (Eigen::Index n = 0; n < clamped.rows(); ++n) {
        cost -= clamped(n, k) ? lp : lq;
      }
    }
  }
  return cost;
}

EquivalenceHopper::EquivalenceHopper(const SolutionPair& estimate,
                                     const LfmInstance& inst,
                                     CandidateSet candidates,
                                     HopperConfig cfg)
    : cfg_(std::move(cfg)),
      k_dim_(estimate.z.cols()),
      n_rows_(estimate.z.rows()),
      tau_(inst.tau),
      gamma_(cfg_.gamma),
      w_hat_(estimate.w),
      candidates_(std::move(candidates)),
      rng_(derive_seed(cfg_.rng_seed, 0x686f70ULL)) {
  if (cfg_.iterations < 1) throw ConfigError("HopperConfig: iterations >= 1");
  if (cfg_.resample_every < 1 || cfg_.refresh_every < 1) {
    throw ConfigError("HopperConfig: periods must be >= 1");
  }
  if (cfg_.det_tolerance <= 0.0) {
    throw ConfigError("HopperConfig: det_tolerance must be > 0");
  }
  if (w_hat_.rows() != k_dim_) {
    throw DimensionError("EquivalenceHopper: W has wrong row count");
  }
  if (candidates_.geometry().k != k_dim_) {
    throw DimensionError("EquivalenceHopper: candidate geometry mismatch");
  }
  if (!inst.uniform_prior()) {
    if (inst.pi.size() != k_dim_) {
      throw DimensionError("EquivalenceHopper: pi has wrong length");
    }
    include_prior_z_ = true;
    log_pi_ = inst.pi.array().log();
    log_1m_pi_ = (1.0 - inst.pi.array()).log();
  }

  u_ = IntMatrix::Identity(k_dim_, k_dim_);
  u_inv_ = Matrix::Identity(k_dim_, k_dim_);
  omega_ = w_hat_ * w_hat_.transpose();
  norm_w_sq_ = w_hat_.squaredNorm();
  log_abs_det_ = 0.0;
  defect_total_ = 0;

  column_candidate_.resize(static_cast<std::size_t>(k_dim_));
  for (Eigen::Index k = 0; k < k_dim_; ++k) {
    IntVector e = IntVector::Zero(k_dim_);
    e[k] = 1;
    candidates_.add(e);
  }
  cand_cols_ = candidates_.columns_real();
  ones_.clear();
  const auto& cols = candidates_.columns();
  ones_.reserve(cols.size());
  for (const auto& c : cols) {
    ones_.push_back(candidates_.geometry().col_sum.dot(c));
  }
  p_ = cand_cols_;  // U = I
  for (Eigen::Index k = 0; k < k_dim_; ++k) {
    IntVector e = IntVector::Zero(k_dim_);
    e[k] = 1;
    column_candidate_[static_cast<std::size_t>(k)] =
        static_cast<std::size_t>(candidates_.index_of(e));
  }
  if (include_prior_z_) {
    prior_z_cost_ = 0.0;
    for (Eigen::Index k = 0; k < k_dim_; ++k) {
      prior_z_cost_ +=
          candidate_prior_z(column_candidate_[static_cast<std::size_t>(k)], k);
    }
  }
}

double EquivalenceHopper::cost() const {
  return tau_ * norm_w_sq_ + gamma_ * static_cast<double>(defect_total_) +
         (include_prior_z_ ? prior_z_cost_ : 0.0);
}

double EquivalenceHopper::candidate_prior_z(std::size_t cand,
                                            Eigen::Index column) const {
  const auto ones = static_cast<double>(ones_[cand]);
  return -(ones * log_pi_[column] +
           (static_cast<double>(n_rows_) - ones) * log_1m_pi_[column]);
}

double EquivalenceHopper::candidate_cost_delta(std::size_t cand,
                                               Eigen::Index column,
                                               double factor) const {
  const auto ci = p_.col(static_cast<Eigen::Index>(cand));
  const double v_norm_sq =
      (ci.squaredNorm() - 2.0 * ci[column] + 1.0) / (factor * factor);
  const double omega_dot =
      (omega_.row(column).dot(ci) - omega_(column, column)) / factor;
  const double delta_w = v_norm_sq * omega_(column, column) - 2.0 * omega_dot;
  const std::size_t cur = column_candidate_[static_cast<std::size_t>(column)];
  double delta = tau_ * delta_w +
                 gamma_ * static_cast<double>(candidates_.defects()[cand] -
                                              candidates_.defects()[cur]);
  if (include_prior_z_) {
    delta += candidate_prior_z(cand, column) - candidate_prior_z(cur, column);
  }
  return delta;
}

Eigen::Index EquivalenceHopper::step() {
  std::uniform_int_distribution<Eigen::Index> pick_column(0, k_dim_ - 1);
  const Eigen::Index k = pick_column(rng_);
  const std::size_t cur = column_candidate_[static_cast<std::size_t>(k)];
  const std::size_t n_c = candidates_.size();

  // Nonsingular replacements of column k, with their cost deltas.
  std::vector<std::size_t> feasible;
  std::vector<double> deltas;
  feasible.reserve(n_c);
  deltas.reserve(n_c);
  for (std::size_t i = 0; i < n_c; ++i) {
    const double factor = p_(k, static_cast<Eigen::Index>(i));
    if (std::abs(factor) < cfg_.det_tolerance) continue;
    feasible.push_back(i);
    deltas.push_back(i == cur ? 0.0 : candidate_cost_delta(i, k, factor));
  }
  if (feasible.empty()) {
    ++empty_neighbor_events_;
    ++iteration_;
    return k;
  }

  std::size_t chosen = cur;
  if (cfg_.greedy()) {
    double best = 0.0;  // incumbent's delta; ties keep the current column
    for (std::size_t t = 0; t < feasible.size(); ++t) {
      if (deltas[t] < best) {
        best = deltas[t];
        chosen = feasible[t];
      }
    }
  } else {
    const double min_delta = *std::min_element(deltas.begin(), deltas.end());
    std::vector<double> weights(feasible.size());
    for (std::size_t t = 0; t < feasible.size(); ++t) {
      weights[t] = std::exp(-cfg_.beta * (deltas[t] - min_delta));
    }
    std::discrete_distribution<std::size_t> pick(weights.begin(),
                                                 weights.end());
    chosen = feasible[pick(rng_)];
  }

  if (chosen != cur) apply_by_index(k, chosen);
  ++iteration_;
  return k;
}

void EquivalenceHopper::apply_by_index(Eigen::Index k, std::size_t cand) {
  const double factor = p_(k, static_cast<Eigen::Index>(cand));
  if (std::abs(factor) < cfg_.det_tolerance) {
    throw DomainError("apply_column_update: singular replacement");
  }
  const std::size_t cur = column_candidate_[static_cast<std::size_t>(k)];

  Vector v = p_.col(static_cast<Eigen::Index>(cand));
  v[k] -= 1.0;
  v /= factor;

  const double v_norm_sq = v.squaredNorm();
  const double omega_dot = omega_.row(k).dot(v);
  norm_w_sq_ += v_norm_sq * omega_(k, k) - 2.0 * omega_dot;
  defect_total_ += candidates_.defects()[cand] - candidates_.defects()[cur];
  if (include_prior_z_) {
    prior_z_cost_ += candidate_prior_z(cand, k) - candidate_prior_z(cur, k);
  }
  log_abs_det_ += std::log(std::abs(factor));

  u_.col(k) = candidates_.columns()[cand];
  // U'^-1 = (I - v e_k^T) U^-1, same for P; Omega' = V Omega V^T.
  const Eigen::RowVectorXd u_inv_row = u_inv_.row(k);
  u_inv_.noalias() -= v * u_inv_row;
  const Eigen::RowVectorXd p_row = p_.row(k);
  p_.noalias() -= v * p_row;
  const Eigen::RowVectorXd omega_row = omega_.row(k);
  omega_.noalias() -= v * omega_row;
  const Vector omega_col = omega_.col(k);
  omega_.noalias() -= omega_col * v.transpose();

  column_candidate_[static_cast<std::size_t>(k)] = cand;
  if (++updates_since_refresh_ >= cfg_.refresh_every) refresh_from_scratch();
}

double EquivalenceHopper::det_update_factor(Eigen::Index k,
                                            const IntVector& u_new) const {
  if (u_new.size() != k_dim_ || k < 0 || k >= k_dim_) {
    throw DimensionError("det_update_factor: bad arguments");
  }
  const Vector du = (u_new - u_.col(k)).cast<double>();
  return 1.0 + u_inv_.row(k).dot(du);
}

std::pair<double, Vector> EquivalenceHopper::cost_update(
    Eigen::Index k, const IntVector& u_new) const {
  const Vector du = (u_new - u_.col(k)).cast<double>();
  const Vector y = u_inv_ * du;
  const double factor = 1.0 + y[k];
  if (std::abs(factor) < cfg_.det_tolerance) {
    throw DomainError("cost_update: singular replacement");
  }
  const Vector v = y / factor;
  const double delta =
      v.squaredNorm() * omega_(k, k) - 2.0 * omega_.row(k).dot(v);
  return {delta, v};
}

void EquivalenceHopper::apply_column_update(Eigen::Index k,
                                            const IntVector& u_new) {
  apply_by_index(k, ensure_candidate(u_new));
}

std::size_t EquivalenceHopper::ensure_candidate(const IntVector& u) {
  const std::ptrdiff_t idx = candidates_.index_of(u);
  if (idx >= 0) return static_cast<std::size_t>(idx);
  if (!candidates_.add(u)) {
    throw DomainError("ensure_candidate: zero column");
  }
  append_candidate_columns(candidates_.size() - 1);
  return candidates_.size() - 1;
}

void EquivalenceHopper::append_candidate_columns(std::size_t first_new) {
  const auto n_c = static_cast<Eigen::Index>(candidates_.size());
  cand_cols_.conservativeResize(k_dim_, n_c);
  p_.conservativeResize(k_dim_, n_c);
  for (auto i = static_cast<Eigen::Index>(first_new); i < n_c; ++i) {
    const auto& col = candidates_.columns()[static_cast<std::size_t>(i)];
    cand_cols_.col(i) = col.cast<double>();
    p_.col(i) = u_inv_ * cand_cols_.col(i);
    ones_.push_back(candidates_.geometry().col_sum.dot(col));
  }
}

void EquivalenceHopper::resample_candidates() {
  if (!cfg_.resample) return;
  ++resample_round_;
  CandidateSet fresh = sample_candidates(candidates_.geometry_ptr(),
                                         *cfg_.resample, resample_round_);
  // Keep the incumbent columns so every neighborhood stays nonempty.
  for (Eigen::Index k = 0; k < k_dim_; ++k) fresh.add(u_.col(k));
  candidates_ = std::move(fresh);
  cand_cols_ = candidates_.columns_real();
  p_ = u_inv_ * cand_cols_;
  ones_.clear();
  for (const auto& c : candidates_.columns()) {
    ones_.push_back(candidates_.geometry().col_sum.dot(c));
  }
  for (Eigen::Index k = 0; k < k_dim_; ++k) {
    const std::ptrdiff_t idx = candidates_.index_of(u_.col(k));
    column_candidate_[static_cast<std::size_t>(k)] =
        static_cast<std::size_t>(idx);
  }
}

void EquivalenceHopper::refresh_from_scratch() {
  const Matrix ud = u_.cast<double>();
  const Eigen::PartialPivLU<Matrix> lu(ud);
  const Matrix fresh_inv = lu.inverse();
  const Matrix y = lu.solve(w_hat_);
  const double fresh_norm = y.squaredNorm();
  const Matrix fresh_omega = y * y.transpose();
  const double fresh_log_det =
      lu.matrixLU().diagonal().array().abs().log().sum();

  const double inv_err = (fresh_inv - u_inv_).norm();
  if (inv_err > 1e-6 * (1.0 + fresh_inv.norm())) {
    throw NumericalDriftError("hopper: cached inverse drifted by " +
                              std::to_string(inv_err));
  }
  if (std::abs(fresh_norm - norm_w_sq_) > 1e-6 * (1.0 + fresh_norm)) {
    throw NumericalDriftError("hopper: cached |U^-1 W|^2 drifted");
  }
  if ((fresh_omega - omega_).norm() > 1e-6 * (1.0 + fresh_omega.norm())) {
    throw NumericalDriftError("hopper: cached Omega drifted");
  }
  if (std::abs(fresh_log_det - log_abs_det_) > 1e-6 * (1.0 + std::abs(fresh_log_det))) {
    throw NumericalDriftError("hopper: cached log|det| drifted");
  }
  u_inv_ = fresh_inv;
  omega_ = fresh_omega;
  norm_w_sq_ = fresh_norm;
  log_abs_det_ = fresh_log_det;
  p_ = u_inv_ * cand_cols_;
  std::int64_t fresh_defect = 0;
  for (Eigen::Index k = 0; k < k_dim_; ++k) {
    fresh_defect += column_defect(candidates_.geometry().gram,
                                  candidates_.geometry().col_sum, u_.col(k));
  }
  if (fresh_defect != defect_total_) {
    throw NumericalDriftError("hopper: cached defect total inconsistent");
  }
  updates_since_refresh_ = 0;
}

void EquivalenceHopper::verify_invariants() const {
  const Matrix prod = u_.cast<double>() * u_inv_;
  if ((prod - Matrix::Identity(k_dim_, k_dim_)).norm() > 1e-7) {
    throw NumericalDriftError("hopper invariant: U U^-1 != I");
  }
  const double tr = omega_.trace();
  if (std::abs(norm_w_sq_ - tr) > 1e-6 * (1.0 + std::abs(tr))) {
    throw NumericalDriftError("hopper invariant: |U^-1 W|^2 != tr(Omega)");
  }
  std::int64_t fresh_defect = 0;
  for (Eigen::Index k = 0; k < k_dim_; ++k) {
    fresh_defect += column_defect(candidates_.geometry().gram,
                                  candidates_.geometry().col_sum, u_.col(k));
  }
  if (fresh_defect != defect_total_) {
    throw NumericalDriftError("hopper invariant: defect total stale");
  }
  if (log_abs_det_ < std::log(cfg_.det_tolerance)) {
    throw NumericalDriftError("hopper invariant: |det U| below tolerance");
  }
}

HopResult hop(const BinaryMatrix& z_hat, const FeatureMatrix& w_hat,
              const LfmInstance& inst, const CandidateSet& candidates,
              const HopperConfig& cfg) {
  HopResult result{IntMatrix(),       BinaryMatrix(1, 1), FeatureMatrix(),
                   {},                0.0,                false,
                   0.0,               0.0,                0,
                   0,                 {}};
  {
    Eigen::ColPivHouseholderQR<Matrix> qr(w_hat.transpose());
    qr.setThreshold(1e-10);
    if (qr.rank() < z_hat.cols()) {
      result.warnings.push_back("rank(W) < K: class repair may be ambiguous");
    }
  }
  const SolutionPair estimate = SolutionPair::make(inst.x, z_hat, w_hat);
  result.residual_before = estimate.residual;

  EquivalenceHopper hopper(estimate, inst, candidates, cfg);
  result.u_best = hopper.transform();
  result.best_cost = hopper.cost();
  result.trace.reserve(cfg.iterations);

  const std::uint64_t scans_before = instrumentation::row_scans();
  for (std::size_t m = 1; m <= cfg.iterations; ++m) {
    if (cfg.resample && m > 1 && (m - 1) % cfg.resample_every == 0) {
      hopper.resample_candidates();
    }
    const Eigen::Index k = hopper.step();
    const double cost = hopper.cost();
    result.trace.push_back(
        {m, cost, hopper.defect_total(), hopper.prior_w_cost(), k});
    if (cost < result.best_cost) {
      result.best_cost = cost;
      result.u_best = hopper.transform();
    }
  }
  result.row_scans_in_loop = instrumentation::row_scans() - scans_before;
  result.empty_neighbor_events = hopper.empty_neighbor_events();

  const IntMatrix zu = z_hat.transformed(result.u_best);
  result.z_out = clamp01(zu, &result.clamped);
  if (result.clamped) {
    result.w_out = solve_w_given_z(inst, result.z_out);
  } else {
    result.w_out = result.u_best.cast<double>().partialPivLu().solve(w_hat);
  }
  result.residual_after = residual(inst.x, result.z_out, result.w_out);
  return result;
}

}  // namespace lfmhop
