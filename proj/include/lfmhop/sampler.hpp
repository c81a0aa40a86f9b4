#pragma once

#include <limits>
#include <memory>
#include <string>
#include <unordered_set>
#include <vector>

#include "lfmhop/binarity.hpp"
#include "lfmhop/rng.hpp"
#include "lfmhop/types.hpp"

namespace lfmhop {

struct SamplerConfig {
  std::size_t n_samples = 10000;
  /// Tolerance parameter of the discrete exponential law for f*;
  /// infinity selects strict mode (f* identically zero).
  double lambda = std::numeric_limits<double>::infinity();
  std::uint64_t rng_seed = 0;
  /// Rounded columns with any |entry| above this are rejected as artifacts
  /// of a nearly singular geometry.
  std::int64_t max_entry_abs = 8;

  bool strict() const { return !std::isfinite(lambda); }
};

/// Deduplicated pool of integer candidate columns u (u != 0) with their
/// exact defects f(Z u). The K unit vectors are always present.
class CandidateSet {
 public:
  explicit CandidateSet(std::shared_ptr<const SphereGeometry> geometry);

  /// Adds u unless it is a duplicate; the defect is recomputed exactly from
  /// the Gram caches. Returns true when inserted.
  bool add(const IntVector& u);

  std::size_t size() const { return columns_.size(); }
  const std::vector<IntVector>& columns() const { return columns_; }
  const std::vector<std::int64_t>& defects() const { return defects_; }
  const SphereGeometry& geometry() const { return *geometry_; }
  std::shared_ptr<const SphereGeometry> geometry_ptr() const {
    return geometry_;
  }

  bool contains(const IntVector& u) const;
  /// Index of u, or -1.
  std::ptrdiff_t index_of(const IntVector& u) const;

  /// Candidate columns as a K x size real matrix (hopper work layout).
  Matrix columns_real() const;

  std::string to_json() const;

 private:
  std::shared_ptr<const SphereGeometry> geometry_;
  std::vector<IntVector> columns_;
  std::vector<std::int64_t> defects_;
  std::unordered_set<std::string> keys_;
};

/// Draws f* >= 0 with P(f* = m) proportional to exp(-lambda m); strict mode
/// returns 0 without consuming randomness.
std::int64_t sample_f_star(double lambda, Rng& rng);

/// Uniform draw from the (K-1)-sphere of center mu and squared radius
/// ||mu||^2 + 2 f*.
Vector sample_sphere_point(const SphereGeometry& geom, std::int64_t f_star,
                           Rng& rng);

/// Algorithm: draw f*, draw s on the matching sphere, round u = Lambda s,
/// keep u iff it is nonzero, bounded, and its exact defect passes the
/// acceptance rule (== 0 strict, <= f* tolerant). The K unit columns are
/// injected unconditionally. f* and s use independent seed streams so the
/// strict and tolerant runs of one seed stay comparable.
CandidateSet sample_candidates(const BinaryMatrix& z,
                               const SamplerConfig& cfg);

/// Resample into an existing geometry (used by the hopper); `round` makes
/// successive resamples draw fresh streams deterministically.
CandidateSet sample_candidates(std::shared_ptr<const SphereGeometry> geometry,
                               const SamplerConfig& cfg,
                               std::uint64_t round = 0);

}  // namespace lfmhop
