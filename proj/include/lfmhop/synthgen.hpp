#pragma once

#include <string>
#include <vector>

#include "lfmhop/enumeration.hpp"
#include "lfmhop/types.hpp"

namespace lfmhop {

enum class GeneratorKind { kIid, kBias, kPdc };

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::kIid;
  double p = 0.5;  // Bernoulli incidence probability
  int n_pairs = 0;
  std::vector<PdcKind> pair_kinds;  // cycled over the planted pairs
  Eigen::Index k = 6;
  Eigen::Index n = 200;
  Eigen::Index image_side = 30;
  Eigen::Index patch_side = 7;
  double noise_sigma = 0.1;
  bool nonnegative_features = false;
  std::uint64_t rng_seed = 0;

  Eigen::Index d() const { return image_side * image_side; }

  /// Parses the JSON spec; missing/invalid fields raise ConfigError naming
  /// the field.
  static GeneratorSpec from_json(const std::string& text);
  std::string to_json() const;
};

/// K feature images: zero except a uniformly placed patch_side^2 patch of
/// standard normal draws (absolute values in nonnegative mode).
FeatureMatrix gen_features(const GeneratorSpec& spec);

/// Incidence matrix following the spec's generator kind; guaranteed rank K
/// (regenerated up to 100 times, then GenerationError).
BinaryMatrix gen_z(const GeneratorSpec& spec);

struct SyntheticInstance {
  Matrix x;
  BinaryMatrix z_star;
  FeatureMatrix w_star;
  LfmInstance inst;
};

/// X = Z* W* + noise, with tau = noise_sigma^2 (sigma_w fixed to 1).
SyntheticInstance gen_instance(const GeneratorSpec& spec);

/// The equivalent solution that complements feature i and absorbs it into
/// the always-active bias column: Z' = Z U, W' = U^-1 W with
/// w'_bias = w_bias + w_i and w'_i = -w_i.
std::pair<BinaryMatrix, FeatureMatrix> make_inverted_solution(
    const BinaryMatrix& z_star, const FeatureMatrix& w_star,
    Eigen::Index bias_index, Eigen::Index i);

}  // namespace lfmhop
