#include "lfmhop/synthgen.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "lfmhop/instrumentation.hpp"
#include "lfmhop/rng.hpp"

namespace lfmhop {

namespace {

constexpr std::uint64_t kFeatureStream = 1;
constexpr std::uint64_t kIncidenceStream = 2;
constexpr std::uint64_t kNoiseStream = 3;

PdcKind parse_pdc_kind(const std::string& name) {
  if (name == "pdc1") return PdcKind::kPdc1;
  if (name == "pdc2") return PdcKind::kPdc2;
  if (name == "pdc3") return PdcKind::kPdc3;
  throw ConfigError("generator spec: unknown pdc kind '" + name + "'");
}

bool pair_ok(PdcKind kind, int zi, int zj) {
  switch (kind) {
    case PdcKind::kPdc1:
      return !(zi == 1 && zj == 1);
    case PdcKind::kPdc2:
      return !(zi == 1 && zj == 0);
    case PdcKind::kPdc3:
      return !(zi == 0 && zj == 1);
  }
  return false;
}

BinaryMatrix draw_z(const GeneratorSpec& spec, Rng& rng) {
  std::bernoulli_distribution coin(spec.p);
  BinaryMatrix::Storage s(spec.n, spec.k);
  for (Eigen::Index r = 0; r < spec.n; ++r) {
    for (Eigen::Index c = 0; c < spec.k; ++c) {
      s(r, c) = static_cast<std::int8_t>(coin(rng));
    }
  }
  if (spec.kind == GeneratorKind::kBias) {
    s.col(spec.k - 1).setOnes();
  } else if (spec.kind == GeneratorKind::kPdc) {
    for (int pair = 0; pair < spec.n_pairs; ++pair) {
      const Eigen::Index i = 2 * pair;
      const Eigen::Index j = 2 * pair + 1;
      const PdcKind kind =
          spec.pair_kinds.empty()
              ? PdcKind::kPdc1
              : spec.pair_kinds[static_cast<std::size_t>(pair) %
                                spec.pair_kinds.size()];
      for (Eigen::Index r = 0; r < spec.n; ++r) {
        while (!pair_ok(kind, s(r, i), s(r, j))) {
          s(r, i) = static_cast<std::int8_t>(coin(rng));
          s(r, j) = static_cast<std::int8_t>(coin(rng));
        }
      }
    }
  }
  return BinaryMatrix(std::move(s));
}

}  // namespace

GeneratorSpec GeneratorSpec::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("generator spec: invalid JSON: ") +
                      e.what());
  }
  auto require = [&](const char* field) -> const nlohmann::json& {
    if (!j.contains(field)) {
      throw ConfigError(std::string("generator spec: missing field '") +
                        field + "'");
    }
    return j.at(field);
  };
  GeneratorSpec spec;
  const std::string kind = require("generator").get<std::string>();
  if (kind == "iid") {
    spec.kind = GeneratorKind::kIid;
  } else if (kind == "bias") {
    spec.kind = GeneratorKind::kBias;
  } else if (kind == "pdc") {
    spec.kind = GeneratorKind::kPdc;
  } else {
    throw ConfigError("generator spec: unknown generator '" + kind + "'");
  }
  spec.k = require("K").get<Eigen::Index>();
  spec.n = require("N").get<Eigen::Index>();
  spec.p = j.value("p", 0.5);
  spec.image_side = j.value("image_side", Eigen::Index{30});
  spec.patch_side = j.value("patch_side", Eigen::Index{7});
  spec.noise_sigma = j.value("noise_sigma", 0.1);
  spec.nonnegative_features = j.value("nonnegative_features", false);
  spec.rng_seed = j.value("rng_seed", std::uint64_t{0});
  if (spec.kind == GeneratorKind::kPdc) {
    spec.n_pairs = require("n_pairs").get<int>();
    if (j.contains("pair_kinds")) {
      for (const auto& name : j.at("pair_kinds")) {
        spec.pair_kinds.push_back(parse_pdc_kind(name.get<std::string>()));
      }
    }
  }
  if (spec.k < 1 || spec.n < 1) {
    throw ConfigError("generator spec: K and N must be positive");
  }
  if (spec.patch_side > spec.image_side) {
    throw ConfigError("generator spec: patch does not fit in image");
  }
  if (spec.noise_sigma < 0.0) {
    throw ConfigError("generator spec: noise_sigma must be >= 0");
  }
  if (!(spec.p > 0.0 && spec.p < 1.0)) {
    throw ConfigError("generator spec: p must lie in (0,1)");
  }
  if (spec.kind == GeneratorKind::kPdc &&
      (spec.n_pairs < 1 || 2 * spec.n_pairs > spec.k)) {
    throw ConfigError(
        "generator spec: n_pairs must satisfy 1 <= n_pairs <= K/2");
  }
  return spec;
}

std::string GeneratorSpec::to_json() const {
  nlohmann::json j;
  switch (kind) {
    case GeneratorKind::kIid:
      j["generator"] = "iid";
      break;
    case GeneratorKind::kBias:
      j["generator"] = "bias";
      break;
    case GeneratorKind::kPdc:
      j["generator"] = "pdc";
      break;
  }
  j["K"] = k;
  j["N"] = n;
  j["p"] = p;
  j["image_side"] = image_side;
  j["patch_side"] = patch_side;
  j["noise_sigma"] = noise_sigma;
  j["nonnegative_features"] = nonnegative_features;
  j["rng_seed"] = rng_seed;
  if (kind == GeneratorKind::kPdc) {
    j["n_pairs"] = n_pairs;
    auto kinds = nlohmann::json::array();
    for (const auto pk : pair_kinds) kinds.push_back(pdc_kind_name(pk));
    j["pair_kinds"] = std::move(kinds);
  }
  return j.dump();
}

FeatureMatrix gen_features(const GeneratorSpec& spec) {
  Rng rng(derive_seed(spec.rng_seed, kFeatureStream));
  const Eigen::Index side = spec.image_side;
  const Eigen::Index patch = spec.patch_side;
  FeatureMatrix w = FeatureMatrix::Zero(spec.k, spec.d());
  std::uniform_int_distribution<Eigen::Index> place(0, side - patch);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index f = 0; f < spec.k; ++f) {
    const Eigen::Index r0 = place(rng);
    const Eigen::Index c0 = place(rng);
    for (Eigen::Index dr = 0; dr < patch; ++dr) {
      for (Eigen::Index dc = 0; dc < patch; ++dc) {
        double v = normal(rng);
        if (spec.nonnegative_features) v = std::abs(v);
        w(f, (r0 + dr) * side + (c0 + dc)) = v;
      }
    }
  }
  return w;
}

BinaryMatrix gen_z(const GeneratorSpec& spec) {
  if (spec.kind == GeneratorKind::kPdc &&
      (spec.n_pairs < 1 || 2 * spec.n_pairs > spec.k)) {
    throw ConfigError("gen_z: n_pairs must satisfy 1 <= n_pairs <= K/2");
  }
  Rng rng(derive_seed(spec.rng_seed, kIncidenceStream));
  for (int attempt = 0; attempt < 100; ++attempt) {
    BinaryMatrix z = draw_z(spec, rng);
    if (integer_rank(z.as_int()) == spec.k) return z;
  }
  throw GenerationError("gen_z: could not draw a rank-K matrix in 100 tries");
}

SyntheticInstance gen_instance(const GeneratorSpec& spec) {
  BinaryMatrix z = gen_z(spec);
  FeatureMatrix w = gen_features(spec);
  Rng rng(derive_seed(spec.rng_seed, kNoiseStream));
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix x = z.as_real() * w;
  if (spec.noise_sigma > 0.0) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        x(i, j) += spec.noise_sigma * normal(rng);
      }
    }
  }
  LfmInstance inst = LfmInstance::make(x, spec.noise_sigma, 1.0);
  return {std::move(x), std::move(z), std::move(w), std::move(inst)};
}

std::pair<BinaryMatrix, FeatureMatrix> make_inverted_solution(
    const BinaryMatrix& z_star, const FeatureMatrix& w_star,
    Eigen::Index bias_index, Eigen::Index i) {
  const Eigen::Index k = z_star.cols();
  if (bias_index < 0 || bias_index >= k || i < 0 || i >= k ||
      bias_index == i) {
    throw DomainError("make_inverted_solution: bad indices");
  }
  for (Eigen::Index n = 0; n < z_star.rows(); ++n) {
    if (!z_star(n, bias_index)) {
      throw DomainError(
          "make_inverted_solution: bias column is not all ones");
    }
  }
  IntMatrix u = IntMatrix::Identity(k, k);
  u(i, i) = -1;
  u(bias_index, i) = 1;  // column i becomes e_bias - e_i

  const BinaryMatrix z_prime = BinaryMatrix::from_int(z_star.transformed(u));
  FeatureMatrix w_prime = w_star;  // U is an involution, so U^-1 W = U W
  w_prime.row(bias_index) += w_star.row(i);
  w_prime.row(i) = -w_star.row(i);

  const double drift =
      (z_prime.as_real() * w_prime - z_star.as_real() * w_star).norm();
  if (drift > 1e-9 * (1.0 + w_star.norm())) {
    throw NumericalDriftError("make_inverted_solution: product changed");
  }
  for (Eigen::Index n = 0; n < z_star.rows(); ++n) {
    if (z_prime(n, i) != 1 - z_star(n, i)) {
      throw NumericalDriftError(
          "make_inverted_solution: column not complemented");
    }
  }
  return {z_prime, std::move(w_prime)};
}

}  // namespace lfmhop
