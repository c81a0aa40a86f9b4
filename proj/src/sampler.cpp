#include "lfmhop/sampler.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

namespace lfmhop {

namespace {

std::string key_of(const IntVector& u) {
  std::string key;
  key.reserve(static_cast<std::size_t>(u.size()) * 8);
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const auto v = static_cast<std::uint64_t>(u[i]);
    key.append(reinterpret_cast<const char*>(&v), sizeof v);
  }
  return key;
}

}  // namespace

CandidateSet::CandidateSet(std::shared_ptr<const SphereGeometry> geometry)
    : geometry_(std::move(geometry)) {
  if (!geometry_) throw ConfigError("CandidateSet: null geometry");
}

bool CandidateSet::add(const IntVector& u) {
  if (u.size() != geometry_->k) {
    throw DimensionError("CandidateSet::add: column length != K");
  }
  if (u.isZero()) return false;
  auto key = key_of(u);
  if (keys_.count(key)) return false;
  keys_.insert(std::move(key));
  columns_.push_back(u);
  defects_.push_back(column_defect(geometry_->gram, geometry_->col_sum, u));
  return true;
}

bool CandidateSet::contains(const IntVector& u) const {
  return keys_.count(key_of(u)) > 0;
}

std::ptrdiff_t CandidateSet::index_of(const IntVector& u) const {
  if (!contains(u)) return -1;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i] == u) return static_cast<std::ptrdiff_t>(i);
  }
  return -1;
}

Matrix CandidateSet::columns_real() const {
  Matrix m(geometry_->k, static_cast<Eigen::Index>(columns_.size()));
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    m.col(static_cast<Eigen::Index>(i)) = columns_[i].cast<double>();
  }
  return m;
}

std::string CandidateSet::to_json() const {
  nlohmann::json j;
  j["k"] = geometry_->k;
  j["columns"] = nlohmann::json::array();
  j["defects"] = nlohmann::json::array();
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    nlohmann::json col = nlohmann::json::array();
    for (Eigen::Index r = 0; r < columns_[i].size(); ++r) {
      col.push_back(columns_[i][r]);
    }
    j["columns"].push_back(std::move(col));
    j["defects"].push_back(defects_[i]);
  }
  return j.dump();
}

std::int64_t sample_f_star(double lambda, Rng& rng) {
  if (!std::isfinite(lambda)) return 0;
  if (lambda <= 0.0) throw ConfigError("sample_f_star: lambda must be > 0");
  // P(m) = (1 - q) q^m with q = exp(-lambda); inverse-CDF draw.
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = std::min(unif(rng), 0.9999999999999999);
  return static_cast<std::int64_t>(std::floor(std::log(1.0 - u) / -lambda));
}

Vector sample_sphere_point(const SphereGeometry& geom, std::int64_t f_star,
                           Rng& rng) {
  if (f_star < 0) throw DomainError("sample_sphere_point: f* must be >= 0");
  const double radius =
      std::sqrt(geom.mu_norm_sq + 2.0 * static_cast<double>(f_star));
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector dir(geom.k);
  double norm_sq = 0.0;
  do {
    for (Eigen::Index i = 0; i < geom.k; ++i) dir[i] = normal(rng);
    norm_sq = dir.squaredNorm();
  } while (norm_sq == 0.0);
  return geom.mu + (radius / std::sqrt(norm_sq)) * dir;
}

CandidateSet sample_candidates(std::shared_ptr<const SphereGeometry> geometry,
                               const SamplerConfig& cfg,
                               std::uint64_t round) {
  if (cfg.n_samples < 1) {
    throw ConfigError("sample_candidates: n_samples must be >= 1");
  }
  if (!cfg.strict() && cfg.lambda <= 0.0) {
    throw ConfigError("sample_candidates: lambda must be > 0 or infinite");
  }
  CandidateSet set(geometry);
  const SphereGeometry& geom = set.geometry();

  for (Eigen::Index k = 0; k < geom.k; ++k) {
    IntVector e = IntVector::Zero(geom.k);
    e[k] = 1;
    set.add(e);
  }

  Rng rng_f(derive_seed(cfg.rng_seed, 2 * round));
  Rng rng_s(derive_seed(cfg.rng_seed, 2 * round + 1));
  IntVector u(geom.k);
  for (std::size_t it = 0; it < cfg.n_samples; ++it) {
    const std::int64_t f_star = sample_f_star(cfg.lambda, rng_f);
    const Vector s = sample_sphere_point(geom, f_star, rng_s);
    const Vector ur = geom.lambda * s;
    bool usable = true;
    bool zero = true;
    for (Eigen::Index i = 0; i < geom.k; ++i) {
      const double r = std::nearbyint(ur[i]);
      if (std::abs(r) > static_cast<double>(cfg.max_entry_abs)) {
        usable = false;
        break;
      }
      u[i] = static_cast<std::int64_t>(r);
      if (u[i] != 0) zero = false;
    }
    if (!usable || zero) continue;
    const std::int64_t d = column_defect(geom.gram, geom.col_sum, u);
    if (d <= f_star) set.add(u);
  }
  return set;
}

CandidateSet sample_candidates(const BinaryMatrix& z,
                               const SamplerConfig& cfg) {
  auto geometry = std::make_shared<SphereGeometry>(build_geometry(z));
  return sample_candidates(std::move(geometry), cfg, 0);
}

}  // namespace lfmhop
