#include "lfmhop.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include <nlohmann/json.hpp>

#include "lfmhop/baseline.hpp"
#include "lfmhop/binarity.hpp"
#include "lfmhop/enumeration.hpp"
#include "lfmhop/hopper.hpp"
#include "lfmhop/io.hpp"
#include "lfmhop/metrics.hpp"
#include "lfmhop/pdc.hpp"
#include "lfmhop/sampler.hpp"
#include "lfmhop/solve.hpp"
#include "lfmhop/synthgen.hpp"
#include "lfmhop/types.hpp"
#include "lfmhop/version.hpp"

using nlohmann::json;

struct lfmhop_matrix {
  lfmhop::Matrix m;
};

struct lfmhop_candidates {
  lfmhop::CandidateSet set;
};

namespace {

thread_local std::string g_last_error;

lfmhop_status fail(lfmhop_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <typename Fn>
lfmhop_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return LFMHOP_OK;
  } catch (const lfmhop::DimensionError& e) {
    return fail(LFMHOP_ERR_DIMENSION, e.what());
  } catch (const lfmhop::ParseError& e) {
    return fail(LFMHOP_ERR_PARSE, e.what());
  } catch (const lfmhop::RankError& e) {
    return fail(LFMHOP_ERR_RANK, e.what());
  } catch (const lfmhop::DomainError& e) {
    return fail(LFMHOP_ERR_DOMAIN, e.what());
  } catch (const lfmhop::ConfigError& e) {
    return fail(LFMHOP_ERR_CONFIG, e.what());
  } catch (const lfmhop::IoError& e) {
    return fail(LFMHOP_ERR_IO, e.what());
  } catch (const lfmhop::LimitError& e) {
    return fail(LFMHOP_ERR_LIMIT, e.what());
  } catch (const lfmhop::GenerationError& e) {
    return fail(LFMHOP_ERR_GENERATION, e.what());
  } catch (const lfmhop::NumericalDriftError& e) {
    return fail(LFMHOP_ERR_NUMERIC_DRIFT, e.what());
  } catch (const std::exception& e) {
    return fail(LFMHOP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(LFMHOP_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

const lfmhop::Matrix& require(const lfmhop_matrix* m, const char* name) {
  if (!m) {
    throw lfmhop::ConfigError(std::string("null matrix argument: ") + name);
  }
  return m->m;
}

lfmhop::BinaryMatrix as_binary(const lfmhop_matrix* m, const char* name) {
  return lfmhop::BinaryMatrix::from_real(require(m, name));
}

lfmhop_matrix* wrap(lfmhop::Matrix m) {
  return new lfmhop_matrix{std::move(m)};
}

json parse_json(const char* text, const char* what) {
  if (!text) return json::object();
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw lfmhop::ConfigError(std::string(what) + ": invalid JSON: " +
                              e.what());
  }
}

lfmhop::SamplerConfig sampler_config_from(const json& j) {
  lfmhop::SamplerConfig cfg;
  cfg.n_samples = j.value("n_samples", cfg.n_samples);
  if (j.contains("lambda") && !j.at("lambda").is_null()) {
    cfg.lambda = j.at("lambda").get<double>();
  }
  cfg.rng_seed = j.value("seed", cfg.rng_seed);
  cfg.max_entry_abs = j.value("max_entry_abs", cfg.max_entry_abs);
  return cfg;
}

json int_matrix_to_json(const lfmhop::IntMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

const char* certification_name(lfmhop::CertificationKind kind) {
  switch (kind) {
    case lfmhop::CertificationKind::kFirstAppearance:
      return "first_appearance";
    case lfmhop::CertificationKind::kUnimodularSubmatrix:
      return "unimodular_submatrix";
    case lfmhop::CertificationKind::kNotFound:
      return "not_found";
  }
  return "?";
}

}  // namespace

extern "C" {

const char* lfmhop_version(void) { return lfmhop::kVersion; }

lfmhop_status lfmhop_version_info(char** json_out) {
  return guarded([&] {
    if (!json_out) throw lfmhop::ConfigError("null output argument");
    *json_out = dup_string(lfmhop::version_json());
  });
}

const char* lfmhop_last_error(void) { return g_last_error.c_str(); }

void lfmhop_string_free(char* s) { std::free(s); }

lfmhop_status lfmhop_matrix_create(int64_t rows, int64_t cols,
                                   const double* data, lfmhop_matrix** out) {
  return guarded([&] {
    if (!out) throw lfmhop::ConfigError("null output argument");
    if (rows < 1 || cols < 1) {
      throw lfmhop::DimensionError("matrix_create: positive sizes required");
    }
    lfmhop::Matrix m(rows, cols);
    if (data) {
      for (int64_t i = 0; i < rows; ++i) {
        for (int64_t j = 0; j < cols; ++j) m(i, j) = data[i * cols + j];
      }
    } else {
      m.setZero();
    }
    *out = wrap(std::move(m));
  });
}

lfmhop_status lfmhop_matrix_read_csv(const char* path, int binary01,
                                     lfmhop_matrix** out) {
  return guarded([&] {
    if (!out || !path) throw lfmhop::ConfigError("null argument");
    *out = wrap(lfmhop::read_matrix(path, binary01
                                              ? lfmhop::MatrixKind::kBinary01
                                              : lfmhop::MatrixKind::kReal));
  });
}

lfmhop_status lfmhop_matrix_write_csv(const lfmhop_matrix* m,
                                      const char* path, int binary01) {
  return guarded([&] {
    if (!path) throw lfmhop::ConfigError("null path");
    lfmhop::write_matrix(path, require(m, "m"),
                         binary01 ? lfmhop::MatrixKind::kBinary01
                                  : lfmhop::MatrixKind::kReal);
  });
}

int64_t lfmhop_matrix_rows(const lfmhop_matrix* m) {
  return m ? static_cast<int64_t>(m->m.rows()) : -1;
}

int64_t lfmhop_matrix_cols(const lfmhop_matrix* m) {
  return m ? static_cast<int64_t>(m->m.cols()) : -1;
}

lfmhop_status lfmhop_matrix_get(const lfmhop_matrix* m, int64_t i, int64_t j,
                                double* out) {
  return guarded([&] {
    const auto& mat = require(m, "m");
    if (!out) throw lfmhop::ConfigError("null output argument");
    if (i < 0 || j < 0 || i >= mat.rows() || j >= mat.cols()) {
      throw lfmhop::DimensionError("matrix_get: index out of range");
    }
    *out = mat(i, j);
  });
}

lfmhop_status lfmhop_matrix_copy_data(const lfmhop_matrix* m, double* buf) {
  return guarded([&] {
    const auto& mat = require(m, "m");
    if (!buf) throw lfmhop::ConfigError("null buffer");
    for (Eigen::Index i = 0; i < mat.rows(); ++i) {
      for (Eigen::Index j = 0; j < mat.cols(); ++j) {
        buf[i * mat.cols() + j] = mat(i, j);
      }
    }
  });
}

void lfmhop_matrix_free(lfmhop_matrix* m) { delete m; }

lfmhop_status lfmhop_residual(const lfmhop_matrix* x, const lfmhop_matrix* z,
                              const lfmhop_matrix* w, double* out) {
  return guarded([&] {
    if (!out) throw lfmhop::ConfigError("null output argument");
    *out = lfmhop::residual(require(x, "x"), as_binary(z, "z"),
                            require(w, "w"));
  });
}

lfmhop_status lfmhop_map_objective(const lfmhop_matrix* x,
                                   const lfmhop_matrix* z,
                                   const lfmhop_matrix* w, double tau,
                                   double* out) {
  return guarded([&] {
    if (!out) throw lfmhop::ConfigError("null output argument");
    *out = lfmhop::map_objective(require(x, "x"), tau, as_binary(z, "z"),
                                 require(w, "w"));
  });
}

lfmhop_status lfmhop_solve_w(const lfmhop_matrix* x, const lfmhop_matrix* z,
                             double tau, lfmhop_matrix** w_out) {
  return guarded([&] {
    if (!w_out) throw lfmhop::ConfigError("null output argument");
    *w_out = wrap(lfmhop::solve_w_given_z(require(x, "x"), tau,
                                          as_binary(z, "z")));
  });
}

lfmhop_status lfmhop_hamming_error(const lfmhop_matrix* z,
                                   const lfmhop_matrix* z_star,
                                   int allow_complements, double* out) {
  return guarded([&] {
    if (!out) throw lfmhop::ConfigError("null output argument");
    const auto zb = as_binary(z, "z");
    const auto zs = as_binary(z_star, "z_star");
    *out = allow_complements
               ? lfmhop::hamming_error_allowing_complements(zb, zs)
               : lfmhop::hamming_error(zb, zs);
  });
}

lfmhop_status lfmhop_regularizer(const lfmhop_matrix* w, double* out) {
  return guarded([&] {
    if (!out) throw lfmhop::ConfigError("null output argument");
    *out = lfmhop::regularizer_metric(require(w, "w"));
  });
}

lfmhop_status lfmhop_defect(const lfmhop_matrix* m, int64_t* out) {
  return guarded([&] {
    if (!out) throw lfmhop::ConfigError("null output argument");
    *out = lfmhop::defect(require(m, "m"));
  });
}

lfmhop_status lfmhop_sample_candidates(const lfmhop_matrix* z,
                                       const char* config_json,
                                       lfmhop_candidates** out) {
  return guarded([&] {
    if (!out) throw lfmhop::ConfigError("null output argument");
    const auto cfg =
        sampler_config_from(parse_json(config_json, "sampler config"));
    *out = new lfmhop_candidates{
        lfmhop::sample_candidates(as_binary(z, "z"), cfg)};
  });
}

int64_t lfmhop_candidates_count(const lfmhop_candidates* c) {
  return c ? static_cast<int64_t>(c->set.size()) : -1;
}

lfmhop_status lfmhop_candidates_to_json(const lfmhop_candidates* c,
                                        char** json_out) {
  return guarded([&] {
    if (!c || !json_out) throw lfmhop::ConfigError("null argument");
    *json_out = dup_string(c->set.to_json());
  });
}

void lfmhop_candidates_free(lfmhop_candidates* c) { delete c; }

lfmhop_status lfmhop_count_classes(const lfmhop_matrix* z,
                                   const char* sampler_config_json,
                                   int64_t* count_out) {
  return guarded([&] {
    if (!count_out) throw lfmhop::ConfigError("null output argument");
    const auto cfg =
        sampler_config_from(parse_json(sampler_config_json, "sampler config"));
    const auto zb = as_binary(z, "z");
    const auto set = lfmhop::sample_candidates(zb, cfg);
    const auto assembly =
        lfmhop::assemble_integer_classes(set.columns(), zb.cols(), false);
    *count_out = static_cast<int64_t>(assembly.count);
  });
}

lfmhop_status lfmhop_enumerate(const lfmhop_matrix* z, int64_t max_n,
                               int64_t max_k, char** report_json) {
  return guarded([&] {
    if (!report_json) throw lfmhop::ConfigError("null output argument");
    const auto zb = as_binary(z, "z");
    lfmhop::EnumerationLimits limits;
    if (max_n > 0) limits.max_n = max_n;
    if (max_k > 0) limits.max_k = max_k;
    const auto report = lfmhop::enumerate_equivalents(zb, limits);
    json j;
    j["count"] = report.count;
    j["noninteger_class_count"] = report.noninteger_class_count;
    j["identifiable"] = report.identifiable;
    j["certification"] = certification_name(report.certification);
    j["capped"] = report.capped;
    j["transforms"] = json::array();
    j["hamming_to_input"] = json::array();
    for (const auto& u : report.transforms) {
      j["transforms"].push_back(int_matrix_to_json(u));
      const auto z_prime = lfmhop::BinaryMatrix::from_int(zb.transformed(u));
      j["hamming_to_input"].push_back(lfmhop::hamming_error(z_prime, zb));
    }
    *report_json = dup_string(j.dump());
  });
}

lfmhop_status lfmhop_certify(const lfmhop_matrix* z, char** report_json) {
  return guarded([&] {
    if (!report_json) throw lfmhop::ConfigError("null output argument");
    const auto cert = lfmhop::certify_integer_closure(as_binary(z, "z"));
    json j;
    j["kind"] = certification_name(cert.kind);
    if (cert.certified()) {
      j["rows"] = cert.rows;
      j["col_order"] = cert.col_order;
      j["zeta"] = int_matrix_to_json(cert.zeta);
    }
    *report_json = dup_string(j.dump());
  });
}

lfmhop_status lfmhop_detect_pdc(const lfmhop_matrix* z,
                                const char* options_json,
                                char** report_json) {
  return guarded([&] {
    if (!report_json) throw lfmhop::ConfigError("null output argument");
    const json j = parse_json(options_json, "pdc options");
    lfmhop::PdcOptions opts;
    opts.unordered_pairs = j.value("unordered_pairs", opts.unordered_pairs);
    opts.include_degenerate =
        j.value("include_degenerate", opts.include_degenerate);
    const auto report = lfmhop::detect_pdc(as_binary(z, "z"), opts);
    *report_json = dup_string(report.to_json());
  });
}

lfmhop_status lfmhop_read_multilabel(const char* path, int64_t declared_k,
                                     lfmhop_matrix** z_out) {
  return guarded([&] {
    if (!path || !z_out) throw lfmhop::ConfigError("null argument");
    lfmhop::MultilabelOptions opts;
    if (declared_k >= 0) opts.declared_k = declared_k;
    *z_out = wrap(lfmhop::read_multilabel(path, opts).as_real());
  });
}

lfmhop_status lfmhop_synth(const char* spec_json, uint64_t seed,
                           lfmhop_matrix** x_out, lfmhop_matrix** z_out,
                           lfmhop_matrix** w_out, char** meta_json) {
  return guarded([&] {
    if (!spec_json || !x_out || !z_out || !w_out) {
      throw lfmhop::ConfigError("null argument");
    }
    auto spec = lfmhop::GeneratorSpec::from_json(spec_json);
    spec.rng_seed = seed;
    auto instance = lfmhop::gen_instance(spec);
    *x_out = wrap(std::move(instance.x));
    *z_out = wrap(instance.z_star.as_real());
    *w_out = wrap(std::move(instance.w_star));
    if (meta_json) *meta_json = dup_string(spec.to_json());
  });
}

lfmhop_status lfmhop_synth_z(const char* spec_json, uint64_t seed,
                             lfmhop_matrix** z_out) {
  return guarded([&] {
    if (!spec_json || !z_out) throw lfmhop::ConfigError("null argument");
    auto spec = lfmhop::GeneratorSpec::from_json(spec_json);
    spec.rng_seed = seed;
    *z_out = wrap(lfmhop::gen_z(spec).as_real());
  });
}

lfmhop_status lfmhop_fit(const lfmhop_matrix* x, int64_t k,
                         const char* config_json, lfmhop_matrix** z_out,
                         lfmhop_matrix** w_out, lfmhop_matrix** trace_out) {
  return guarded([&] {
    if (!z_out || !w_out) throw lfmhop::ConfigError("null output argument");
    const json j = parse_json(config_json, "fit config");
    lfmhop::BaselineConfig cfg;
    cfg.max_outer_iters = j.value("max_outer_iters", cfg.max_outer_iters);
    cfg.restarts = j.value("restarts", cfg.restarts);
    cfg.rng_seed = j.value("seed", cfg.rng_seed);
    cfg.convergence_tol = j.value("convergence_tol", cfg.convergence_tol);
    const std::string update = j.value("z_update", "exhaustive_row");
    if (update == "exhaustive_row") {
      cfg.z_update = lfmhop::ZUpdate::kExhaustiveRow;
    } else if (update == "coordinate_flip") {
      cfg.z_update = lfmhop::ZUpdate::kCoordinateFlip;
    } else {
      throw lfmhop::ConfigError("fit config: unknown z_update '" + update +
                                "'");
    }
    const double tau = j.value("tau", 0.0);
    const auto inst = lfmhop::LfmInstance::from_tau(require(x, "x"), tau);
    const auto result = lfmhop::fit_map(inst, k, cfg);
    *z_out = wrap(result.z.as_real());
    *w_out = wrap(result.w);
    if (trace_out) {
      lfmhop::Matrix trace(
          static_cast<Eigen::Index>(result.objective_trace.size()), 1);
      for (std::size_t i = 0; i < result.objective_trace.size(); ++i) {
        trace(static_cast<Eigen::Index>(i), 0) = result.objective_trace[i];
      }
      *trace_out = wrap(std::move(trace));
    }
  });
}

lfmhop_status lfmhop_hop(const lfmhop_matrix* z_hat,
                         const lfmhop_matrix* w_hat, const lfmhop_matrix* x,
                         const char* config_json, lfmhop_matrix** u_out,
                         lfmhop_matrix** z_out, lfmhop_matrix** w_out,
                         lfmhop_matrix** trace_out, char** stats_json) {
  return guarded([&] {
    if (!u_out || !z_out || !w_out) {
      throw lfmhop::ConfigError("null output argument");
    }
    const json j = parse_json(config_json, "hop config");
    const double tau = j.value("tau", 0.0);
    lfmhop::Vector pi;
    if (j.contains("pi") && !j.at("pi").is_null()) {
      const auto values = j.at("pi").get<std::vector<double>>();
      pi = Eigen::Map<const lfmhop::Vector>(values.data(),
                                            static_cast<Eigen::Index>(
                                                values.size()));
    }
    const auto inst =
        lfmhop::LfmInstance::from_tau(require(x, "x"), tau, std::move(pi));

    lfmhop::HopperConfig cfg;
    if (j.contains("beta") && !j.at("beta").is_null()) {
      cfg.beta = j.at("beta").get<double>();
    }
    cfg.gamma = j.value("gamma", cfg.gamma);
    cfg.iterations = j.value("iterations", cfg.iterations);
    cfg.resample_every = j.value("resample_every", cfg.resample_every);
    cfg.det_tolerance = j.value("det_tolerance", cfg.det_tolerance);
    cfg.refresh_every = j.value("refresh_every", cfg.refresh_every);
    cfg.rng_seed = j.value("seed", cfg.rng_seed);
    lfmhop::SamplerConfig sampler_cfg =
        sampler_config_from(j.value("sampler", json::object()));
    if (!j.contains("sampler") || !j.at("sampler").contains("seed")) {
      sampler_cfg.rng_seed = lfmhop::derive_seed(cfg.rng_seed, 0x73616dULL);
    }
    cfg.resample = sampler_cfg;

    const auto zb = as_binary(z_hat, "z_hat");
    const auto candidates = lfmhop::sample_candidates(zb, sampler_cfg);
    const auto result =
        lfmhop::hop(zb, require(w_hat, "w_hat"), inst, candidates, cfg);

    *u_out = wrap(result.u_best.cast<double>());
    *z_out = wrap(result.z_out.as_real());
    *w_out = wrap(result.w_out);
    if (trace_out) {
      lfmhop::Matrix trace(static_cast<Eigen::Index>(result.trace.size()), 5);
      for (std::size_t i = 0; i < result.trace.size(); ++i) {
        const auto& row = result.trace[i];
        const auto r = static_cast<Eigen::Index>(i);
        trace(r, 0) = static_cast<double>(row.iteration);
        trace(r, 1) = row.cost;
        trace(r, 2) = static_cast<double>(row.defect);
        trace(r, 3) = row.prior_w;
        trace(r, 4) = static_cast<double>(row.column);
      }
      *trace_out = wrap(std::move(trace));
    }
    if (stats_json) {
      json stats;
      stats["best_cost"] = result.best_cost;
      stats["clamped"] = result.clamped;
      stats["residual_before"] = result.residual_before;
      stats["residual_after"] = result.residual_after;
      stats["row_scans_in_loop"] = result.row_scans_in_loop;
      stats["empty_neighbor_events"] = result.empty_neighbor_events;
      stats["warnings"] = result.warnings;
      *stats_json = dup_string(stats.dump());
    }
  });
}

}  // extern "C"
