#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lfmhop/enumeration.hpp"
#include "lfmhop/types.hpp"

namespace lfmhop {

struct PdcOptions {
  /// Count a pair toward the ratio once per unordered pair (any kind or
  /// direction); when false every ordered detection counts separately.
  bool unordered_pairs = true;
  /// Keep pairs touching a constant (all-zero / all-one) column in the
  /// ratio; such implications are vacuous and excluded by default.
  bool include_degenerate = false;
};

struct PdcDetection {
  Eigen::Index i = 0;
  Eigen::Index j = 0;
  PdcKind kind = PdcKind::kPdc1;
};

struct PdcReport {
  Eigen::Index n = 0;
  Eigen::Index k = 0;
  std::vector<PdcDetection> pairs;  // every ordered detection
  std::size_t n_pairs_total = 0;    // K (K-1) / 2
  /// Unordered pairs (ratio convention applied) with at least one PDC.
  std::size_t pair_count = 0;
  /// pair_count over the counted-pair denominator; absent when no pair is
  /// countable (e.g. every column constant).
  std::optional<double> pdc_ratio;
  std::size_t count_pdc1 = 0;  // ordered detections per kind
  std::size_t count_pdc2 = 0;
  std::size_t count_pdc3 = 0;
  std::vector<Eigen::Index> all_zero_columns;
  std::vector<Eigen::Index> all_one_columns;

  std::string to_json() const;
};

/// Checks the universally quantified implications for every ordered column
/// pair via bitset operations.
PdcReport detect_pdc(const BinaryMatrix& z, const PdcOptions& opts = {});

struct SurveyRow {
  std::string name;
  Eigen::Index n = 0;
  Eigen::Index k = 0;
  std::size_t pdc_pair_count = 0;
  std::optional<double> pdc_ratio;
  std::string error;  // non-empty when the dataset failed to load
};

struct SurveyDataset {
  std::string name;
  std::string path;
  /// Dense binary CSV when false, sparse label-list format when true.
  bool multilabel = true;
  std::optional<Eigen::Index> declared_k;
};

/// One row per dataset; per-dataset errors are reported in the row and the
/// survey continues.
std::vector<SurveyRow> survey(const std::vector<SurveyDataset>& datasets,
                              const PdcOptions& opts = {});

}  // namespace lfmhop
