#include "lfmhop/pdc.hpp"

#include <nlohmann/json.hpp>

#include "lfmhop/io.hpp"

namespace lfmhop {

namespace {

bool implies_zero(const std::vector<std::uint64_t>& a,
                  const std::vector<std::uint64_t>& b) {
  // (a_n = 1) => (b_n = 0), i.e. a AND b empty.
  for (std::size_t w = 0; w < a.size(); ++w) {
    if (a[w] & b[w]) return false;
  }
  return true;
}

bool implies_one(const std::vector<std::uint64_t>& a,
                 const std::vector<std::uint64_t>& b) {
  // (a_n = 1) => (b_n = 1), i.e. a AND NOT b empty.
  for (std::size_t w = 0; w < a.size(); ++w) {
    if (a[w] & ~b[w]) return false;
  }
  return true;
}

}  // namespace

PdcReport detect_pdc(const BinaryMatrix& z, const PdcOptions& opts) {
  PdcReport report;
  report.n = z.rows();
  report.k = z.cols();
  const auto k = static_cast<std::size_t>(z.cols());
  report.n_pairs_total = k * (k - 1) / 2;

  std::vector<std::vector<std::uint64_t>> bits(k);
  std::vector<std::int64_t> pops(k, 0);
  for (std::size_t c = 0; c < k; ++c) {
    bits[c] = z.column_bits(static_cast<Eigen::Index>(c));
    for (Eigen::Index r = 0; r < z.rows(); ++r) {
      pops[c] += z(r, static_cast<Eigen::Index>(c));
    }
    if (pops[c] == 0) {
      report.all_zero_columns.push_back(static_cast<Eigen::Index>(c));
    } else if (pops[c] == z.rows()) {
      report.all_one_columns.push_back(static_cast<Eigen::Index>(c));
    }
  }
  auto constant = [&](std::size_t c) {
    return pops[c] == 0 || pops[c] == z.rows();
  };

  std::size_t counted_pairs = 0;
  std::size_t countable_pairs = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      bool any = false;
      if (implies_zero(bits[i], bits[j])) {
        report.pairs.push_back({static_cast<Eigen::Index>(i),
                                static_cast<Eigen::Index>(j),
                                PdcKind::kPdc1});
        ++report.count_pdc1;
        any = true;
      }
      if (implies_one(bits[i], bits[j])) {
        report.pairs.push_back({static_cast<Eigen::Index>(i),
                                static_cast<Eigen::Index>(j),
                                PdcKind::kPdc2});
        ++report.count_pdc2;
        any = true;
      }
      // (z_i = 0) => (z_j = 0) is (j subset of i).
      if (implies_one(bits[j], bits[i])) {
        report.pairs.push_back({static_cast<Eigen::Index>(i),
                                static_cast<Eigen::Index>(j),
                                PdcKind::kPdc3});
        ++report.count_pdc3;
        any = true;
      }
      const bool degenerate = constant(i) || constant(j);
      if (!opts.include_degenerate && degenerate) continue;
      if (opts.unordered_pairs && i > j) continue;
      ++countable_pairs;
      if (any) ++counted_pairs;
    }
  }
  report.pair_count = counted_pairs;
  if (countable_pairs > 0) {
    report.pdc_ratio = static_cast<double>(counted_pairs) /
                       static_cast<double>(countable_pairs);
  }
  return report;
}

std::string PdcReport::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  j["k"] = k;
  j["n_pairs_total"] = n_pairs_total;
  j["pair_count"] = pair_count;
  if (pdc_ratio) {
    j["pdc_ratio"] = *pdc_ratio;
  } else {
    j["pdc_ratio"] = nullptr;
  }
  j["count_pdc1"] = count_pdc1;
  j["count_pdc2"] = count_pdc2;
  j["count_pdc3"] = count_pdc3;
  j["pairs"] = nlohmann::json::array();
  for (const auto& p : pairs) {
    j["pairs"].push_back(
        {{"i", p.i}, {"j", p.j}, {"kind", pdc_kind_name(p.kind)}});
  }
  j["all_zero_columns"] = all_zero_columns;
  j["all_one_columns"] = all_one_columns;
  return j.dump();
}

std::vector<SurveyRow> survey(const std::vector<SurveyDataset>& datasets,
                              const PdcOptions& opts) {
  std::vector<SurveyRow> rows;
  rows.reserve(datasets.size());
  for (const auto& ds : datasets) {
    SurveyRow row;
    row.name = ds.name;
    try {
      BinaryMatrix z = [&] {
        if (ds.multilabel) {
          MultilabelOptions mopts;
          mopts.declared_k = ds.declared_k;
          return read_multilabel(ds.path, mopts);
        }
        return read_binary_matrix(ds.path);
      }();
      const PdcReport report = detect_pdc(z, opts);
      row.n = report.n;
      row.k = report.k;
      row.pdc_pair_count = report.pair_count;
      row.pdc_ratio = report.pdc_ratio;
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace lfmhop
