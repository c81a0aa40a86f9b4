#include "lfmhop/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "lfmhop/instrumentation.hpp"

namespace lfmhop {

namespace {

std::string location(const std::string& path, std::size_t line) {
  std::ostringstream os;
  os << path << ":" << line;
  return os.str();
}

std::vector<std::string> split_csv_line(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      tokens.push_back(line.substr(start));
      break;
    }
    tokens.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return tokens;
}

double parse_real_token(const std::string& token, const std::string& path,
                        std::size_t line_no) {
  const char* begin = token.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE) {
    throw ParseError(location(path, line_no) + ": bad real token '" + token +
                         "'",
                     line_no);
  }
  return v;
}

std::vector<std::vector<double>> read_rows(const std::string& path,
                                           MatrixKind kind) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_csv_line(line);
    if (tokens.size() == 1 && tokens[0].empty() && in.peek() == EOF) {
      break;  // trailing newline
    }
    std::vector<double> row;
    row.reserve(tokens.size());
    for (const auto& token : tokens) {
      if (kind == MatrixKind::kBinary01) {
        if (token == "0") {
          row.push_back(0.0);
        } else if (token == "1") {
          row.push_back(1.0);
        } else {
          throw ParseError(location(path, line_no) + ": bad binary token '" +
                               token + "'",
                           line_no);
        }
      } else {
        row.push_back(parse_real_token(token, path, line_no));
      }
    }
    if (width == 0) {
      width = row.size();
    } else if (row.size() != width) {
      throw ParseError(location(path, line_no) + ": ragged row (" +
                           std::to_string(row.size()) + " fields, expected " +
                           std::to_string(width) + ")",
                       line_no);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw ParseError(location(path, 1) + ": empty matrix file", 1);
  }
  return rows;
}

}  // namespace

Matrix read_matrix(const std::string& path, MatrixKind kind) {
  const auto rows = read_rows(path, kind);
  instrumentation::count_row_scan();
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
    }
  }
  return m;
}

BinaryMatrix read_binary_matrix(const std::string& path) {
  return BinaryMatrix::from_real(read_matrix(path, MatrixKind::kBinary01));
}

void write_matrix(const std::string& path, const Matrix& m, MatrixKind kind) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw DimensionError("write_matrix: empty matrix");
  }
  instrumentation::count_row_scan();
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  char buf[40];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      if (kind == MatrixKind::kBinary01) {
        if (v != 0.0 && v != 1.0) {
          throw DomainError("write_matrix: non-binary entry under binary01");
        }
        out << (v == 1.0 ? '1' : '0');
      } else {
        if (!std::isfinite(v)) {
          throw DomainError("write_matrix: non-finite entry");
        }
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf;
      }
      if (j + 1 < m.cols()) out << ',';
    }
    out << '\n';
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

void write_matrix(const std::string& path, const BinaryMatrix& m) {
  write_matrix(path, m.as_real(), MatrixKind::kBinary01);
}

BinaryMatrix read_multilabel(const std::string& path,
                             const MultilabelOptions& opts) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::vector<std::vector<Eigen::Index>> instances;
  Eigen::Index max_index = -1;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t cut = line.find(opts.feature_delimiter);
    std::string labels =
        cut == std::string::npos ? line : line.substr(0, cut);
    std::vector<Eigen::Index> indices;
    if (!labels.empty()) {
      for (const auto& token : split_csv_line(labels)) {
        if (token.empty()) {
          throw ParseError(location(path, line_no) + ": empty label token",
                           line_no);
        }
        char* end = nullptr;
        const long long v = std::strtoll(token.c_str(), &end, 10);
        if (*end != '\0' || v < 0) {
          throw ParseError(location(path, line_no) + ": bad label token '" +
                               token + "'",
                           line_no);
        }
        const auto idx = static_cast<Eigen::Index>(v);
        if (opts.declared_k && idx >= *opts.declared_k) {
          throw ParseError(location(path, line_no) + ": label " +
                               std::to_string(v) + " >= declared K " +
                               std::to_string(*opts.declared_k),
                           line_no);
        }
        max_index = std::max(max_index, idx);
        indices.push_back(idx);
      }
    }
    instances.push_back(std::move(indices));
  }
  if (instances.empty()) {
    throw ParseError(location(path, 1) + ": empty label file", 1);
  }
  const Eigen::Index k = opts.declared_k ? *opts.declared_k : max_index + 1;
  if (k < 1) {
    throw ParseError(location(path, 1) + ": no labels found and no declared K",
                     1);
  }
  BinaryMatrix z(static_cast<Eigen::Index>(instances.size()), k);
  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (const auto idx : instances[i]) {
      z.set(static_cast<Eigen::Index>(i), idx, true);
    }
  }
  return z;
}

}  // namespace lfmhop
