#pragma once

#include <optional>
#include <string>

#include "lfmhop/types.hpp"

namespace lfmhop {

enum class MatrixKind { kBinary01, kReal };

/// Reads a dense CSV matrix (one row per line, comma separated). Binary kind
/// accepts only the tokens "0" and "1". Malformed tokens, ragged rows and
/// empty files raise ParseError with the offending line number.
Matrix read_matrix(const std::string& path, MatrixKind kind);
BinaryMatrix read_binary_matrix(const std::string& path);

/// Writes a dense CSV matrix. Real entries are serialized with 17 significant
/// digits so the write/read round trip is bitwise exact.
void write_matrix(const std::string& path, const Matrix& m, MatrixKind kind);
void write_matrix(const std::string& path, const BinaryMatrix& m);

struct MultilabelOptions {
  /// Number of labels; when absent, inferred as max index + 1.
  std::optional<Eigen::Index> declared_k;
  /// Everything after the first occurrence of this character is ignored
  /// (feature tokens in svmlight-style files).
  char feature_delimiter = ' ';
};

/// Reads a sparse label-list file: one instance per line, each line a
/// comma-separated list of 0-based label indices (possibly empty).
BinaryMatrix read_multilabel(const std::string& path,
                             const MultilabelOptions& opts = {});

}  // namespace lfmhop
