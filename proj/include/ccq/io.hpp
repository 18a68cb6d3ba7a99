#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ccq/graphs.hpp"
#include "ccq/matrix.hpp"

namespace ccq {

// Text formats. Blank lines and '#' comments are ignored everywhere.
//   field matrix:  "rows cols p", then rows lines of cols integers in [0, p)
//   min-plus:      "rows cols M", then rows lines of integers in [-M, M] or "inf"
//   graph:         "n directed|undirected M", then "u v [w]" lines, 0-based,
//                  w defaulting to 1

class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& origin, std::size_t line, std::size_t column, const std::string& msg);
  [[nodiscard]] std::size_t line() const noexcept { return line_; }
  [[nodiscard]] std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_, column_;
};

struct FieldMatrixData {
  Word p = 0;
  FieldMatrix m;
};

struct MinPlusData {
  std::int64_t M = 0;
  Matrix<Word> m;  // mp_encode'd
};

FieldMatrixData parse_field_matrix(std::string_view text, const std::string& origin = "<input>");
MinPlusData parse_minplus(std::string_view text, const std::string& origin = "<input>");
WeightedGraph parse_graph(std::string_view text, const std::string& origin = "<input>");

std::string format_field_matrix(const FieldMatrix& m, Word p);
std::string format_minplus(const Matrix<Word>& m, std::int64_t M);
std::string format_graph(const WeightedGraph& g);

/// Whole file as a string; throws std::runtime_error naming the path.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view text);

}  // namespace ccq
