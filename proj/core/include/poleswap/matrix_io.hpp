#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "poleswap/numerics.hpp"

namespace poleswap {

/// Malformed matrix file. line and column are 1-based; 0 means unknown.
class MatrixParseError : public std::runtime_error {
 public:
  MatrixParseError(std::size_t line, std::size_t column, const std::string& what);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct PencilData {
  ComplexMatrix a;
  ComplexMatrix b;
};

// File layout: {"n": 3, "A": [[re, im], ...], "B": [[re, im], ...]}, both
// arrays row-major with n*n pairs. Numbers are read at full binary64 precision.
PencilData parse_pencil(std::string_view text);
PencilData read_pencil_file(const std::string& path);

/// Shortest round-trip decimal for every entry.
std::string format_pencil(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace poleswap
