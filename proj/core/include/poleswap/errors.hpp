#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace poleswap {

/// Raised when a projective value would be 0/0.
class IndeterminateValue : public std::domain_error {
 public:
  explicit IndeterminateValue(const std::string& what) : std::domain_error(what) {}
};

/// Operands have incompatible shapes.
class DimensionMismatch : public std::invalid_argument {
 public:
  explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};

/// A Hessenberg pair has a subdiagonal position where both entries vanish.
class PencilSplit : public std::runtime_error {
 public:
  PencilSplit(std::ptrdiff_t position, const std::string& what)
      : std::runtime_error(what), position_(position) {}

  /// Zero-based subdiagonal position j, i.e. entries (j+1, j).
  std::ptrdiff_t position() const noexcept { return position_; }

 private:
  std::ptrdiff_t position_;
};

/// NaN or Inf appeared in the middle of a computation.
class NumericalBreakdown : public std::runtime_error {
 public:
  explicit NumericalBreakdown(const std::string& what) : std::runtime_error(what) {}
};

/// A shifted factor (beta*A - alpha*B) is numerically singular.
class SingularFactor : public std::runtime_error {
 public:
  explicit SingularFactor(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace poleswap
