#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "poleswap/numerics.hpp"
#include "poleswap/swap_kernel.hpp"

namespace poleswap {

/// Pair (A, B) of upper Hessenberg matrices. [lo, hi) is the undeflated block.
struct HessenbergPencil {
  ComplexMatrix A;
  ComplexMatrix B;
  Index lo{0};
  Index hi{0};

  HessenbergPencil() = default;
  /// Full active range. Throws DimensionMismatch unless A, B are square and
  /// equal sized, std::invalid_argument on non-finite entries. The Hessenberg
  /// pattern is not checked.
  HessenbergPencil(ComplexMatrix a, ComplexMatrix b);

  Index size() const noexcept { return A.rows(); }
  Index active_size() const noexcept { return hi - lo; }
};

/// Accumulated unitaries with A_original = q * A * z^*.
struct Transforms {
  ComplexMatrix q;
  ComplexMatrix z;

  static Transforms identity(Index n) {
    return {ComplexMatrix::Identity(n, n), ComplexMatrix::Identity(n, n)};
  }
};

/// Pole at zero-based subdiagonal position j: a(j+1,j)/b(j+1,j).
/// Throws PencilSplit if both entries vanish.
ProjectiveValue pole_at(const HessenbergPencil& p, Index j);

/// Poles of the active block, positions lo .. hi-2.
std::vector<ProjectiveValue> poles(const HessenbergPencil& p);

enum class ProperViolation { none, zero_subdiagonal_pair, proportional_first_columns, proportional_last_rows };

struct PropernessReport {
  bool is_proper{true};
  ProperViolation violation{ProperViolation::none};
  Index position{-1};  ///< subdiagonal position for zero_subdiagonal_pair
};

/// Checks the three properness conditions on the active block in order.
/// Proportionality: smallest/largest singular value of the stacked n x 2
/// pair at most tol (default n*u).
PropernessReport check_proper(const HessenbergPencil& p, std::optional<double> tol = std::nullopt);

/// Strictly-below-subdiagonal entries of a matrix; zero for Hessenberg input.
double below_subdiagonal_norm(const ComplexMatrix& m);
/// Strict lower triangle, i.e. the departure from upper triangular.
double strict_lower_norm(const ComplexMatrix& m);

struct ReductionResult {
  HessenbergPencil pencil;
  ComplexMatrix q;
  ComplexMatrix z;
};

/// Givens-based Hessenberg-triangular reduction: q^* A z Hessenberg,
/// q^* B z upper triangular, all poles infinite.
ReductionResult reduce_to_hessenberg_triangular(const ComplexMatrix& a, const ComplexMatrix& b);

enum class DeflationKind { split, top_eigenvalue, bottom_eigenvalue };

struct DeflationEvent {
  Index position{0};  ///< subdiagonal position that was zeroed
  std::optional<ProjectiveValue> eigenvalue;
  DeflationKind kind{DeflationKind::split};
};

/// True when both subdiagonal entries at j are negligible relative to their
/// neighbouring diagonal entries (or the active block norm if those vanish).
bool subdiagonal_negligible(const HessenbergPencil& p, Index j, double eps);

/// Event for a negligible position j of the active block; does not modify p.
DeflationEvent classify_deflation(const HessenbergPencil& p, Index j);

/// Zeroes every negligible subdiagonal pair of the active block and reports it.
std::vector<DeflationEvent> detect_deflations(HessenbergPencil& p, double eps = kUnitRoundoff);

struct SetPolesResult {
  std::optional<DeflationEvent> deflation;  ///< installation stopped here
  std::size_t moves{0};
};

/**
 * Installs targets[i] as the pole at position lo + i. The first half is
 * introduced at the top and chased down, the second half at the bottom and
 * chased up. Stops at the first deflation.
 */
SetPolesResult set_poles(HessenbergPencil& p, const std::vector<ProjectiveValue>& targets,
                         Transforms* acc = nullptr, SwapMethod method = SwapMethod::new_method);

}  // namespace poleswap
