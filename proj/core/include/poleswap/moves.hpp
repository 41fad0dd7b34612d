#pragma once

#include <optional>

#include "poleswap/pencil.hpp"
#include "poleswap/swap_kernel.hpp"

namespace poleswap {

enum class MoveKind { type1_top, type1_bottom, type2 };

/**
 * One move at index k. q acts on rows (k, k+1), z on columns (k-1, k).
 * upper/lower are the poles that occupied positions k-1 and k before the move,
 * where the value entering at the top sits at position k-1 = lo-1 and the
 * value entering at the bottom at position k = hi-1. The move's factor is
 * (z - upper)/(z - lower).
 */
struct MoveRecord {
  MoveKind kind{MoveKind::type2};
  Index index{0};
  std::optional<CoreTransformation> q;
  std::optional<CoreTransformation> z;
  ProjectiveValue pole_in{ProjectiveValue::infinity()};
  ProjectiveValue pole_out{ProjectiveValue::infinity()};
  ProjectiveValue upper{ProjectiveValue::infinity()};
  ProjectiveValue lower{ProjectiveValue::infinity()};
  std::optional<DeflationEvent> deflation;
  bool skipped{false};
  double res_a{0.0};  ///< swap residual |a21|/||A_sub||, type II only
  double res_b{0.0};
};

struct MoveOptions {
  SwapMethod method{SwapMethod::new_method};
  double eps{kUnitRoundoff};  ///< deflation test after type I moves
};

/// Replaces the pole at position lo with rho by a left core on rows (lo, lo+1).
MoveRecord move_type1_top(HessenbergPencil& p, const ProjectiveValue& rho, Transforms* acc = nullptr,
                          const MoveOptions& opt = {});

/// Replaces the pole at position hi-2 with tau by a right core on columns (hi-2, hi-1).
MoveRecord move_type1_bottom(HessenbergPencil& p, const ProjectiveValue& tau, Transforms* acc = nullptr,
                             const MoveOptions& opt = {});

/// Swaps the poles at positions k-1 and k, lo < k < hi-1.
MoveRecord move_type2(HessenbergPencil& p, Index k, Transforms* acc = nullptr, const MoveOptions& opt = {});

}  // namespace poleswap
