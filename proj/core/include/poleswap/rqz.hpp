#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "poleswap/moves.hpp"
#include "poleswap/pencil.hpp"

namespace poleswap {

enum class ShiftStrategy { rayleigh, wilkinson_like };
enum class PoleStrategy { infinity, rayleigh };
enum class PencilEnd { bottom, top };
enum class SweepDirection { down, up, bidirectional };

std::string_view to_string(ShiftStrategy s);
std::string_view to_string(PoleStrategy s);
ShiftStrategy parse_shift_strategy(std::string_view s);  ///< "rayleigh" | "wilkinson"
PoleStrategy parse_pole_strategy(std::string_view s);    ///< "infinity" | "rayleigh"

struct SweepRecord {
  std::vector<MoveRecord> moves;
  std::vector<ProjectiveValue> shift_in;
  std::vector<ProjectiveValue> pole_out;
  SweepDirection direction{SweepDirection::down};
  std::optional<DeflationEvent> deflation;  ///< the sweep stopped early here
};

/// Rayleigh: the corner diagonal ratio. Wilkinson-like: the eigenvalue of the
/// corner 2x2 subpencil chordally closest to the Rayleigh value.
ProjectiveValue choose_shift(const HessenbergPencil& p, ShiftStrategy strategy, PencilEnd end = PencilEnd::bottom);

/// Type I top with rho, type II at lo+1 .. hi-2, type I bottom with new_pole.
SweepRecord basic_sweep(HessenbergPencil& p, const ProjectiveValue& rho, const ProjectiveValue& new_pole,
                        Transforms* acc = nullptr, const MoveOptions& opt = {});

/**
 * Installs shifts[m-1], ..., shifts[0] at the top (shifts[i] ends at lo+i),
 * chases the chain to the bottom one interior pole at a time, then replaces
 * the chain so that new_poles appear in order in the last m positions.
 */
SweepRecord multishift_sweep(HessenbergPencil& p, const std::vector<ProjectiveValue>& shifts,
                             const std::vector<ProjectiveValue>& new_poles, Transforms* acc = nullptr,
                             const MoveOptions& opt = {});

struct BidirectionalOptions {
  /// Replaces the down chain once it reaches the bottom; same layout as multishift.
  std::optional<std::vector<ProjectiveValue>> replace_down;
  /// Replaces the up chain once it reaches the top; replace_up[i] ends at lo+i.
  std::optional<std::vector<ProjectiveValue>> replace_up;
  double margin{1e-6};  ///< minimum chordal distance between any down and up shift
};

/**
 * Down shifts start in the top positions (down[i] at lo+i), up shifts in the
 * bottom positions (up[0] uppermost). Down and up passes alternate until the
 * chains have exchanged ends; interior poles return to their positions.
 * Throws std::invalid_argument on a margin violation.
 */
SweepRecord bidirectional_sweep(HessenbergPencil& p, const std::vector<ProjectiveValue>& down,
                                const std::vector<ProjectiveValue>& up, Transforms* acc = nullptr,
                                const MoveOptions& opt = {}, const BidirectionalOptions& bopt = {});

struct SolveOptions {
  SwapMethod method{SwapMethod::new_method};
  ShiftStrategy shift{ShiftStrategy::wilkinson_like};
  PoleStrategy pole{PoleStrategy::infinity};
  double eps{kUnitRoundoff};
  int sweeps_per_eigenvalue{30};
  int exceptional_every{10};
  std::uint64_t seed{0};
  bool keep_sweep_log{false};
};

struct SolveResult {
  std::vector<ProjectiveValue> eigenvalues;
  ComplexMatrix schur_a;
  ComplexMatrix schur_b;
  ComplexMatrix q;
  ComplexMatrix z;
  double r_a{0.0};
  double r_b{0.0};
  int iterations{0};
  bool converged{true};
  Index stuck_lo{-1};  ///< active block when the cap was hit
  Index stuck_hi{-1};
  std::vector<SweepRecord> sweep_log;
};

/// Reduces to Hessenberg-triangular form and iterates basic sweeps with
/// deflation until both matrices are upper triangular.
SolveResult solve(const ComplexMatrix& a, const ComplexMatrix& b, const SolveOptions& opt = {});

/// Starts from a Hessenberg pair, optionally installing prescribed poles first.
SolveResult solve(HessenbergPencil p, const SolveOptions& opt = {},
                  const std::optional<std::vector<ProjectiveValue>>& initial_poles = std::nullopt);

/// Frobenius-norm backward errors ||A - q S_A z^*|| / ||A|| and likewise for B.
std::pair<double, double> schur_residuals(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& q,
                                          const ComplexMatrix& z, const ComplexMatrix& schur_a,
                                          const ComplexMatrix& schur_b);

}  // namespace poleswap
