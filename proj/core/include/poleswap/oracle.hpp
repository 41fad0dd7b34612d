#pragma once

#include <array>
#include <utility>
#include <vector>

#include "poleswap/double_double.hpp"
#include "poleswap/numerics.hpp"
#include "poleswap/swap_kernel.hpp"

namespace poleswap {

using Matrix3c = Eigen::Matrix3cd;

/// The diagonal ratios (sigma1, sigma2).
std::pair<ProjectiveValue, ProjectiveValue> eig_2x2_triangular(const TriangularPencil2& p);

/// Both roots of det(beta A - alpha B) = 0 in working precision, using the
/// cancellation-free quadratic formula on the homogeneous polynomial.
/// Throws IndeterminateValue for a singular pencil.
std::array<ProjectiveValue, 2> eig_2x2(const Matrix2c& a, const Matrix2c& b);

/// One oracle eigenvalue, kept in double-double so that error measurement
/// does not round the reference.
struct OracleEigenvalue {
  ComplexDD value;
  bool infinite{false};

  ProjectiveValue projective() const;
};

struct OracleResult {
  std::array<OracleEigenvalue, 3> eigenvalues;
  bool singular{false};       ///< every cubic coefficient is negligible
  bool residual_ok{true};     ///< every finite root passed the backward check
  double max_root_residual{0.0};  ///< |p(root)| / sum_k |c_k||root|^k
};

/**
 * det(A - lambda B) expanded into a cubic with double-double coefficients,
 * roots by Aberth iteration from Newton-polygon starting points, then Newton
 * polishing. Coefficients that are exactly zero at the top give infinite
 * eigenvalues.
 */
OracleResult eig_3x3_extended(const Matrix3c& a, const Matrix3c& b);

struct RelativeErrorResult {
  double value{0.0};
  bool fallback{false};          ///< a zero or infinite reference was scored specially
  std::vector<int> assignment;   ///< computed[i] matched to exact[assignment[i]]
};

/**
 * Minimizes the maximum per-eigenvalue error over all assignments.
 * Finite nonzero references use |l - l0|/|l0|; infinite references use
 * |1/l|; zero references use the chordal distance. Lengths must agree and
 * be at most 8.
 */
RelativeErrorResult max_relative_error(const std::vector<ProjectiveValue>& computed,
                                       const std::vector<ProjectiveValue>& exact);
RelativeErrorResult max_relative_error(const std::vector<ProjectiveValue>& computed,
                                       const std::vector<OracleEigenvalue>& exact);

/// Repeatedly pairs the globally closest unmatched values (chordal metric);
/// returns the distance of each pair, in pairing order.
std::vector<double> greedy_chordal_matching(const std::vector<ProjectiveValue>& a,
                                            const std::vector<ProjectiveValue>& b);

}  // namespace poleswap
