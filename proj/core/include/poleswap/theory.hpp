#pragma once

#include <vector>

#include "poleswap/moves.hpp"
#include "poleswap/pencil.hpp"
#include "poleswap/rqz.hpp"

namespace poleswap {

/// Orthonormal basis of a subspace of C^n.
struct Subspace {
  ComplexMatrix basis;

  /// Orthonormalizes the columns; columns found dependent (relative
  /// tolerance rank_tol) are dropped.
  static Subspace span(const ComplexMatrix& columns, double rank_tol = 1e-13);
  /// span{e_0, ..., e_{k-1}} in C^n.
  static Subspace leading(Index n, Index k);

  Index ambient() const { return basis.rows(); }
  Index dim() const { return basis.cols(); }
};

/// r(z) = prod (z - zeros[i]) / (z - poles[i]).
struct RationalFunctionSpec {
  std::vector<ProjectiveValue> zeros;
  std::vector<ProjectiveValue> poles;
};

/// left_quotient evaluates r(A B^-1), right_quotient r(B^-1 A).
enum class QuotientVariant { left_quotient, right_quotient };

/**
 * K_j(C, v, poles) = prod (C - sigma_i I)^-1 K_j(C, v), j = poles.size() + 1,
 * by rational Arnoldi: step i applies (C - sigma_i I)^-1, or C for an
 * infinite pole, to the newest basis vector. Throws SingularFactor.
 */
Subspace rational_krylov_basis(const ComplexMatrix& c, const ComplexVector& v,
                               const std::vector<ProjectiveValue>& poles);

/// Same space for C = A B^-1 (left) or B^-1 A (right), without forming B^-1.
Subspace rational_krylov_basis(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexVector& v,
                               const std::vector<ProjectiveValue>& poles, QuotientVariant variant);

/// r(A B^-1) S or r(B^-1 A) S, one LU solve with (beta A - alpha B) per factor.
Subspace apply_rational_operator(const ComplexMatrix& a, const ComplexMatrix& b, const RationalFunctionSpec& spec,
                                 const Subspace& s, QuotientVariant variant);

/// Largest principal angle in [0, pi/2]. Small angles come from
/// ||(I - S1 S1^*) S2||_2 so they keep full relative accuracy.
double principal_angle(const Subspace& s1, const Subspace& s2);

/// sigma_max / sigma_min of beta A - alpha B.
double shifted_condition(const ComplexMatrix& a, const ComplexMatrix& b, const ProjectiveValue& shift);

struct MoveAngles {
  double angle_q{0.0};
  double angle_z{0.0};
};

/// Single-move subspace law: Q E_{k+1} = (A - upper B)(A - lower B)^-1 E_{k+1}
/// and Z E_k = (A - lower B)^-1 (A - upper B) E_k, evaluated on the snapshot.
MoveAngles verify_move_theorem(const HessenbergPencil& before, const MoveRecord& record);

/// Dual law of a bottom type I move: Z e_n is parallel to
/// (A - tau B)^* (A - sigma B)^-* e_n.
double verify_bottom_row_direction(const HessenbergPencil& before, const MoveRecord& record);

/// Whole-sweep law from the move log: for each d, Q E_d = r(A B^-1) E_d with
/// the factors of moves whose q acts at rows (d-1, d), and Z E_d = r(B^-1 A) E_d
/// with the factors of moves whose z acts at columns (d-1, d). acc must start
/// from the identity at the snapshot. Returns the largest angle.
double verify_sweep_theorem(const HessenbergPencil& before, const SweepRecord& sweep, const Transforms& acc);

/// Closed-form law of one basic sweep with shift rho and new pole sigma_n:
/// Q E_k = (A - rho B)(A - sigma_k B)^-1 E_k, Z E_k = (A - sigma_{k+1} B)^-1 (A - rho B) E_k.
double verify_basic_sweep_theorem(const HessenbergPencil& before, const ProjectiveValue& rho,
                                  const ProjectiveValue& new_pole, const Transforms& acc);

struct KrylovAngles {
  double k_variant{0.0};  ///< E_j vs K_j(A B^-1, e1, [sigma_1 .. sigma_{j-1}])
  double l_variant{0.0};  ///< E_j vs K_j(B^-1 A, e1, [sigma_2 .. sigma_j])
};

/// Largest angles over j = 1 .. n-1 for a proper Hessenberg pair.
KrylovAngles verify_krylov_identities(const HessenbergPencil& p);

}  // namespace poleswap
