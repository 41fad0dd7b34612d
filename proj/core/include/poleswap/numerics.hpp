#pragma once

#include <complex>
#include <limits>
#include <optional>
#include <string_view>

#include <Eigen/Dense>

namespace poleswap {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Matrix2c = Eigen::Matrix2cd;
using Index = Eigen::Index;

/// Unit roundoff of binary64, 2^-53.
inline constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;

/**
 * A ratio alpha/beta held as a pair so that infinity (beta = 0) needs no
 * special casing. Stored normalized with max(|alpha|, |beta|) = 1; the
 * normalizing factor is a positive real, so the phase of the pair is kept.
 */
class ProjectiveValue {
 public:
  /// Throws IndeterminateValue for 0/0 and std::invalid_argument for
  /// non-finite components.
  ProjectiveValue(Complex alpha, Complex beta);

  static ProjectiveValue infinity() { return {Complex{1.0}, Complex{0.0}}; }
  static ProjectiveValue finite(Complex z) { return {z, Complex{1.0}}; }

  Complex alpha() const noexcept { return alpha_; }
  Complex beta() const noexcept { return beta_; }

  bool is_infinite() const noexcept { return beta_ == 0.0; }
  bool is_zero() const noexcept { return alpha_ == 0.0; }

  /// alpha/beta; infinity maps to (inf, 0).
  Complex value() const noexcept;

  ProjectiveValue reciprocal() const { return {beta_, alpha_}; }

  /// Bitwise equality of the normalized representation.
  friend bool operator==(const ProjectiveValue&, const ProjectiveValue&) = default;

 private:
  Complex alpha_;
  Complex beta_;
};

ProjectiveValue make_projective(Complex alpha, Complex beta);

/// |p| >= |q| on the projective line, infinity above every finite value.
bool projective_modulus_at_least(const ProjectiveValue& p, const ProjectiveValue& q) noexcept;

/// |alpha_p beta_q - alpha_q beta_p| of the normalized pairs.
double cross_ratio(const ProjectiveValue& p, const ProjectiveValue& q) noexcept;

/// Chordal metric on the projective line, in [0, 1].
double chordal_distance(const ProjectiveValue& p, const ProjectiveValue& q) noexcept;

/**
 * A 2x2 unitary acting on rows/columns (index, index+1), stored as the
 * SU(2) element [[c, -conj(s)], [s, conj(c)]]. Indices are zero-based.
 */
struct CoreTransformation {
  Complex c{1.0};
  Complex s{0.0};
  Index index{0};

  static CoreTransformation identity(Index index) { return {Complex{1.0}, Complex{0.0}, index}; }

  Matrix2c matrix() const;
  bool is_identity() const noexcept { return c == 1.0 && s == 0.0; }

  /// Same core with c rotated onto the nonnegative real axis (or s, if c = 0).
  CoreTransformation phase_normalized() const;
};

struct CoreAnnihilation {
  CoreTransformation core;
  double gamma;  ///< ||v||_2
};

/**
 * Core G with G^* v = gamma e_1 and gamma = ||v|| > 0; G e_1 = v / gamma.
 * Returns nullopt for the zero vector. Components are scaled by the largest
 * real/imaginary magnitude before the hypotenuse is formed.
 */
std::optional<CoreAnnihilation> core_annihilating(Complex v0, Complex v1, Index index = 0);

enum class Side { left, right };

/**
 * In-place core application. Left: rows (j, j+1) become G^* M (conjugate)
 * or G M. Right: columns (j, j+1) become M G, or M G^* with conjugate.
 * Throws std::out_of_range if index + 1 falls outside the matrix.
 */
void apply_core(ComplexMatrix& m, const CoreTransformation& g, Side side, bool conjugate);

/// n x n identity with the core embedded at its index.
ComplexMatrix embed_core(const CoreTransformation& g, Index n);

/// ||G^* G - I||_F of the 2x2 block.
double unitarity_deviation(const CoreTransformation& g);

struct MatrixNorms {
  double frobenius{0.0};
  std::optional<double> two_norm;  ///< only for 2x2 inputs
};

MatrixNorms matrix_norms(const ComplexMatrix& m);

/// Overflow-safe Frobenius norm.
double frobenius_norm(const ComplexMatrix& m);

/// Exact spectral norm of a 2x2 matrix via its singular values.
double two_norm_2x2(const Matrix2c& m);

/// Throws std::invalid_argument naming `what` if any entry is NaN or Inf.
void require_finite(const ComplexMatrix& m, std::string_view what);

bool all_finite(const ComplexMatrix& m);

}  // namespace poleswap
