#pragma once

#include <array>
#include <string_view>

#include "poleswap/numerics.hpp"

namespace poleswap {

/// [[alpha1, a], [0, alpha2]] - lambda [[beta1, b], [0, beta2]].
struct TriangularPencil2 {
  Complex alpha1{1.0};
  Complex alpha2{1.0};
  Complex beta1{1.0};
  Complex beta2{1.0};
  Complex a{0.0};
  Complex b{0.0};

  Matrix2c a_matrix() const;
  Matrix2c b_matrix() const;
  ProjectiveValue sigma1() const { return {alpha1, beta1}; }
  ProjectiveValue sigma2() const { return {alpha2, beta2}; }
};

enum class SwapMethod { new_method, van_dooren, sylvester };

std::string_view to_string(SwapMethod m);
/// Accepts "new", "vandooren", "sylvester". Throws std::invalid_argument.
SwapMethod parse_swap_method(std::string_view s);

struct SwapReport {
  CoreTransformation q;
  CoreTransformation z;
  TriangularPencil2 result;
  double res_a{0.0};
  double res_b{0.0};
  double res_a_delta{0.0};
  double res_b_delta{0.0};
  bool skipped{false};
};

/**
 * Exchanges the diagonal ratios of a regular triangular 2x2 pencil via
 * Q^* (A, B) Z. The (2,1) entries produced are measured into the residuals
 * and then set to zero. Skips (identity cores) when the computed
 * beta2*alpha1 - alpha2*beta1 is exactly zero.
 */
SwapReport swap2x2(const TriangularPencil2& p, SwapMethod method);

struct ExactSwapVectors {
  std::array<Complex, 2> x;
  std::array<Complex, 2> y;
  std::array<Complex, 2> v;
  std::array<Complex, 2> w;
};

/// Closed-form deflating vectors: A x = alpha2 y, B x = beta2 y,
/// v^T A = alpha1 w^T, v^T B = beta1 w^T.
ExactSwapVectors exact_swap_vectors(const TriangularPencil2& p);

/// Max deviation between the Q-first construction and the unflipped Case 1
/// construction on the flipped pencil, both phase-normalized.
double flip_swap_equivalence_check(const TriangularPencil2& p);

}  // namespace poleswap
