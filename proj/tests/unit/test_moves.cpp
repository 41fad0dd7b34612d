#include <gtest/gtest.h>

#include "poleswap/experiments.hpp"
#include "poleswap/moves.hpp"
#include "poleswap/theory.hpp"
#include "test_support.hpp"

namespace poleswap {
namespace {

constexpr double u = kUnitRoundoff;

HessenbergPencil random_pair(std::uint64_t seed, Index n) {
  auto rng = trial_rng(seed, 0);
  return HessenbergPencil(testing::normal_hessenberg(n, rng), testing::normal_hessenberg(n, rng));
}

HessenbergPencil ht_pair(std::uint64_t seed, Index n) {
  auto rng = trial_rng(seed, 0);
  return reduce_to_hessenberg_triangular(testing::normal_matrix(n, n, rng), testing::normal_matrix(n, n, rng)).pencil;
}

ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

TEST(TypeOneTop, InfiniteShiftOnHtPairIsIdentity) {
  HessenbergPencil p = ht_pair(1, 5);
  const HessenbergPencil before = p;
  const MoveRecord r = move_type1_top(p, ProjectiveValue::infinity());
  ASSERT_TRUE(r.q);
  EXPECT_TRUE(r.q->is_identity());
  EXPECT_FALSE(r.z);
  EXPECT_EQ(p.A, before.A);
}

TEST(TypeOneTop, ZeroShiftOnTwoByTwo) {
  HessenbergPencil p(mat2(1, 2, 3, 4), ComplexMatrix::Identity(2, 2));
  const MoveRecord r = move_type1_top(p, ProjectiveValue::finite(0.0));
  EXPECT_EQ(r.kind, MoveKind::type1_top);
  EXPECT_EQ(p.A(1, 0), Complex(0.0));
  EXPECT_NEAR(std::abs(p.B(1, 0)), 3.0 / std::sqrt(10.0), 4 * u);
  EXPECT_TRUE(pole_at(p, 0).is_zero());
}

TEST(TypeOneTop, ProportionalColumnsDeflateAtTheTop) {
  auto rng = trial_rng(2, 0);
  const ComplexMatrix h = testing::normal_hessenberg(4, rng);
  HessenbergPencil p(h, h);
  const MoveRecord r = move_type1_top(p, ProjectiveValue::finite(complex_normal(rng)));
  ASSERT_TRUE(r.deflation);
  EXPECT_EQ(r.deflation->kind, DeflationKind::top_eigenvalue);
  ASSERT_TRUE(r.deflation->eigenvalue);
  EXPECT_LE(cross_ratio(*r.deflation->eigenvalue, make_projective(p.A(0, 0), p.B(0, 0))), 4 * u);
}

TEST(TypeOneTop, OtherPolesBitwiseUntouched) {
  HessenbergPencil p = random_pair(3, 6);
  const auto before = poles(p);
  const auto rho = ProjectiveValue::finite({0.3, -1.1});
  move_type1_top(p, rho);
  const auto after = poles(p);
  EXPECT_LE(cross_ratio(after[0], rho), 100 * u);
  for (std::size_t i = 1; i < before.size(); ++i) EXPECT_EQ(after[i], before[i]);
}

TEST(TypeOneBottom, InfiniteShiftOnHtPairIsIdentity) {
  HessenbergPencil p = ht_pair(4, 5);
  const HessenbergPencil before = p;
  const MoveRecord r = move_type1_bottom(p, ProjectiveValue::infinity());
  ASSERT_TRUE(r.z);
  EXPECT_TRUE(r.z->is_identity());
  EXPECT_FALSE(r.q);
  EXPECT_EQ(p.B, before.B);
}

TEST(TypeOneBottom, MirrorOfTheTopExample) {
  // F A^T F for A = [[1,2],[3,4]].
  HessenbergPencil p(mat2(4, 2, 3, 1), ComplexMatrix::Identity(2, 2));
  move_type1_bottom(p, ProjectiveValue::finite(0.0));
  EXPECT_EQ(p.A(1, 0), Complex(0.0));
  EXPECT_NEAR(std::abs(p.B(1, 0)), 3.0 / std::sqrt(10.0), 4 * u);
  EXPECT_TRUE(pole_at(p, 0).is_zero());
}

TEST(TypeOneBottom, ProportionalRowsDeflateAtTheBottom) {
  HessenbergPencil p = random_pair(5, 4);
  p.B.row(3) = Complex(2.0, -1.0) * p.A.row(3);
  const MoveRecord r = move_type1_bottom(p, ProjectiveValue::finite(0.7));
  ASSERT_TRUE(r.deflation);
  EXPECT_EQ(r.deflation->kind, DeflationKind::bottom_eigenvalue);
  EXPECT_LE(cross_ratio(*r.deflation->eigenvalue, make_projective(p.A(3, 3), p.B(3, 3))), 4 * u);
}

TEST(TypeOneBottom, OtherPolesBitwiseUntouched) {
  HessenbergPencil p = random_pair(6, 6);
  const auto before = poles(p);
  const auto tau = ProjectiveValue::finite({-2.0, 0.5});
  move_type1_bottom(p, tau);
  const auto after = poles(p);
  EXPECT_LE(cross_ratio(after.back(), tau), 100 * u);
  for (std::size_t i = 0; i + 1 < before.size(); ++i) EXPECT_EQ(after[i], before[i]);
}

TEST(TypeTwo, SwapsPrescribedPoles) {
  auto rng = trial_rng(7, 0);
  HessenbergPencil p(testing::normal_hessenberg(3, rng), testing::normal_hessenberg(3, rng));
  p.A(1, 0) = 2.0 * p.B(1, 0);
  p.A(2, 1) = 5.0 * p.B(2, 1);
  const MoveRecord r = move_type2(p, 1);
  EXPECT_EQ(r.kind, MoveKind::type2);
  ASSERT_TRUE(r.q && r.z);
  EXPECT_EQ(r.q->index, 1);
  EXPECT_EQ(r.z->index, 0);
  const auto after = poles(p);
  EXPECT_LE(cross_ratio(after[0], ProjectiveValue::finite(5.0)), 100 * u);
  EXPECT_LE(cross_ratio(after[1], ProjectiveValue::finite(2.0)), 100 * u);
}

TEST(TypeTwo, EqualPolesGiveIdentityMove) {
  auto rng = trial_rng(8, 0);
  HessenbergPencil p(testing::normal_hessenberg(4, rng), testing::normal_hessenberg(4, rng));
  p.A(2, 1) = 3.0 * p.B(2, 1);
  p.A(3, 2) = 3.0 * p.B(3, 2);
  const HessenbergPencil before = p;
  const MoveRecord r = move_type2(p, 2);
  EXPECT_TRUE(r.skipped);
  EXPECT_EQ(p.A, before.A);
  EXPECT_EQ(p.B, before.B);
}

TEST(TypeTwo, InfiniteWithInfiniteIsIdentity) {
  HessenbergPencil p = ht_pair(9, 5);
  const HessenbergPencil before = p;
  EXPECT_TRUE(move_type2(p, 2).skipped);
  EXPECT_EQ(p.A, before.A);
}

TEST(TypeTwo, RejectsEndPositions) {
  HessenbergPencil p = random_pair(10, 4);
  EXPECT_ANY_THROW(move_type2(p, 0));
  EXPECT_ANY_THROW(move_type2(p, 3));
}

TEST(TypeTwo, ConservesPolesAndPattern) {
  for (std::uint64_t t = 0; t < 50; ++t) {
    HessenbergPencil p = random_pair(100 + t, 7);
    const auto before = poles(p);
    const Index k = 1 + static_cast<Index>(t % 5);
    const HessenbergPencil snap = p;
    Transforms acc = Transforms::identity(7);
    const MoveRecord r = move_type2(p, k, &acc);
    const auto after = poles(p);
    const auto uk = static_cast<std::size_t>(k);
    EXPECT_LE(chordal_distance(after[uk - 1], before[uk]), 1e-10);
    EXPECT_LE(chordal_distance(after[uk], before[uk - 1]), 1e-10);
    for (std::size_t i = 0; i < before.size(); ++i) {
      if (i != uk && i != uk - 1) EXPECT_EQ(after[i], before[i]);
    }
    EXPECT_EQ(below_subdiagonal_norm(p.A), 0.0);
    EXPECT_EQ(below_subdiagonal_norm(p.B), 0.0);
    EXPECT_LE(r.res_a, 1e-15);
    EXPECT_LE(r.res_b, 1e-15);
    EXPECT_LE((snap.A - acc.q * p.A * acc.z.adjoint()).norm(), 1e-14 * snap.A.norm());
    EXPECT_LE((snap.B - acc.q * p.B * acc.z.adjoint()).norm(), 1e-14 * snap.B.norm());
  }
}

}  // namespace
}  // namespace poleswap
