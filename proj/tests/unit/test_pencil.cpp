#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "poleswap/errors.hpp"
#include "poleswap/moves.hpp"
#include "poleswap/oracle.hpp"
#include "poleswap/pencil.hpp"
#include "test_support.hpp"

namespace poleswap {
namespace {

constexpr double u = kUnitRoundoff;

std::vector<ProjectiveValue> eigen_reference(const ComplexMatrix& a, const ComplexMatrix& b) {
  // Independent route: standard eigenproblem of B^-1 A.
  const ComplexMatrix c = b.partialPivLu().solve(a);
  const Eigen::ComplexEigenSolver<ComplexMatrix> es(c, false);
  std::vector<ProjectiveValue> out;
  for (Index i = 0; i < c.rows(); ++i) out.push_back(ProjectiveValue::finite(es.eigenvalues()(i)));
  return out;
}

TEST(Poles, DirectRatios) {
  ComplexMatrix a = ComplexMatrix::Zero(3, 3), b = ComplexMatrix::Zero(3, 3);
  a(1, 0) = 2.0;
  a(2, 1) = 3.0;
  b(1, 0) = 1.0;
  b(2, 1) = 1.0;
  const auto ps = poles(HessenbergPencil(a, b));
  ASSERT_EQ(ps.size(), 2u);
  EXPECT_EQ(ps[0], ProjectiveValue::finite(2.0));
  EXPECT_EQ(ps[1], ProjectiveValue::finite(3.0));
}

TEST(Poles, ZeroBSubdiagonalIsInfinite) {
  auto rng = trial_rng(1, 1);
  const auto red = reduce_to_hessenberg_triangular(testing::normal_matrix(4, 4, rng), testing::normal_matrix(4, 4, rng));
  for (const auto& p : poles(red.pencil)) EXPECT_TRUE(p.is_infinite());
}

TEST(Poles, BothZeroSignalsSplit) {
  auto rng = trial_rng(1, 2);
  HessenbergPencil p(testing::normal_hessenberg(4, rng), testing::normal_hessenberg(4, rng));
  p.A(2, 1) = 0.0;
  p.B(2, 1) = 0.0;
  try {
    poles(p);
    FAIL();
  } catch (const PencilSplit& e) {
    EXPECT_EQ(e.position(), 1);
  }
}

TEST(HessenbergPencilCtor, RejectsBadShapes) {
  EXPECT_THROW(HessenbergPencil(ComplexMatrix::Identity(2, 3), ComplexMatrix::Identity(2, 3)), DimensionMismatch);
  EXPECT_THROW(HessenbergPencil(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3)), DimensionMismatch);
  ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
  bad(0, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(HessenbergPencil(bad, ComplexMatrix::Identity(2, 2)), std::invalid_argument);
}

TEST(CheckProper, SpecExamples) {
  auto rng = trial_rng(2, 0);
  const auto red = reduce_to_hessenberg_triangular(testing::normal_matrix(5, 5, rng), testing::normal_matrix(5, 5, rng));
  EXPECT_TRUE(check_proper(red.pencil).is_proper);

  const ComplexMatrix h = testing::normal_hessenberg(5, rng);
  const auto same = check_proper(HessenbergPencil(h, h));
  EXPECT_FALSE(same.is_proper);
  EXPECT_EQ(same.violation, ProperViolation::proportional_first_columns);

  HessenbergPencil z(testing::normal_hessenberg(5, rng), testing::normal_hessenberg(5, rng));
  z.A(3, 2) = 0.0;
  z.B(3, 2) = 0.0;
  const auto zr = check_proper(z);
  EXPECT_EQ(zr.violation, ProperViolation::zero_subdiagonal_pair);
  EXPECT_EQ(zr.position, 2);
}

TEST(CheckProper, ProportionalLastRows) {
  auto rng = trial_rng(2, 1);
  HessenbergPencil p(testing::normal_hessenberg(4, rng), testing::normal_hessenberg(4, rng));
  p.B.row(3) = Complex(0.0, 2.0) * p.A.row(3);
  const auto r = check_proper(p);
  EXPECT_FALSE(r.is_proper);
  EXPECT_EQ(r.violation, ProperViolation::proportional_last_rows);
}

TEST(Reduction, ShapeUnitarityAndResidual) {
  auto rng = trial_rng(3, 0);
  for (Index n : {1, 2, 6, 12}) {
    const ComplexMatrix a = testing::normal_matrix(n, n, rng);
    const ComplexMatrix b = testing::normal_matrix(n, n, rng);
    const auto r = reduce_to_hessenberg_triangular(a, b);
    EXPECT_EQ(below_subdiagonal_norm(r.pencil.A), 0.0);
    EXPECT_EQ(strict_lower_norm(r.pencil.B), 0.0);
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const double nd = static_cast<double>(n);
    EXPECT_LE((r.q.adjoint() * r.q - id).norm(), 10 * nd * u);
    EXPECT_LE((r.z.adjoint() * r.z - id).norm(), 10 * nd * u);
    EXPECT_LE((a - r.q * r.pencil.A * r.z.adjoint()).norm(), 10 * nd * u * a.norm());
    EXPECT_LE((b - r.q * r.pencil.B * r.z.adjoint()).norm(), 10 * nd * u * b.norm());
  }
}

TEST(Reduction, AlreadyReducedInputKeepsItsPattern) {
  auto rng = trial_rng(3, 1);
  const ComplexMatrix h = testing::normal_hessenberg(5, rng);
  const ComplexMatrix t = testing::normal_matrix(5, 5, rng).triangularView<Eigen::Upper>();
  const auto r = reduce_to_hessenberg_triangular(h, t);
  for (Index i = 0; i < 5; ++i) {
    EXPECT_NEAR(std::abs(r.pencil.B(i, i)), std::abs(t(i, i)), 1e-13 * t.norm());
  }
}

TEST(Reduction, PreservesEigenvalues) {
  auto rng = trial_rng(3, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix a = testing::normal_matrix(5, 5, rng);
    const ComplexMatrix b = testing::normal_matrix(5, 5, rng);
    const auto r = reduce_to_hessenberg_triangular(a, b);
    const auto before = eigen_reference(a, b);
    const auto after = eigen_reference(r.pencil.A, r.pencil.B);
    for (double d : greedy_chordal_matching(before, after)) EXPECT_LE(d, 1e4 * u);
  }
}

TEST(Reduction, DimensionMismatch) {
  EXPECT_THROW(reduce_to_hessenberg_triangular(ComplexMatrix::Identity(3, 3), ComplexMatrix::Identity(2, 2)),
               DimensionMismatch);
}

TEST(SetPoles, InfiniteTargetsOnHtPairAreANoOp) {
  auto rng = trial_rng(4, 0);
  auto red = reduce_to_hessenberg_triangular(testing::normal_matrix(6, 6, rng), testing::normal_matrix(6, 6, rng));
  HessenbergPencil p = red.pencil;
  const auto r = set_poles(p, std::vector<ProjectiveValue>(5, ProjectiveValue::infinity()));
  EXPECT_FALSE(r.deflation.has_value());
  EXPECT_LE((p.A - red.pencil.A).norm(), 4 * u * p.A.norm());
  EXPECT_LE((p.B - red.pencil.B).norm(), 4 * u * p.B.norm());
}

TEST(SetPoles, TwoByTwoMatchesSingleTopMove) {
  auto rng = trial_rng(4, 1);
  const HessenbergPencil p0(testing::normal_matrix(2, 2, rng), testing::normal_matrix(2, 2, rng));
  const auto rho = ProjectiveValue::finite(complex_normal(rng));
  HessenbergPencil p = p0, q = p0;
  set_poles(p, {rho});
  move_type1_top(q, rho);
  EXPECT_LE(cross_ratio(pole_at(p, 0), rho), 8 * u);
  EXPECT_LE(cross_ratio(pole_at(p, 0), pole_at(q, 0)), 8 * u);
}

TEST(SetPoles, InstallsRandomTargets) {
  for (std::uint64_t t = 0; t < 50; ++t) {
    auto rng = trial_rng(4, 100 + t);
    const Index n = 5;
    HessenbergPencil p(testing::normal_hessenberg(n, rng), testing::normal_hessenberg(n, rng));
    const HessenbergPencil before = p;
    std::vector<ProjectiveValue> targets;
    for (Index i = 0; i + 1 < n; ++i) {
      const double mod = std::pow(10.0, 6.0 * uniform01(rng) - 3.0);
      targets.push_back(ProjectiveValue::finite(std::polar(mod, 6.283185307179586 * uniform01(rng))));
    }
    Transforms acc = Transforms::identity(n);
    const auto r = set_poles(p, targets, &acc);
    ASSERT_FALSE(r.deflation.has_value());
    EXPECT_LE(r.moves, static_cast<std::size_t>((n - 1) * (n - 1) / 4 + 1 + (n - 1)));
    const auto got = poles(p);
    for (std::size_t i = 0; i < targets.size(); ++i) EXPECT_LE(cross_ratio(got[i], targets[i]), 1e3 * u);
    EXPECT_EQ(below_subdiagonal_norm(p.A), 0.0);
    EXPECT_EQ(below_subdiagonal_norm(p.B), 0.0);
    EXPECT_LE((before.A - acc.q * p.A * acc.z.adjoint()).norm(), 1e-13 * before.A.norm());
  }
}

TEST(Deflation, ExactBottomZerosGiveBottomEigenvalue) {
  auto rng = trial_rng(5, 0);
  HessenbergPencil p(testing::normal_hessenberg(4, rng), testing::normal_hessenberg(4, rng));
  p.A(3, 2) = 0.0;
  p.B(3, 2) = 0.0;
  const auto ev = detect_deflations(p);
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev[0].kind, DeflationKind::bottom_eigenvalue);
  EXPECT_EQ(ev[0].position, 2);
  ASSERT_TRUE(ev[0].eigenvalue);
  EXPECT_LE(cross_ratio(*ev[0].eigenvalue, make_projective(p.A(3, 3), p.B(3, 3))), 4 * u);
}

TEST(Deflation, NoneOnGenericPair) {
  auto rng = trial_rng(5, 1);
  HessenbergPencil p(testing::normal_hessenberg(6, rng), testing::normal_hessenberg(6, rng));
  EXPECT_TRUE(detect_deflations(p).empty());
}

TEST(Deflation, TinyPairIsSplitAndZeroed) {
  ComplexMatrix a = ComplexMatrix::Identity(4, 4), b = ComplexMatrix::Identity(4, 4);
  for (Index j = 0; j < 3; ++j) {
    a(j + 1, j) = 0.5;
    b(j + 1, j) = 0.25;
  }
  a(2, 1) = 1e-18;
  b(2, 1) = Complex(0.0, 1e-18);
  HessenbergPencil p(a, b);
  const auto ev = detect_deflations(p, 1e-16);
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev[0].kind, DeflationKind::split);
  EXPECT_EQ(ev[0].position, 1);
  EXPECT_FALSE(ev[0].eigenvalue.has_value());
  EXPECT_EQ(p.A(2, 1), Complex(0.0));
  EXPECT_EQ(p.B(2, 1), Complex(0.0));
}

TEST(Deflation, OnlyOneMatrixSmallIsNotNegligible) {
  ComplexMatrix a = ComplexMatrix::Identity(3, 3), b = ComplexMatrix::Identity(3, 3);
  a(1, 0) = 1e-20;
  b(1, 0) = 0.5;
  a(2, 1) = 1.0;
  HessenbergPencil p(a, b);
  EXPECT_FALSE(subdiagonal_negligible(p, 0, u));
}

TEST(Deflation, TopEventCarriesEigenvalue) {
  auto rng = trial_rng(5, 2);
  HessenbergPencil p(testing::normal_hessenberg(4, rng), testing::normal_hessenberg(4, rng));
  p.A(1, 0) = 0.0;
  p.B(1, 0) = 0.0;
  const auto e = classify_deflation(p, 0);
  EXPECT_EQ(e.kind, DeflationKind::top_eigenvalue);
  ASSERT_TRUE(e.eigenvalue);
  EXPECT_LE(cross_ratio(*e.eigenvalue, make_projective(p.A(0, 0), p.B(0, 0))), 4 * u);
}

}  // namespace
}  // namespace poleswap
