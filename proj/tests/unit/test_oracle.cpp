#include <gtest/gtest.h>

#include <algorithm>
#include <array>

#include "poleswap/errors.hpp"
#include "poleswap/experiments.hpp"
#include "poleswap/oracle.hpp"
#include "poleswap/rqz.hpp"
#include "test_support.hpp"

namespace poleswap {
namespace {

constexpr double u = kUnitRoundoff;

// Reference eigenvalue as double-double real and imaginary parts.
struct Ref {
  double re_hi, re_lo, im_hi, im_lo;
};

// Distance |computed - ref| / |ref| evaluated in double-double.
double dd_relative_error(const OracleEigenvalue& e, const Ref& r) {
  const DoubleDouble dr = e.value.re - DoubleDouble(r.re_hi, r.re_lo);
  const DoubleDouble di = e.value.im - DoubleDouble(r.im_hi, r.im_lo);
  const double num = std::hypot(dr.to_double(), di.to_double());
  return num / std::hypot(r.re_hi, r.im_hi);
}

double modulus(const OracleEigenvalue& e) { return abs(e.value).to_double(); }

void expect_matches(const Matrix3c& a, const Matrix3c& b, const std::array<Ref, 3>& refs, double tol) {
  const OracleResult r = eig_3x3_extended(a, b);
  ASSERT_FALSE(r.singular);
  EXPECT_TRUE(r.residual_ok);
  std::array<OracleEigenvalue, 3> got = r.eigenvalues;
  std::sort(got.begin(), got.end(), [](const auto& x, const auto& y) { return modulus(x) < modulus(y); });
  for (std::size_t i = 0; i < 3; ++i) {
    ASSERT_FALSE(got[i].infinite);
    EXPECT_LE(dd_relative_error(got[i], refs[i]), tol) << "eigenvalue " << i;
  }
}

Matrix3c pencil1_a() {
  Matrix3c m;
  m << Complex(2, 1), -1.0, Complex(0, 0.5), 3.0, Complex(1, -2), 4.0, 0.0, 0.25, Complex(-1, 1);
  return m;
}
Matrix3c pencil1_b() {
  Matrix3c m;
  m << 1.0, 0.5, Complex(0, -2), 1e-3, 2.0, 1.0, 0.0, Complex(0, 1), 3.0;
  return m;
}
Matrix3c pencil2_a() {
  Matrix3c m;
  m << 1e8, 3e-5, 2.0, 1e-6, Complex(0, 5e3), 7.0, 0.0, 2e-9, 1e-4;
  return m;
}
Matrix3c pencil2_b() {
  Matrix3c m;
  m << 3.0, 1e10, 1e-3, 4e2, 1.0, Complex(0, 1e-8), 0.0, 1e6, 2.0;
  return m;
}

// 60-digit references from an eigendecomposition of B^-1 A, sorted by modulus.
const std::array<Ref, 3> kPencil1{{
    {-0x1.61b3a67af3a0cp-2, 0x1.87108b90491e3p-56, 0x1.e1e4fdba1e68ap-4, -0x1.9811700eab179p-58},
    {0x1.bd95daed82d3ap-1, -0x1.d0b82a0bacd5dp-55, -0x1.cbeaab44f47a1p+0, 0x1.e884960540613p-55},
    {0x1.073bb894f9dcdp+1, 0x1.09458e1d6860fp-54, 0x1.713ba2cf8d392p+0, 0x1.82d7d48607070p-54},
}};
const std::array<Ref, 3> kPencil2{{
    {0x1.c0c9c34fba5c8p-34, -0x1.29c24a42a67bep-88, -0x1.32c8627293662p-24, 0x1.7f4cc417e053cp-79},
    {-0x1.b84091b8c0339p-8, 0x1.c557689009777p-62, -0x1.2b5529f8f1024p+3, 0x1.87d90db1bb38bp-51},
    {0x1.b3825bbf4bffep-8, 0x1.50afba79c9f83p-62, 0x1.2b552a606287ep+3, -0x1.c6e5fcb525960p-52},
}};

TEST(Oracle3x3, ModerateDensePencil) { expect_matches(pencil1_a(), pencil1_b(), kPencil1, 1e-25); }

TEST(Oracle3x3, WidelyScaledHessenbergPencil) { expect_matches(pencil2_a(), pencil2_b(), kPencil2, 1e-20); }

TEST(Oracle3x3, WorkingPrecisionSolverAgrees) {
  const SolveResult r = solve(pencil1_a(), pencil1_b());
  std::vector<ProjectiveValue> exact;
  for (const auto& ref : kPencil1) exact.push_back(ProjectiveValue::finite({ref.re_hi, ref.im_hi}));
  EXPECT_LE(max_relative_error(r.eigenvalues, exact).value, 1e-12);
}

TEST(Oracle3x3, DiagonalPencilIsExact) {
  Matrix3c a = Matrix3c::Zero();
  a.diagonal() << 1.0, 2.0, 3.0;
  const OracleResult r = eig_3x3_extended(a, Matrix3c::Identity());
  std::vector<double> re;
  for (const auto& e : r.eigenvalues) {
    EXPECT_FALSE(e.infinite);
    EXPECT_EQ(e.value.im.to_double(), 0.0);
    re.push_back(e.value.re.to_double());
  }
  std::sort(re.begin(), re.end());
  EXPECT_EQ(re, (std::vector<double>{1.0, 2.0, 3.0}));
}

TEST(Oracle3x3, DegreeDropGivesInfinity) {
  Matrix3c a = Matrix3c::Zero(), b = Matrix3c::Zero();
  a.diagonal() << 2.0, 3.0, 5.0;
  b.diagonal() << 1.0, 1.0, 0.0;
  const OracleResult r = eig_3x3_extended(a, b);
  int infinite = 0;
  std::vector<double> finite;
  for (const auto& e : r.eigenvalues) {
    if (e.infinite) {
      ++infinite;
      EXPECT_TRUE(e.projective().is_infinite());
    } else {
      finite.push_back(e.value.re.to_double());
    }
  }
  EXPECT_EQ(infinite, 1);
  std::sort(finite.begin(), finite.end());
  EXPECT_EQ(finite, (std::vector<double>{2.0, 3.0}));
}

TEST(Oracle3x3, SingularPencilFlagged) {
  Matrix3c a = Matrix3c::Identity(), b = Matrix3c::Identity();
  a(2, 2) = 0.0;
  b(2, 2) = 0.0;
  EXPECT_TRUE(eig_3x3_extended(a, b).singular);
}

TEST(Oracle3x3, TriangularInputReturnsDiagonalRatios) {
  auto rng = trial_rng(1, 0);
  for (int t = 0; t < 200; ++t) {
    Matrix3c a = Matrix3c::Zero(), b = Matrix3c::Zero();
    for (int j = 0; j < 3; ++j) {
      for (int i = 0; i <= j; ++i) {
        a(i, j) = complex_normal(rng);
        b(i, j) = complex_normal(rng);
      }
    }
    const OracleResult r = eig_3x3_extended(a, b);
    std::vector<ProjectiveValue> got, want;
    for (const auto& e : r.eigenvalues) got.push_back(e.projective());
    for (int i = 0; i < 3; ++i) want.push_back(ProjectiveValue::finite(a(i, i) / b(i, i)));
    // Ratios rounded once in binary64, so only working precision is checkable here.
    EXPECT_LE(max_relative_error(got, want).value, 8 * u);
  }
}

TEST(Oracle3x3, RootResidualsOnStressPencils) {
  auto rng = trial_rng(2, 0);
  const StressDistribution dist;
  for (int t = 0; t < 500; ++t) {
    const ComplexMatrix h = random_stress_hessenberg(3, dist, rng);
    const ComplexMatrix g = random_stress_hessenberg(3, dist, rng);
    const OracleResult r = eig_3x3_extended(h, g);
    if (r.singular) continue;
    EXPECT_TRUE(r.residual_ok);
    EXPECT_LE(r.max_root_residual, std::ldexp(1.0, -90));
  }
}

TEST(Oracle2x2, TriangularRatios) {
  TriangularPencil2 p;
  p.alpha1 = 2.0;
  p.alpha2 = 3.0;
  p.a = 7.0;
  p.b = -1.0;
  auto [s1, s2] = eig_2x2_triangular(p);
  EXPECT_EQ(s1, ProjectiveValue::finite(2.0));
  EXPECT_EQ(s2, ProjectiveValue::finite(3.0));
  p.beta2 = 0.0;
  std::tie(s1, s2) = eig_2x2_triangular(p);
  EXPECT_TRUE(s2.is_infinite());
}

TEST(Oracle2x2, MatchesCharacteristicPolynomial) {
  auto rng = trial_rng(3, 0);
  for (int t = 0; t < 500; ++t) {
    Matrix2c a, b;
    for (int k = 0; k < 4; ++k) {
      a(k) = complex_normal(rng);
      b(k) = complex_normal(rng);
    }
    const auto ev = eig_2x2(a, b);
    const ComplexMatrix c = b.inverse() * a;
    const Eigen::ComplexEigenSolver<ComplexMatrix> es(c, false);
    const std::vector<ProjectiveValue> want{ProjectiveValue::finite(es.eigenvalues()(0)),
                                            ProjectiveValue::finite(es.eigenvalues()(1))};
    for (double d : greedy_chordal_matching({ev[0], ev[1]}, want)) EXPECT_LE(d, 1e-10);
  }
}

TEST(Oracle2x2, SingularPencilThrows) {
  Matrix2c a = Matrix2c::Zero(), b = Matrix2c::Zero();
  a(0, 0) = 1.0;
  b(0, 0) = 1.0;
  EXPECT_THROW(eig_2x2(a, b), IndeterminateValue);
}

TEST(RelativeError, SpecExamples) {
  const auto f = [](double x) { return ProjectiveValue::finite(x); };
  EXPECT_EQ(max_relative_error({f(1), f(2)}, {f(1), f(2)}).value, 0.0);
  const auto swapped = max_relative_error({f(2), f(1)}, {f(1), f(2)});
  EXPECT_EQ(swapped.value, 0.0);
  EXPECT_EQ(swapped.assignment, (std::vector<int>{1, 0}));
  EXPECT_NEAR(max_relative_error({f(1.001), f(10)}, {f(1), f(10)}).value, 1e-3, 1e-15);
}

TEST(RelativeError, InfiniteAndZeroReferences) {
  const auto inf = ProjectiveValue::infinity();
  const auto big = ProjectiveValue::finite(1e12);
  const auto r = max_relative_error({big}, {inf});
  EXPECT_NEAR(r.value, 1e-12, 1e-27);
  EXPECT_TRUE(r.fallback);
  const auto z = max_relative_error({ProjectiveValue::finite(1e-3)}, {ProjectiveValue::finite(0.0)});
  EXPECT_TRUE(z.fallback);
  EXPECT_NEAR(z.value, chordal_distance(ProjectiveValue::finite(1e-3), ProjectiveValue::finite(0.0)), 1e-18);
  EXPECT_THROW(max_relative_error({big}, {big, inf}), std::invalid_argument);
}

TEST(ChordalMatching, PairsClosestFirst) {
  const auto f = [](double x) { return ProjectiveValue::finite(x); };
  const auto d = greedy_chordal_matching({f(0), f(10)}, {f(10.5), f(0.01)});
  ASSERT_EQ(d.size(), 2u);
  // chi(10, 10.5) ~ 4.7e-3 is below chi(0, 0.01) ~ 1e-2.
  EXPECT_NEAR(d[0], chordal_distance(f(10), f(10.5)), 1e-15);
  EXPECT_NEAR(d[1], chordal_distance(f(0), f(0.01)), 1e-15);
}

}  // namespace
}  // namespace poleswap
