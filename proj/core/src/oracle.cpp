#include "poleswap/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "poleswap/errors.hpp"

namespace poleswap {

std::pair<ProjectiveValue, ProjectiveValue> eig_2x2_triangular(const TriangularPencil2& p) {
  return {p.sigma1(), p.sigma2()};
}

std::array<ProjectiveValue, 2> eig_2x2(const Matrix2c& a_in, const Matrix2c& b_in) {
  double s = 0.0;
  for (Index i = 0; i < 4; ++i) {
    s = std::max({s, std::abs(a_in(i).real()), std::abs(a_in(i).imag()), std::abs(b_in(i).real()),
                  std::abs(b_in(i).imag())});
  }
  if (s == 0.0) {
    throw IndeterminateValue("eig_2x2: singular pencil");
  }
  const Matrix2c a = a_in / s;
  const Matrix2c b = b_in / s;
  // c2 alpha^2 - c1 alpha beta + c0 beta^2 = 0.
  const Complex c2 = b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0);
  const Complex c1 = a(0, 0) * b(1, 1) + a(1, 1) * b(0, 0) - a(0, 1) * b(1, 0) - a(1, 0) * b(0, 1);
  const Complex c0 = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  const Complex d = std::sqrt(c1 * c1 - 4.0 * c2 * c0);
  const Complex q = (std::real(std::conj(c1) * d) >= 0.0) ? 0.5 * (c1 + d) : 0.5 * (c1 - d);
  if (q == 0.0) {
    if (c2 == 0.0 && c0 == 0.0) {
      throw IndeterminateValue("eig_2x2: singular pencil");
    }
    const ProjectiveValue v = (c2 == 0.0) ? ProjectiveValue::infinity() : ProjectiveValue::finite(0.0);
    return {v, v};
  }
  return {ProjectiveValue(q, c2), ProjectiveValue(c0, q)};
}

ProjectiveValue OracleEigenvalue::projective() const {
  if (infinite) {
    return ProjectiveValue::infinity();
  }
  return ProjectiveValue::finite(value.to_complex());
}

namespace {

constexpr int kMaxDegree = 3;

struct Cubic {
  std::array<ComplexDD, kMaxDegree + 1> c;  // p(l) = sum c[k] l^k
  std::array<double, kMaxDegree + 1> mag{};  // sum of |terms| entering c[k]
};

int binary_exponent(const Matrix3c& m) {
  double s = 0.0;
  for (Index i = 0; i < 9; ++i) {
    s = std::max({s, std::abs(m(i).real()), std::abs(m(i).imag())});
  }
  int e = 0;
  if (s > 0.0) std::frexp(s, &e);
  return e;
}

Cubic determinant_polynomial(const Matrix3c& a, const Matrix3c& b) {
  static constexpr std::array<std::array<int, 3>, 6> perms{{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}}};
  static constexpr std::array<int, 6> sign{1, 1, 1, -1, -1, -1};
  Cubic out;
  for (std::size_t t = 0; t < perms.size(); ++t) {
    std::array<ComplexDD, 3> x, y;
    for (int i = 0; i < 3; ++i) {
      x[i] = ComplexDD(a(i, perms[t][i]));
      y[i] = ComplexDD(-b(i, perms[t][i]));
    }
    // (x0 + l y0)(x1 + l y1)(x2 + l y2)
    std::array<ComplexDD, 4> term{x[0] * x[1] * x[2],
                                  y[0] * x[1] * x[2] + x[0] * y[1] * x[2] + x[0] * x[1] * y[2],
                                  y[0] * y[1] * x[2] + y[0] * x[1] * y[2] + x[0] * y[1] * y[2], y[0] * y[1] * y[2]};
    std::array<double, 3> ax, ay;
    for (int i = 0; i < 3; ++i) {
      ax[i] = std::abs(a(i, perms[t][i]));
      ay[i] = std::abs(b(i, perms[t][i]));
    }
    const std::array<double, 4> m{ax[0] * ax[1] * ax[2],
                                  ay[0] * ax[1] * ax[2] + ax[0] * ay[1] * ax[2] + ax[0] * ax[1] * ay[2],
                                  ay[0] * ay[1] * ax[2] + ay[0] * ax[1] * ay[2] + ax[0] * ay[1] * ay[2],
                                  ay[0] * ay[1] * ay[2]};
    for (int k = 0; k <= kMaxDegree; ++k) {
      out.c[k] = sign[t] > 0 ? out.c[k] + term[k] : out.c[k] - term[k];
      out.mag[k] += m[k];
    }
  }
  return out;
}

struct Eval {
  ComplexDD p;
  ComplexDD dp;
};

Eval horner(const std::vector<ComplexDD>& c, const ComplexDD& z) {
  ComplexDD p = c.back();
  ComplexDD dp;
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    dp = dp * z + p;
    p = p * z + c[k];
  }
  return {p, dp};
}

double horner_scale(const std::vector<ComplexDD>& c, double r) {
  double s = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) {
    s = s * r + abs(c[k]).to_double();
  }
  return s;
}

// Starting points on circles whose radii come from the upper convex hull of
// (k, log|c_k|).
std::vector<ComplexDD> newton_polygon_start(const std::vector<ComplexDD>& c) {
  const int d = static_cast<int>(c.size()) - 1;
  std::vector<double> lg(c.size());
  for (int k = 0; k <= d; ++k) {
    const double m = abs(c[k]).to_double();
    lg[k] = m > 0.0 ? std::log(m) : -std::numeric_limits<double>::infinity();
  }
  std::vector<int> hull{0};
  for (int k = 1; k <= d; ++k) {
    if (!std::isfinite(lg[k])) continue;
    while (hull.size() >= 2) {
      const int i = hull[hull.size() - 2];
      const int j = hull.back();
      // Drop j if it lies on or below the chord i -> k.
      if ((lg[j] - lg[i]) * (k - i) <= (lg[k] - lg[i]) * (j - i)) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(k);
  }
  std::vector<ComplexDD> z;
  constexpr double kTwoPi = 6.283185307179586;
  for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
    const int i = hull[h];
    const int j = hull[h + 1];
    const int cnt = j - i;
    const double r = std::exp((lg[i] - lg[j]) / cnt);
    for (int m = 0; m < cnt; ++m) {
      const double th = kTwoPi * m / cnt + 0.4 + 0.7 * static_cast<double>(h);
      z.emplace_back(std::polar(r, th));
    }
  }
  return z;
}

std::vector<ComplexDD> aberth_roots(const std::vector<ComplexDD>& c) {
  std::vector<ComplexDD> z = newton_polygon_start(c);
  const std::size_t d = z.size();
  for (int it = 0; it < 200; ++it) {
    double worst = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const Eval e = horner(c, z[k]);
      if (is_zero(e.p)) continue;
      if (is_zero(e.dp)) {
        worst = 1.0;
        z[k] = z[k] + ComplexDD(std::complex<double>(1e-3, 1e-3)) * z[k];
        continue;
      }
      const ComplexDD w = e.p / e.dp;
      ComplexDD s;
      for (std::size_t j = 0; j < d; ++j) {
        if (j != k) s = s + ComplexDD(DoubleDouble(1.0)) / (z[k] - z[j]);
      }
      const ComplexDD corr = w / (ComplexDD(DoubleDouble(1.0)) - w * s);
      z[k] = z[k] - corr;
      const double zk = abs(z[k]).to_double();
      worst = std::max(worst, zk > 0.0 ? abs(corr).to_double() / zk : abs(corr).to_double());
    }
    if (worst <= 1e-31) break;
  }
  for (auto& r : z) {
    for (int it = 0; it < 3; ++it) {
      const Eval e = horner(c, r);
      if (is_zero(e.p) || is_zero(e.dp)) break;
      r = r - e.p / e.dp;
    }
  }
  return z;
}

}  // namespace

OracleResult eig_3x3_extended(const Matrix3c& a_in, const Matrix3c& b_in) {
  // Power-of-two scaling is exact; eigenvalues scale by 2^(ea - eb).
  const int ea = binary_exponent(a_in);
  const int eb = binary_exponent(b_in);
  Matrix3c a = a_in, b = b_in;
  for (Index i = 0; i < 9; ++i) {
    a(i) = {std::ldexp(a(i).real(), -ea), std::ldexp(a(i).imag(), -ea)};
    b(i) = {std::ldexp(b(i).real(), -eb), std::ldexp(b(i).imag(), -eb)};
  }
  const Cubic cub = determinant_polynomial(a, b);

  OracleResult out;
  constexpr double kNegligible = 1e-28;
  bool all_negligible = true;
  for (int k = 0; k <= kMaxDegree; ++k) {
    if (abs(cub.c[k]).to_double() > kNegligible * cub.mag[k]) all_negligible = false;
  }
  if (all_negligible) {
    out.singular = true;
    return out;
  }

  int top = kMaxDegree;
  int n_inf = 0;
  while (top >= 0 && is_zero(cub.c[top])) {
    --top;
    ++n_inf;
  }
  int n_zero = 0;
  while (n_zero <= top && is_zero(cub.c[n_zero])) ++n_zero;

  std::size_t slot = 0;
  for (int i = 0; i < n_inf && slot < 3; ++i) {
    out.eigenvalues[slot++] = {ComplexDD(), true};
  }
  for (int i = 0; i < n_zero && slot < 3; ++i) {
    out.eigenvalues[slot++] = {ComplexDD(), false};
  }
  if (top - n_zero >= 1) {
    std::vector<ComplexDD> c(cub.c.begin() + n_zero, cub.c.begin() + top + 1);
    for (const ComplexDD& r : aberth_roots(c)) {
      if (slot >= 3) break;
      const Eval e = horner(c, r);
      const double scale = horner_scale(c, abs(r).to_double());
      const double res = scale > 0.0 ? abs(e.p).to_double() / scale : 0.0;
      out.max_root_residual = std::max(out.max_root_residual, res);
      if (!(res <= std::ldexp(1.0, -90))) out.residual_ok = false;
      out.eigenvalues[slot++] = {ldexp(r, ea - eb), false};
    }
  }
  if (slot != 3) {
    out.singular = true;
  }
  return out;
}

namespace {

double pair_error(const ProjectiveValue& c, const OracleEigenvalue& e, bool& fallback) {
  if (e.infinite) {
    fallback = true;
    if (c.is_infinite()) return 0.0;
    if (c.is_zero()) return std::numeric_limits<double>::infinity();
    return std::abs(c.beta()) / std::abs(c.alpha());
  }
  if (is_zero(e.value)) {
    fallback = true;
    return chordal_distance(c, ProjectiveValue::finite(0.0));
  }
  if (c.is_infinite()) {
    return std::numeric_limits<double>::infinity();
  }
  const ComplexDD lam = ComplexDD(c.alpha()) / ComplexDD(c.beta());
  return (abs(lam - e.value) / abs(e.value)).to_double();
}

}  // namespace

RelativeErrorResult max_relative_error(const std::vector<ProjectiveValue>& computed,
                                       const std::vector<OracleEigenvalue>& exact) {
  const std::size_t n = computed.size();
  if (exact.size() != n) {
    throw DimensionMismatch("max_relative_error: list lengths differ");
  }
  if (n > 8) {
    throw std::invalid_argument("max_relative_error: at most 8 eigenvalues");
  }
  std::vector<std::vector<double>> err(n, std::vector<double>(n));
  std::vector<std::vector<char>> fb(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      bool f = false;
      err[i][j] = pair_error(computed[i], exact[j], f);
      fb[i][j] = f;
    }
  }
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  RelativeErrorResult best;
  best.value = std::numeric_limits<double>::infinity();
  best.assignment = perm;
  do {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, err[i][perm[i]]);
    if (m < best.value) {
      best.value = m;
      best.assignment = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (n == 0) best.value = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (fb[i][best.assignment[i]]) best.fallback = true;
  }
  return best;
}

RelativeErrorResult max_relative_error(const std::vector<ProjectiveValue>& computed,
                                       const std::vector<ProjectiveValue>& exact) {
  std::vector<OracleEigenvalue> ex;
  ex.reserve(exact.size());
  for (const auto& e : exact) {
    if (e.is_infinite()) {
      ex.push_back({ComplexDD(), true});
    } else {
      ex.push_back({ComplexDD(e.alpha()) / ComplexDD(e.beta()), false});
    }
  }
  return max_relative_error(computed, ex);
}

std::vector<double> greedy_chordal_matching(const std::vector<ProjectiveValue>& a,
                                            const std::vector<ProjectiveValue>& b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("greedy_chordal_matching: list lengths differ");
  }
  const std::size_t n = a.size();
  std::vector<char> used_a(n, 0), used_b(n, 0);
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t round = 0; round < n; ++round) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (used_a[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (used_b[j]) continue;
        const double d = chordal_distance(a[i], b[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    used_a[bi] = used_b[bj] = 1;
    out.push_back(best);
  }
  return out;
}

}  // namespace poleswap
