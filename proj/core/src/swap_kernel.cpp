#include "poleswap/swap_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace poleswap {

namespace {

CoreTransformation annihilator(Complex v0, Complex v1) {
  const auto g = core_annihilating(v0, v1);
  return g ? g->core : CoreTransformation::identity(0);
}

// Core from the first column of the preferred product, falling back to the
// other product if that column vanishes.
CoreTransformation q_from_columns(const Matrix2c& preferred, const Matrix2c& other) {
  if (preferred(0, 0) != 0.0 || preferred(1, 0) != 0.0) {
    return annihilator(preferred(0, 0), preferred(1, 0));
  }
  return annihilator(other(0, 0), other(1, 0));
}

SwapReport finish(const TriangularPencil2& p, const CoreTransformation& q, const CoreTransformation& z,
                  const Matrix2c& az, const Matrix2c& bz) {
  const Matrix2c qh = q.matrix().adjoint();
  const Matrix2c ah = qh * az;
  const Matrix2c bh = qh * bz;

  const double na = two_norm_2x2(p.a_matrix());
  const double nb = two_norm_2x2(p.b_matrix());
  const double delta = std::max(na, nb);
  const double ea = std::abs(ah(1, 0));
  const double eb = std::abs(bh(1, 0));

  SwapReport r;
  r.q = q;
  r.z = z;
  r.res_a = na > 0.0 ? ea / na : ea;
  r.res_b = nb > 0.0 ? eb / nb : eb;
  r.res_a_delta = ea / delta;
  r.res_b_delta = eb / delta;

  TriangularPencil2& t = r.result;
  t.alpha1 = ah(0, 0);
  t.a = ah(0, 1);
  t.alpha2 = ah(1, 1);
  t.beta1 = bh(0, 0);
  t.b = bh(0, 1);
  t.beta2 = bh(1, 1);
  // Exact zeros on the diagonal travel with their eigenvalue.
  if (p.beta2 == 0.0) t.beta1 = 0.0;
  if (p.beta1 == 0.0) t.beta2 = 0.0;
  if (p.alpha2 == 0.0) t.alpha1 = 0.0;
  if (p.alpha1 == 0.0) t.alpha2 = 0.0;
  return r;
}

SwapReport skipped(const TriangularPencil2& p) {
  SwapReport r;
  r.q = CoreTransformation::identity(0);
  r.z = CoreTransformation::identity(0);
  r.result = p;
  r.skipped = true;
  return r;
}

SwapReport swap_sylvester(const TriangularPencil2& p) {
  // alpha1 r - alpha2 l = -a, beta1 r - beta2 l = -b, partial pivoting on r.
  Complex m00 = p.alpha1, m01 = -p.alpha2, f0 = -p.a;
  Complex m10 = p.beta1, m11 = -p.beta2, f1 = -p.b;
  if (std::abs(m10) > std::abs(m00)) {
    std::swap(m00, m10);
    std::swap(m01, m11);
    std::swap(f0, f1);
  }
  const Complex mult = m10 / m00;
  const Complex u11 = m11 - mult * m01;
  const Complex g1 = f1 - mult * f0;
  if (u11 == 0.0) {
    return skipped(p);
  }
  const Complex l = g1 / u11;
  const Complex r = (f0 - m01 * l) / m00;
  const CoreTransformation z = annihilator(r, Complex{1.0});
  const CoreTransformation q = annihilator(l, Complex{1.0});
  const Matrix2c zm = z.matrix();
  return finish(p, q, z, p.a_matrix() * zm, p.b_matrix() * zm);
}

}  // namespace

Matrix2c TriangularPencil2::a_matrix() const {
  Matrix2c m;
  m << alpha1, a, Complex{0.0}, alpha2;
  return m;
}

Matrix2c TriangularPencil2::b_matrix() const {
  Matrix2c m;
  m << beta1, b, Complex{0.0}, beta2;
  return m;
}

std::string_view to_string(SwapMethod m) {
  switch (m) {
    case SwapMethod::new_method:
      return "new";
    case SwapMethod::van_dooren:
      return "vandooren";
    case SwapMethod::sylvester:
      return "sylvester";
  }
  return "unknown";
}

SwapMethod parse_swap_method(std::string_view s) {
  if (s == "new") return SwapMethod::new_method;
  if (s == "vandooren") return SwapMethod::van_dooren;
  if (s == "sylvester") return SwapMethod::sylvester;
  throw std::invalid_argument("unknown swap method '" + std::string(s) + "'");
}

SwapReport swap2x2(const TriangularPencil2& p, SwapMethod method) {
  const Complex x1 = p.alpha2 * p.b - p.beta2 * p.a;
  const Complex x2 = p.beta2 * p.alpha1 - p.alpha2 * p.beta1;
  if (x2 == 0.0) {
    return skipped(p);
  }
  if (method == SwapMethod::sylvester) {
    return swap_sylvester(p);
  }

  const CoreTransformation z = annihilator(x1, x2);
  const Matrix2c zm = z.matrix();
  const Matrix2c az = p.a_matrix() * zm;
  const Matrix2c bz = p.b_matrix() * zm;

  bool use_b = true;
  if (method == SwapMethod::new_method) {
    use_b = projective_modulus_at_least(p.sigma1(), p.sigma2());
  } else {
    use_b = bz.col(0).stableNorm() >= az.col(0).stableNorm();
  }
  const CoreTransformation q = use_b ? q_from_columns(bz, az) : q_from_columns(az, bz);
  return finish(p, q, z, az, bz);
}

ExactSwapVectors exact_swap_vectors(const TriangularPencil2& p) {
  const Complex d21 = p.beta2 * p.alpha1 - p.alpha2 * p.beta1;
  const Complex d12 = p.beta1 * p.alpha2 - p.alpha1 * p.beta2;
  ExactSwapVectors e;
  e.x = {p.alpha2 * p.b - p.beta2 * p.a, d21};
  e.y = {p.alpha1 * p.b - p.beta1 * p.a, d21};
  e.v = {d12, p.alpha1 * p.b - p.beta1 * p.a};
  e.w = {d12, p.alpha2 * p.b - p.beta2 * p.a};
  return e;
}

double flip_swap_equivalence_check(const TriangularPencil2& p) {
  const ExactSwapVectors e = exact_swap_vectors(p);
  if (e.v[0] == 0.0 && e.v[1] == 0.0) {
    return 0.0;
  }

  // Q first: v^T Q = zeta e2^T, then Z from the second row of Q^* B (or Q^* A).
  const CoreTransformation q1 = annihilator(e.v[1], -e.v[0]);
  const Matrix2c qh = q1.matrix().adjoint();
  const Matrix2c qb = qh * p.b_matrix();
  const Matrix2c qa = qh * p.a_matrix();
  const bool row_b = qb(1, 0) != 0.0 || qb(1, 1) != 0.0;
  const Matrix2c& src = row_b ? qb : qa;
  const CoreTransformation z1 = annihilator(src(1, 1), -src(1, 0));

  // Case 1 on the flipped pencil, Q from Bf Zf e1 (or Af Zf e1), then unflip.
  TriangularPencil2 f;
  f.alpha1 = p.alpha2;
  f.alpha2 = p.alpha1;
  f.beta1 = p.beta2;
  f.beta2 = p.beta1;
  f.a = p.a;
  f.b = p.b;
  const Complex fx1 = f.alpha2 * f.b - f.beta2 * f.a;
  const Complex fx2 = f.beta2 * f.alpha1 - f.alpha2 * f.beta1;
  const CoreTransformation zf = annihilator(fx1, fx2);
  const Matrix2c zfm = zf.matrix();
  const Matrix2c bfz = f.b_matrix() * zfm;
  const Matrix2c afz = f.a_matrix() * zfm;
  const CoreTransformation qf = row_b ? q_from_columns(bfz, afz) : q_from_columns(afz, bfz);

  // F conj(G) F keeps c and negates s.
  const CoreTransformation q2{zf.c, -zf.s, 0};
  const CoreTransformation z2{qf.c, -qf.s, 0};

  auto dev = [](const CoreTransformation& g, const CoreTransformation& h) {
    const CoreTransformation gn = g.phase_normalized();
    const CoreTransformation hn = h.phase_normalized();
    return std::max(std::abs(gn.c - hn.c), std::abs(gn.s - hn.s));
  };
  return std::max(dev(q1, q2), dev(z1, z2));
}

}  // namespace poleswap
