#include "poleswap/moves.hpp"

#include <stdexcept>
#include <string>

#include "poleswap/errors.hpp"

namespace poleswap {

namespace {

void require_active(const HessenbergPencil& p, const char* what) {
  if (p.active_size() < 2) {
    throw std::invalid_argument(std::string(what) + ": active block must have size >= 2");
  }
}

CoreTransformation larger_pair(Complex a0, Complex a1, Complex b0, Complex b1, Index index) {
  const double na = std::abs(a0) + std::abs(a1);
  const double nb = std::abs(b0) + std::abs(b1);
  const auto g = na >= nb ? core_annihilating(a0, a1, index) : core_annihilating(b0, b1, index);
  return g ? g->core : CoreTransformation::identity(index);
}

void left(HessenbergPencil& p, const CoreTransformation& g, Transforms* acc) {
  apply_core(p.A, g, Side::left, true);
  apply_core(p.B, g, Side::left, true);
  if (acc) apply_core(acc->q, g, Side::right, false);
}

void right(HessenbergPencil& p, const CoreTransformation& g, Transforms* acc) {
  apply_core(p.A, g, Side::right, false);
  apply_core(p.B, g, Side::right, false);
  if (acc) apply_core(acc->z, g, Side::right, false);
}

void check_deflation(HessenbergPencil& p, Index j, double eps, MoveRecord& r) {
  if (subdiagonal_negligible(p, j, eps)) {
    p.A(j + 1, j) = 0.0;
    p.B(j + 1, j) = 0.0;
    r.deflation = classify_deflation(p, j);
  }
}

}  // namespace

MoveRecord move_type1_top(HessenbergPencil& p, const ProjectiveValue& rho, Transforms* acc,
                          const MoveOptions& opt) {
  require_active(p, "move_type1_top");
  const Index lo = p.lo;
  MoveRecord r;
  r.kind = MoveKind::type1_top;
  r.index = lo;
  r.pole_in = rho;
  r.pole_out = pole_at(p, lo);
  r.upper = rho;
  r.lower = r.pole_out;

  const Complex al = rho.alpha();
  const Complex be = rho.beta();
  const Complex v0 = be * p.A(lo, lo) - al * p.B(lo, lo);
  const Complex v1 = be * p.A(lo + 1, lo) - al * p.B(lo + 1, lo);
  CoreTransformation g = CoreTransformation::identity(lo);
  if (v1 == 0.0 && v0 != 0.0) {
    // Pole already equals rho.
  } else if (const auto h = core_annihilating(v0, v1, lo)) {
    g = h->core;
  } else {
    // (beta A - alpha B) e1 = 0: the leading columns are proportional.
    g = larger_pair(p.A(lo, lo), p.A(lo + 1, lo), p.B(lo, lo), p.B(lo + 1, lo), lo);
  }
  if (!g.is_identity()) left(p, g, acc);
  if (be == 0.0) p.B(lo + 1, lo) = 0.0;
  if (al == 0.0) p.A(lo + 1, lo) = 0.0;
  r.q = g;
  check_deflation(p, lo, opt.eps, r);
  return r;
}

MoveRecord move_type1_bottom(HessenbergPencil& p, const ProjectiveValue& tau, Transforms* acc,
                             const MoveOptions& opt) {
  require_active(p, "move_type1_bottom");
  const Index n = p.hi - 1;
  MoveRecord r;
  r.kind = MoveKind::type1_bottom;
  r.index = n;
  r.pole_in = tau;
  r.pole_out = pole_at(p, n - 1);
  r.upper = r.pole_out;
  r.lower = tau;

  const Complex al = tau.alpha();
  const Complex be = tau.beta();
  const Complex w0 = be * p.A(n, n - 1) - al * p.B(n, n - 1);
  const Complex w1 = be * p.A(n, n) - al * p.B(n, n);
  CoreTransformation g = CoreTransformation::identity(n - 1);
  if (w0 == 0.0 && w1 != 0.0) {
    // Pole already equals tau.
  } else if (const auto h = core_annihilating(w1, -w0, n - 1)) {
    g = h->core;
  } else {
    g = larger_pair(p.A(n, n), -p.A(n, n - 1), p.B(n, n), -p.B(n, n - 1), n - 1);
  }
  if (!g.is_identity()) right(p, g, acc);
  if (be == 0.0) p.B(n, n - 1) = 0.0;
  if (al == 0.0) p.A(n, n - 1) = 0.0;
  r.z = g;
  check_deflation(p, n - 1, opt.eps, r);
  return r;
}

MoveRecord move_type2(HessenbergPencil& p, Index k, Transforms* acc, const MoveOptions& opt) {
  if (k <= p.lo || k + 1 >= p.hi) {
    throw std::out_of_range("move_type2: index " + std::to_string(k) + " outside the active block");
  }
  MoveRecord r;
  r.kind = MoveKind::type2;
  r.index = k;
  r.upper = pole_at(p, k - 1);
  r.lower = pole_at(p, k);
  r.pole_in = r.upper;
  r.pole_out = r.lower;

  TriangularPencil2 sub;
  sub.alpha1 = p.A(k, k - 1);
  sub.a = p.A(k, k);
  sub.alpha2 = p.A(k + 1, k);
  sub.beta1 = p.B(k, k - 1);
  sub.b = p.B(k, k);
  sub.beta2 = p.B(k + 1, k);
  SwapReport rep = swap2x2(sub, opt.method);
  rep.q.index = k;
  rep.z.index = k - 1;
  r.q = rep.q;
  r.z = rep.z;
  r.skipped = rep.skipped;
  r.res_a = rep.res_a;
  r.res_b = rep.res_b;
  if (rep.skipped) {
    return r;
  }

  right(p, rep.z, acc);
  left(p, rep.q, acc);
  // The block takes the kernel's values, including its zeroed (2,1) entries.
  const TriangularPencil2& t = rep.result;
  p.A(k, k - 1) = t.alpha1;
  p.A(k, k) = t.a;
  p.A(k + 1, k) = t.alpha2;
  p.A(k + 1, k - 1) = 0.0;
  p.B(k, k - 1) = t.beta1;
  p.B(k, k) = t.b;
  p.B(k + 1, k) = t.beta2;
  p.B(k + 1, k - 1) = 0.0;
  return r;
}

}  // namespace poleswap
