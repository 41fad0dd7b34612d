#include "poleswap/double_double.hpp"

#include <algorithm>

namespace poleswap {

DoubleDouble operator+(const DoubleDouble& a, const DoubleDouble& b) {
  double s, e, t, f;
  two_sum(a.hi, b.hi, s, e);
  two_sum(a.lo, b.lo, t, f);
  e += t;
  quick_two_sum(s, e, s, e);
  e += f;
  quick_two_sum(s, e, s, e);
  return {s, e};
}

DoubleDouble operator-(const DoubleDouble& a, const DoubleDouble& b) { return a + (-b); }

DoubleDouble operator*(const DoubleDouble& a, const DoubleDouble& b) {
  double p, e;
  two_prod(a.hi, b.hi, p, e);
  e += a.hi * b.lo + a.lo * b.hi;
  quick_two_sum(p, e, p, e);
  return {p, e};
}

DoubleDouble operator/(const DoubleDouble& a, const DoubleDouble& b) {
  const double q1 = a.hi / b.hi;
  DoubleDouble r = a - DoubleDouble(q1) * b;
  const double q2 = r.hi / b.hi;
  r = r - DoubleDouble(q2) * b;
  const double q3 = r.hi / b.hi;
  double s, e;
  quick_two_sum(q1, q2, s, e);
  return DoubleDouble(s, e) + DoubleDouble(q3);
}

DoubleDouble sqrt(const DoubleDouble& a) {
  if (a.hi <= 0.0) {
    return {};
  }
  // One Newton step on the double root doubles the precision.
  const double x = std::sqrt(a.hi);
  const DoubleDouble xx = DoubleDouble(x) * DoubleDouble(x);
  const double corr = (a - xx).hi / (2.0 * x);
  double s, e;
  quick_two_sum(x, corr, s, e);
  return {s, e};
}

ComplexDD operator/(const ComplexDD& a, const ComplexDD& b) {
  // Scale the divisor by a power of two so |b| ~ 1; exact and overflow-free.
  const double m = std::max(std::abs(b.re.hi), std::abs(b.im.hi));
  int ex = 0;
  std::frexp(m, &ex);
  const ComplexDD bs = ldexp(b, -ex);
  const ComplexDD as = ldexp(a, -ex);
  const DoubleDouble d = norm(bs);
  const DoubleDouble re = (as.re * bs.re + as.im * bs.im) / d;
  const DoubleDouble im = (as.im * bs.re - as.re * bs.im) / d;
  return {re, im};
}

DoubleDouble abs(const ComplexDD& a) {
  const double m = std::max(std::abs(a.re.hi), std::abs(a.im.hi));
  if (m == 0.0) {
    return {};
  }
  int ex = 0;
  std::frexp(m, &ex);
  return ldexp(sqrt(norm(ldexp(a, -ex))), ex);
}

ComplexDD ldexp(const ComplexDD& a, int e) { return {ldexp(a.re, e), ldexp(a.im, e)}; }

}  // namespace poleswap
