#pragma once

#include <cmath>
#include <complex>

namespace poleswap {

// Error-free transformations.
inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  const double bb = s - a;
  e = (a - (s - bb)) + (b - bb);
}

inline void quick_two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  e = b - (s - a);
}

inline void two_prod(double a, double b, double& p, double& e) {
  p = a * b;
  e = std::fma(a, b, -p);
}

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
struct DoubleDouble {
  double hi{0.0};
  double lo{0.0};

  constexpr DoubleDouble() = default;
  constexpr DoubleDouble(double h) : hi(h) {}  // NOLINT: implicit widening is intended
  constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}

  double to_double() const { return hi + lo; }
};

DoubleDouble operator+(const DoubleDouble& a, const DoubleDouble& b);
DoubleDouble operator-(const DoubleDouble& a, const DoubleDouble& b);
DoubleDouble operator*(const DoubleDouble& a, const DoubleDouble& b);
DoubleDouble operator/(const DoubleDouble& a, const DoubleDouble& b);
inline DoubleDouble operator-(const DoubleDouble& a) { return {-a.hi, -a.lo}; }

DoubleDouble sqrt(const DoubleDouble& a);
inline DoubleDouble abs(const DoubleDouble& a) { return a.hi < 0.0 ? -a : a; }
inline DoubleDouble ldexp(const DoubleDouble& a, int e) { return {std::ldexp(a.hi, e), std::ldexp(a.lo, e)}; }

inline bool operator<(const DoubleDouble& a, const DoubleDouble& b) {
  return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool is_zero(const DoubleDouble& a) { return a.hi == 0.0 && a.lo == 0.0; }

struct ComplexDD {
  DoubleDouble re;
  DoubleDouble im;

  constexpr ComplexDD() = default;
  constexpr ComplexDD(DoubleDouble r, DoubleDouble i = {}) : re(r), im(i) {}
  ComplexDD(std::complex<double> z) : re(z.real()), im(z.imag()) {}  // NOLINT

  std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
};

inline ComplexDD operator+(const ComplexDD& a, const ComplexDD& b) { return {a.re + b.re, a.im + b.im}; }
inline ComplexDD operator-(const ComplexDD& a, const ComplexDD& b) { return {a.re - b.re, a.im - b.im}; }
inline ComplexDD operator-(const ComplexDD& a) { return {-a.re, -a.im}; }
inline ComplexDD operator*(const ComplexDD& a, const ComplexDD& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
ComplexDD operator/(const ComplexDD& a, const ComplexDD& b);

inline DoubleDouble norm(const ComplexDD& a) { return a.re * a.re + a.im * a.im; }
DoubleDouble abs(const ComplexDD& a);
inline bool is_zero(const ComplexDD& a) { return is_zero(a.re) && is_zero(a.im); }
ComplexDD ldexp(const ComplexDD& a, int e);

}  // namespace poleswap
