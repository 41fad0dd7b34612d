#include "poleswap/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "poleswap/errors.hpp"

namespace poleswap {

namespace {

double max_component(Complex z) { return std::max(std::abs(z.real()), std::abs(z.imag())); }

bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

ProjectiveValue::ProjectiveValue(Complex alpha, Complex beta) {
  if (!is_finite(alpha) || !is_finite(beta)) {
    throw std::invalid_argument("projective value: non-finite component");
  }
  // Two-stage scaling: componentwise first so |.| cannot overflow or
  // underflow, then by the larger modulus.
  const double s = std::max(max_component(alpha), max_component(beta));
  if (s == 0.0) {
    throw IndeterminateValue("indeterminate 0/0 value: caller should treat as deflation");
  }
  alpha /= s;
  beta /= s;
  const double m = std::max(std::abs(alpha), std::abs(beta));
  alpha_ = alpha / m;
  beta_ = beta / m;
}

Complex ProjectiveValue::value() const noexcept {
  if (is_infinite()) {
    return {std::numeric_limits<double>::infinity(), 0.0};
  }
  return alpha_ / beta_;
}

ProjectiveValue make_projective(Complex alpha, Complex beta) { return {alpha, beta}; }

bool projective_modulus_at_least(const ProjectiveValue& p, const ProjectiveValue& q) noexcept {
  return std::abs(p.alpha()) * std::abs(q.beta()) >= std::abs(q.alpha()) * std::abs(p.beta());
}

double cross_ratio(const ProjectiveValue& p, const ProjectiveValue& q) noexcept {
  return std::abs(p.alpha() * q.beta() - q.alpha() * p.beta());
}

double chordal_distance(const ProjectiveValue& p, const ProjectiveValue& q) noexcept {
  const double np = std::hypot(std::abs(p.alpha()), std::abs(p.beta()));
  const double nq = std::hypot(std::abs(q.alpha()), std::abs(q.beta()));
  return std::min(1.0, cross_ratio(p, q) / (np * nq));
}

Matrix2c CoreTransformation::matrix() const {
  Matrix2c g;
  g << c, -std::conj(s), s, std::conj(c);
  return g;
}

CoreTransformation CoreTransformation::phase_normalized() const {
  const Complex lead = (c != 0.0) ? c : s;
  if (lead == 0.0) {
    return *this;
  }
  const Complex phase = std::conj(lead) / std::abs(lead);
  return {c * phase, s * phase, index};
}

std::optional<CoreAnnihilation> core_annihilating(Complex v0, Complex v1, Index index) {
  const double scale = std::max(max_component(v0), max_component(v1));
  if (scale == 0.0) {
    return std::nullopt;
  }
  if (v1 == 0.0) {
    const double r = std::abs(v0);
    return CoreAnnihilation{{v0 / r, Complex{0.0}, index}, r};
  }
  const Complex w0 = v0 / scale;
  const Complex w1 = v1 / scale;
  const double r = std::sqrt(std::norm(w0) + std::norm(w1));
  return CoreAnnihilation{{w0 / r, w1 / r, index}, r * scale};
}

void apply_core(ComplexMatrix& m, const CoreTransformation& g, Side side, bool conjugate) {
  const Index j = g.index;
  const Complex c = g.c;
  const Complex s = g.s;
  const Complex cb = std::conj(c);
  const Complex sb = std::conj(s);
  if (side == Side::left) {
    if (j < 0 || j + 1 >= m.rows()) {
      throw std::out_of_range("apply_core: row index " + std::to_string(j) + " out of range");
    }
    for (Index col = 0; col < m.cols(); ++col) {
      const Complex x = m(j, col);
      const Complex y = m(j + 1, col);
      if (conjugate) {
        m(j, col) = cb * x + sb * y;
        m(j + 1, col) = -s * x + c * y;
      } else {
        m(j, col) = c * x - sb * y;
        m(j + 1, col) = s * x + cb * y;
      }
    }
  } else {
    if (j < 0 || j + 1 >= m.cols()) {
      throw std::out_of_range("apply_core: column index " + std::to_string(j) + " out of range");
    }
    for (Index row = 0; row < m.rows(); ++row) {
      const Complex x = m(row, j);
      const Complex y = m(row, j + 1);
      if (conjugate) {
        m(row, j) = x * cb - y * s;
        m(row, j + 1) = x * sb + y * c;
      } else {
        m(row, j) = x * c + y * s;
        m(row, j + 1) = -x * sb + y * cb;
      }
    }
  }
}

ComplexMatrix embed_core(const CoreTransformation& g, Index n) {
  ComplexMatrix e = ComplexMatrix::Identity(n, n);
  if (g.index < 0 || g.index + 1 >= n) {
    throw std::out_of_range("embed_core: index out of range");
  }
  e.block<2, 2>(g.index, g.index) = g.matrix();
  return e;
}

double unitarity_deviation(const CoreTransformation& g) {
  const Matrix2c m = g.matrix();
  return (m.adjoint() * m - Matrix2c::Identity()).norm();
}

double frobenius_norm(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.stableNorm(); }

double two_norm_2x2(const Matrix2c& m) {
  double scale = 0.0;
  for (Index i = 0; i < 4; ++i) {
    scale = std::max(scale, max_component(m(i)));
  }
  if (scale == 0.0) {
    return 0.0;
  }
  const Matrix2c w = m / scale;
  const double f2 = w.squaredNorm();
  const double det = std::abs(w(0, 0) * w(1, 1) - w(0, 1) * w(1, 0));
  const double disc = std::max(0.0, f2 * f2 - 4.0 * det * det);
  return scale * std::sqrt(0.5 * (f2 + std::sqrt(disc)));
}

MatrixNorms matrix_norms(const ComplexMatrix& m) {
  MatrixNorms out;
  out.frobenius = frobenius_norm(m);
  if (m.rows() == 2 && m.cols() == 2) {
    out.two_norm = two_norm_2x2(m);
  }
  return out;
}

bool all_finite(const ComplexMatrix& m) {
  for (Index i = 0; i < m.size(); ++i) {
    if (!is_finite(m(i))) {
      return false;
    }
  }
  return true;
}

void require_finite(const ComplexMatrix& m, std::string_view what) {
  if (!all_finite(m)) {
    throw std::invalid_argument(std::string(what) + ": matrix has non-finite entries");
  }
}

}  // namespace poleswap
