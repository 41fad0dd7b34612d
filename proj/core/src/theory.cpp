#include "poleswap/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "poleswap/errors.hpp"

namespace poleswap {

namespace {

std::string describe(const ProjectiveValue& v) {
  if (v.is_infinite()) return "inf";
  const Complex z = v.value();
  return "(" + std::to_string(z.real()) + "," + std::to_string(z.imag()) + ")";
}

ComplexMatrix shifted(const ComplexMatrix& a, const ComplexMatrix& b, const ProjectiveValue& s) {
  return s.beta() * a - s.alpha() * b;
}

Eigen::PartialPivLU<ComplexMatrix> factor(const ComplexMatrix& m, const ProjectiveValue& pole) {
  Eigen::PartialPivLU<ComplexMatrix> lu(m);
  // rcond() reports 1 when a pivot is exactly zero, so test the pivots first.
  const bool zero_pivot = (lu.matrixLU().diagonal().array() == Complex(0.0)).any();
  if (zero_pivot || !(lu.rcond() > static_cast<double>(m.rows()) * kUnitRoundoff)) {
    throw SingularFactor("singular shifted factor at pole " + describe(pole));
  }
  return lu;
}

Subspace leading_columns(const ComplexMatrix& m, Index d) { return Subspace{m.leftCols(d)}; }

// One factor per step, continued from the newest basis vector. The span after
// step i is prod_{l<=i} (C - sigma_l I)^-1 K_{i+1}(C, v) with infinite poles
// contributing C. Forming K_j(C, v) first and applying the inverses afterwards
// spans the same space but loses up to eight digits on 8x8 pencils.
template <class Step>
Subspace rational_arnoldi(const ComplexVector& v, const std::vector<ProjectiveValue>& poles, Step step) {
  const Index n = v.size();
  const Index j = static_cast<Index>(poles.size()) + 1;
  ComplexMatrix basis(n, j);
  const double nv = v.norm();
  if (nv == 0.0) return Subspace{ComplexMatrix(n, 0)};
  basis.col(0) = v / nv;
  Index built = 1;
  for (Index i = 1; i < j; ++i) {
    ComplexVector w = step(basis.col(built - 1), poles[static_cast<std::size_t>(i - 1)]);
    const double scale = w.norm();
    for (int pass = 0; pass < 2; ++pass) {
      w -= basis.leftCols(built) * (basis.leftCols(built).adjoint() * w);
    }
    const double nw = w.norm();
    // Invariant subspace reached: the space stops growing.
    if (!(nw > scale * 1e-13)) break;
    basis.col(built++) = w / nw;
  }
  return Subspace{basis.leftCols(built)};
}

}  // namespace

Subspace Subspace::span(const ComplexMatrix& columns, double rank_tol) {
  const Index n = columns.rows();
  if (columns.cols() == 0) {
    return Subspace{ComplexMatrix(n, 0)};
  }
  Eigen::ColPivHouseholderQR<ComplexMatrix> qr(columns);
  qr.setThreshold(rank_tol);
  const Index r = qr.rank();
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, r);
  return Subspace{std::move(q)};
}

Subspace Subspace::leading(Index n, Index k) { return Subspace{ComplexMatrix::Identity(n, k)}; }

double principal_angle(const Subspace& s1, const Subspace& s2) {
  if (s1.ambient() != s2.ambient() || s1.dim() != s2.dim()) {
    throw DimensionMismatch("principal_angle: subspaces of different shape");
  }
  if (s1.dim() == 0) {
    return 0.0;
  }
  const ComplexMatrix c = s1.basis.adjoint() * s2.basis;
  const ComplexMatrix resid = s2.basis - s1.basis * c;
  const Eigen::JacobiSVD<ComplexMatrix> sv(resid);
  const double sine = std::min(1.0, sv.singularValues()(0));
  if (sine < 0.5) {
    return std::asin(sine);
  }
  const Eigen::JacobiSVD<ComplexMatrix> cv(c);
  const double cosine = std::min(1.0, cv.singularValues()(cv.singularValues().size() - 1));
  return std::acos(cosine);
}

double shifted_condition(const ComplexMatrix& a, const ComplexMatrix& b, const ProjectiveValue& shift) {
  const Eigen::JacobiSVD<ComplexMatrix> sv(shifted(a, b, shift));
  const auto& s = sv.singularValues();
  const double smin = s(s.size() - 1);
  return smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

Subspace rational_krylov_basis(const ComplexMatrix& c, const ComplexVector& v,
                               const std::vector<ProjectiveValue>& poles) {
  const ComplexMatrix id = ComplexMatrix::Identity(c.rows(), c.rows());
  return rational_arnoldi(v, poles, [&](const ComplexVector& q, const ProjectiveValue& p) -> ComplexVector {
    if (p.is_infinite()) return c * q;
    return factor(p.beta() * c - p.alpha() * id, p).solve(q);
  });
}

Subspace rational_krylov_basis(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexVector& v,
                               const std::vector<ProjectiveValue>& poles, QuotientVariant variant) {
  const bool left = variant == QuotientVariant::left_quotient;
  std::optional<Eigen::PartialPivLU<ComplexMatrix>> lub;
  return rational_arnoldi(v, poles, [&](const ComplexVector& q, const ProjectiveValue& p) -> ComplexVector {
    if (p.is_infinite()) {
      if (!lub) lub = factor(b, p);
      return left ? ComplexVector(a * lub->solve(q)) : ComplexVector(lub->solve(a * q));
    }
    // (beta C - alpha I)^-1 is B (beta A - alpha B)^-1 or (beta A - alpha B)^-1 B.
    const auto lu = factor(shifted(a, b, p), p);
    return left ? ComplexVector(b * lu.solve(q)) : ComplexVector(lu.solve(b * q));
  });
}

Subspace apply_rational_operator(const ComplexMatrix& a, const ComplexMatrix& b, const RationalFunctionSpec& spec,
                                 const Subspace& s, QuotientVariant variant) {
  if (spec.zeros.size() != spec.poles.size()) {
    throw DimensionMismatch("apply_rational_operator: zeros and poles differ in length");
  }
  ComplexMatrix w = s.basis;
  for (std::size_t i = 0; i < spec.zeros.size(); ++i) {
    if (spec.zeros[i] == spec.poles[i]) continue;
    const ComplexMatrix num = shifted(a, b, spec.zeros[i]);
    const auto lu = factor(shifted(a, b, spec.poles[i]), spec.poles[i]);
    w = variant == QuotientVariant::left_quotient ? ComplexMatrix(num * lu.solve(w)) : ComplexMatrix(lu.solve(num * w));
    w = Subspace::span(w).basis;
  }
  return Subspace{std::move(w)};
}

MoveAngles verify_move_theorem(const HessenbergPencil& before, const MoveRecord& record) {
  const Index n = before.size();
  MoveAngles out;
  const RationalFunctionSpec spec{{record.upper}, {record.lower}};
  if (record.q) {
    const Index d = record.index + 1;
    const Subspace got = leading_columns(embed_core(*record.q, n), d);
    const Subspace want =
        apply_rational_operator(before.A, before.B, spec, Subspace::leading(n, d), QuotientVariant::left_quotient);
    out.angle_q = principal_angle(got, want);
  }
  if (record.z) {
    const Index d = record.index;
    const Subspace got = leading_columns(embed_core(*record.z, n), d);
    const Subspace want =
        apply_rational_operator(before.A, before.B, spec, Subspace::leading(n, d), QuotientVariant::right_quotient);
    out.angle_z = principal_angle(got, want);
  }
  return out;
}

double verify_bottom_row_direction(const HessenbergPencil& before, const MoveRecord& record) {
  if (record.kind != MoveKind::type1_bottom || !record.z) {
    throw std::invalid_argument("verify_bottom_row_direction: needs a bottom type I record");
  }
  const Index n = before.size();
  ComplexVector en = ComplexVector::Zero(n);
  en(n - 1) = 1.0;
  const ComplexMatrix sig = shifted(before.A, before.B, record.upper);
  const ComplexMatrix tau = shifted(before.A, before.B, record.lower);
  const ComplexMatrix sig_h = sig.adjoint();
  const auto lu = factor(sig_h, record.upper);
  const ComplexVector want = tau.adjoint() * lu.solve(en);
  const ComplexVector got = embed_core(*record.z, n).col(n - 1);
  return principal_angle(Subspace::span(got), Subspace::span(want));
}

double verify_sweep_theorem(const HessenbergPencil& before, const SweepRecord& sweep, const Transforms& acc) {
  const Index n = before.size();
  double worst = 0.0;
  for (Index d = 1; d < n; ++d) {
    RationalFunctionSpec rq, rz;
    for (const MoveRecord& m : sweep.moves) {
      if (m.q && m.index == d - 1) {
        rq.zeros.push_back(m.upper);
        rq.poles.push_back(m.lower);
      }
      if (m.z && m.index == d) {
        rz.zeros.push_back(m.upper);
        rz.poles.push_back(m.lower);
      }
    }
    const Subspace e = Subspace::leading(n, d);
    const Subspace wq = apply_rational_operator(before.A, before.B, rq, e, QuotientVariant::left_quotient);
    const Subspace wz = apply_rational_operator(before.A, before.B, rz, e, QuotientVariant::right_quotient);
    worst = std::max(worst, principal_angle(leading_columns(acc.q, d), wq));
    worst = std::max(worst, principal_angle(leading_columns(acc.z, d), wz));
  }
  return worst;
}

double verify_basic_sweep_theorem(const HessenbergPencil& before, const ProjectiveValue& rho,
                                  const ProjectiveValue& new_pole, const Transforms& acc) {
  const Index n = before.size();
  const std::vector<ProjectiveValue> sigma = poles(before);
  double worst = 0.0;
  for (Index k = 1; k < n; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    const RationalFunctionSpec rq{{rho}, {sigma[uk - 1]}};
    const RationalFunctionSpec rz{{rho}, {k <= n - 2 ? sigma[uk] : new_pole}};
    const Subspace e = Subspace::leading(n, k);
    worst = std::max(worst, principal_angle(leading_columns(acc.q, k), apply_rational_operator(
                                                                            before.A, before.B, rq, e,
                                                                            QuotientVariant::left_quotient)));
    worst = std::max(worst, principal_angle(leading_columns(acc.z, k), apply_rational_operator(
                                                                            before.A, before.B, rz, e,
                                                                            QuotientVariant::right_quotient)));
  }
  return worst;
}

KrylovAngles verify_krylov_identities(const HessenbergPencil& p) {
  const Index n = p.size();
  const std::vector<ProjectiveValue> sigma = poles(p);
  ComplexVector e1 = ComplexVector::Zero(n);
  e1(0) = 1.0;
  KrylovAngles out;
  for (Index j = 1; j < n; ++j) {
    const std::vector<ProjectiveValue> kp(sigma.begin(), sigma.begin() + (j - 1));
    const std::vector<ProjectiveValue> lp(sigma.begin() + 1, sigma.begin() + j);
    const Subspace e = Subspace::leading(n, j);
    const Subspace k = rational_krylov_basis(p.A, p.B, e1, kp, QuotientVariant::left_quotient);
    const Subspace l = rational_krylov_basis(p.A, p.B, e1, lp, QuotientVariant::right_quotient);
    out.k_variant = std::max(out.k_variant, principal_angle(e, k));
    out.l_variant = std::max(out.l_variant, principal_angle(e, l));
  }
  return out;
}

}  // namespace poleswap
