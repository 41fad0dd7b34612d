#include "poleswap/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "poleswap/errors.hpp"

namespace poleswap {

HessenbergPencil::HessenbergPencil(ComplexMatrix a, ComplexMatrix b) : A(std::move(a)), B(std::move(b)) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows()) {
    throw DimensionMismatch("pencil: A and B must be square and of equal size");
  }
  require_finite(A, "pencil A");
  require_finite(B, "pencil B");
  lo = 0;
  hi = A.rows();
}

ProjectiveValue pole_at(const HessenbergPencil& p, Index j) {
  const Complex a = p.A(j + 1, j);
  const Complex b = p.B(j + 1, j);
  if (a == 0.0 && b == 0.0) {
    throw PencilSplit(j, "pencil splits at subdiagonal position " + std::to_string(j));
  }
  return {a, b};
}

std::vector<ProjectiveValue> poles(const HessenbergPencil& p) {
  std::vector<ProjectiveValue> out;
  if (p.active_size() < 2) {
    return out;
  }
  out.reserve(static_cast<std::size_t>(p.active_size() - 1));
  for (Index j = p.lo; j + 1 < p.hi; ++j) {
    out.push_back(pole_at(p, j));
  }
  return out;
}

namespace {

// sigma_min / sigma_max of an m x 2 matrix; 0 when it vanishes.
double column_pair_ratio(const Eigen::MatrixX2cd& m) {
  const Eigen::JacobiSVD<Eigen::MatrixX2cd> svd(m);
  const auto& s = svd.singularValues();
  if (s(0) == 0.0) {
    return 0.0;
  }
  return s(1) / s(0);
}

}  // namespace

PropernessReport check_proper(const HessenbergPencil& p, std::optional<double> tol) {
  const Index lo = p.lo;
  const Index m = p.active_size();
  const double t = tol.value_or(static_cast<double>(std::max<Index>(m, 1)) * kUnitRoundoff);
  PropernessReport r;
  for (Index j = lo; j + 1 < p.hi; ++j) {
    if (p.A(j + 1, j) == 0.0 && p.B(j + 1, j) == 0.0) {
      return {false, ProperViolation::zero_subdiagonal_pair, j};
    }
  }
  if (m < 1) {
    return r;
  }
  Eigen::MatrixX2cd cols(m, 2);
  cols.col(0) = p.A.col(lo).segment(lo, m);
  cols.col(1) = p.B.col(lo).segment(lo, m);
  if (column_pair_ratio(cols) <= t) {
    return {false, ProperViolation::proportional_first_columns, -1};
  }
  Eigen::MatrixX2cd rows(m, 2);
  rows.col(0) = p.A.row(p.hi - 1).segment(lo, m).transpose();
  rows.col(1) = p.B.row(p.hi - 1).segment(lo, m).transpose();
  if (column_pair_ratio(rows) <= t) {
    return {false, ProperViolation::proportional_last_rows, -1};
  }
  return r;
}

double below_subdiagonal_norm(const ComplexMatrix& m) {
  double s = 0.0;
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = j + 2; i < m.rows(); ++i) {
      s += std::norm(m(i, j));
    }
  }
  return std::sqrt(s);
}

double strict_lower_norm(const ComplexMatrix& m) {
  double s = 0.0;
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = j + 1; i < m.rows(); ++i) {
      s += std::norm(m(i, j));
    }
  }
  return std::sqrt(s);
}

ReductionResult reduce_to_hessenberg_triangular(const ComplexMatrix& a, const ComplexMatrix& b) {
  ReductionResult out{HessenbergPencil(a, b), ComplexMatrix(), ComplexMatrix()};
  HessenbergPencil& p = out.pencil;
  const Index n = p.size();
  Transforms t = Transforms::identity(n);

  // B = QR by Givens, bottom-up in each column.
  for (Index j = 0; j + 1 < n; ++j) {
    for (Index i = n - 1; i > j; --i) {
      if (p.B(i, j) == 0.0) continue;
      const auto g = core_annihilating(p.B(i - 1, j), p.B(i, j), i - 1);
      apply_core(p.B, g->core, Side::left, true);
      apply_core(p.A, g->core, Side::left, true);
      apply_core(t.q, g->core, Side::right, false);
      p.B(i, j) = 0.0;
    }
  }

  // Zero A below the subdiagonal; each left core creates fill B(i, i-1),
  // removed by a right core on columns (i-1, i).
  for (Index j = 0; j + 2 < n; ++j) {
    for (Index i = n - 1; i > j + 1; --i) {
      if (p.A(i, j) == 0.0) continue;
      const auto g = core_annihilating(p.A(i - 1, j), p.A(i, j), i - 1);
      apply_core(p.A, g->core, Side::left, true);
      apply_core(p.B, g->core, Side::left, true);
      apply_core(t.q, g->core, Side::right, false);
      p.A(i, j) = 0.0;

      if (p.B(i, i - 1) == 0.0) continue;
      const auto h = core_annihilating(p.B(i, i), -p.B(i, i - 1), i - 1);
      apply_core(p.B, h->core, Side::right, false);
      apply_core(p.A, h->core, Side::right, false);
      apply_core(t.z, h->core, Side::right, false);
      p.B(i, i - 1) = 0.0;
    }
  }
  out.q = std::move(t.q);
  out.z = std::move(t.z);
  return out;
}

bool subdiagonal_negligible(const HessenbergPencil& p, Index j, double eps) {
  auto small = [&](const ComplexMatrix& m) {
    const double sub = std::abs(m(j + 1, j));
    if (sub == 0.0) return true;
    double scale = std::abs(m(j, j)) + std::abs(m(j + 1, j + 1));
    if (scale == 0.0) {
      const Index k = p.active_size();
      scale = frobenius_norm(m.block(p.lo, p.lo, k, k));
    }
    return sub <= eps * scale;
  };
  return small(p.A) && small(p.B);
}

DeflationEvent classify_deflation(const HessenbergPencil& p, Index j) {
  DeflationEvent e;
  e.position = j;
  if (j == p.hi - 2) {
    e.kind = DeflationKind::bottom_eigenvalue;
    e.eigenvalue = ProjectiveValue(p.A(j + 1, j + 1), p.B(j + 1, j + 1));
  } else if (j == p.lo) {
    e.kind = DeflationKind::top_eigenvalue;
    e.eigenvalue = ProjectiveValue(p.A(j, j), p.B(j, j));
  } else {
    e.kind = DeflationKind::split;
  }
  return e;
}

std::vector<DeflationEvent> detect_deflations(HessenbergPencil& p, double eps) {
  std::vector<DeflationEvent> out;
  for (Index j = p.lo; j + 1 < p.hi; ++j) {
    if (subdiagonal_negligible(p, j, eps)) {
      p.A(j + 1, j) = 0.0;
      p.B(j + 1, j) = 0.0;
      out.push_back(classify_deflation(p, j));
    }
  }
  return out;
}

}  // namespace poleswap
