#include "poleswap/rqz.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "poleswap/errors.hpp"
#include "poleswap/oracle.hpp"

namespace poleswap {

std::string_view to_string(ShiftStrategy s) { return s == ShiftStrategy::rayleigh ? "rayleigh" : "wilkinson"; }

std::string_view to_string(PoleStrategy s) { return s == PoleStrategy::infinity ? "infinity" : "rayleigh"; }

ShiftStrategy parse_shift_strategy(std::string_view s) {
  if (s == "rayleigh") return ShiftStrategy::rayleigh;
  if (s == "wilkinson") return ShiftStrategy::wilkinson_like;
  throw std::invalid_argument("unknown shift strategy '" + std::string(s) + "'");
}

PoleStrategy parse_pole_strategy(std::string_view s) {
  if (s == "infinity") return PoleStrategy::infinity;
  if (s == "rayleigh") return PoleStrategy::rayleigh;
  throw std::invalid_argument("unknown pole strategy '" + std::string(s) + "'");
}

ProjectiveValue choose_shift(const HessenbergPencil& p, ShiftStrategy strategy, PencilEnd end) {
  if (p.active_size() < 2) {
    throw std::invalid_argument("choose_shift: active block must have size >= 2");
  }
  const Index c = end == PencilEnd::bottom ? p.hi - 1 : p.lo;
  const ProjectiveValue rayleigh(p.A(c, c), p.B(c, c));
  if (strategy == ShiftStrategy::rayleigh) {
    return rayleigh;
  }
  const Index k = end == PencilEnd::bottom ? p.hi - 2 : p.lo;
  const Matrix2c a = p.A.block<2, 2>(k, k);
  const Matrix2c b = p.B.block<2, 2>(k, k);
  const auto ev = eig_2x2(a, b);
  return chordal_distance(ev[0], rayleigh) <= chordal_distance(ev[1], rayleigh) ? ev[0] : ev[1];
}

namespace {

// Appends the move and reports whether the sweep must stop.
bool push(SweepRecord& s, MoveRecord r) {
  const bool stop = r.deflation.has_value();
  if (stop) s.deflation = r.deflation;
  s.moves.push_back(std::move(r));
  return stop;
}

// Installs shifts[m-1] first and chases it to lo+m-1, ..., shifts[0] last at lo.
bool install_top(HessenbergPencil& p, const std::vector<ProjectiveValue>& shifts, Transforms* acc,
                 const MoveOptions& opt, SweepRecord& s) {
  const Index m = static_cast<Index>(shifts.size());
  for (Index i = m - 1; i >= 0; --i) {
    if (push(s, move_type1_top(p, shifts[static_cast<std::size_t>(i)], acc, opt))) return true;
    for (Index k = p.lo + 1; k <= p.lo + i; ++k) {
      push(s, move_type2(p, k, acc, opt));
    }
  }
  return false;
}

// Mirror of install_top: values[0] ends uppermost at hi-1-m.
bool install_bottom(HessenbergPencil& p, const std::vector<ProjectiveValue>& values, Transforms* acc,
                    const MoveOptions& opt, SweepRecord& s) {
  const Index m = static_cast<Index>(values.size());
  const Index last = p.hi - 2;
  for (Index i = 0; i < m; ++i) {
    if (push(s, move_type1_bottom(p, values[static_cast<std::size_t>(i)], acc, opt))) return true;
    for (Index k = last; k >= last + 2 - m + i; --k) {
      push(s, move_type2(p, k, acc, opt));
    }
  }
  return false;
}

// Chain occupying the last m positions is replaced so that values appear in order there.
bool replace_bottom_chain(HessenbergPencil& p, const std::vector<ProjectiveValue>& values, Transforms* acc,
                          const MoveOptions& opt, SweepRecord& s) {
  const Index m = static_cast<Index>(values.size());
  const Index last = p.hi - 2;
  for (Index i = 0; i < m; ++i) {
    // The deepest remaining shift sits at last - i; move it past the i new poles.
    for (Index k = last - i + 1; k <= last; ++k) {
      push(s, move_type2(p, k, acc, opt));
    }
    if (push(s, move_type1_bottom(p, values[static_cast<std::size_t>(i)], acc, opt))) return true;
  }
  return false;
}

// Chain occupying the first m positions is replaced so that values[i] ends at lo+i.
bool replace_top_chain(HessenbergPencil& p, const std::vector<ProjectiveValue>& values, Transforms* acc,
                       const MoveOptions& opt, SweepRecord& s) {
  const Index m = static_cast<Index>(values.size());
  for (Index i = 0; i < m; ++i) {
    // The uppermost remaining shift sits at lo + i; move it up past the i new poles.
    for (Index k = p.lo + i; k >= p.lo + 1; --k) {
      push(s, move_type2(p, k, acc, opt));
    }
    if (push(s, move_type1_top(p, values[static_cast<std::size_t>(m - 1 - i)], acc, opt))) return true;
  }
  return false;
}

void check_chain_length(const HessenbergPencil& p, std::size_t m, const char* what) {
  if (m < 1 || static_cast<Index>(m) > p.active_size() - 1) {
    throw std::invalid_argument(std::string(what) + ": chain length must be in [1, active_size - 1]");
  }
}

}  // namespace

SweepRecord basic_sweep(HessenbergPencil& p, const ProjectiveValue& rho, const ProjectiveValue& new_pole,
                        Transforms* acc, const MoveOptions& opt) {
  return multishift_sweep(p, {rho}, {new_pole}, acc, opt);
}

namespace {

// A move can leave both subdiagonal entries exactly zero (the baselines do so
// on stress inputs); the next move touching that position then throws. The
// split is a deflation, so the sweep ends there.
template <class Body>
void stop_on_split(HessenbergPencil& p, SweepRecord& s, Body body) {
  try {
    body();
  } catch (const PencilSplit& e) {
    s.deflation = classify_deflation(p, e.position());
  }
}

void chase_down(HessenbergPencil& p, const std::vector<ProjectiveValue>& shifts,
                const std::vector<ProjectiveValue>& new_poles, Transforms* acc, const MoveOptions& opt,
                SweepRecord& s) {
  const Index m = static_cast<Index>(shifts.size());
  if (install_top(p, shifts, acc, opt, s)) return;
  // Each round moves the next interior pole up through the whole chain.
  for (Index start = p.lo; start + m <= p.hi - 2; ++start) {
    for (Index k = start + m; k >= start + 1; --k) {
      push(s, move_type2(p, k, acc, opt));
    }
  }
  replace_bottom_chain(p, new_poles, acc, opt, s);
}

}  // namespace

SweepRecord multishift_sweep(HessenbergPencil& p, const std::vector<ProjectiveValue>& shifts,
                             const std::vector<ProjectiveValue>& new_poles, Transforms* acc,
                             const MoveOptions& opt) {
  check_chain_length(p, shifts.size(), "multishift_sweep");
  if (new_poles.size() != shifts.size()) {
    throw std::invalid_argument("multishift_sweep: need one new pole per shift");
  }
  SweepRecord s;
  s.direction = SweepDirection::down;
  s.shift_in = shifts;
  s.pole_out = new_poles;
  stop_on_split(p, s, [&] { chase_down(p, shifts, new_poles, acc, opt, s); });
  return s;
}

SweepRecord bidirectional_sweep(HessenbergPencil& p, const std::vector<ProjectiveValue>& down,
                                const std::vector<ProjectiveValue>& up, Transforms* acc, const MoveOptions& opt,
                                const BidirectionalOptions& bopt) {
  const std::size_t md = down.size();
  const std::size_t mu = up.size();
  if (md + mu < 1 || static_cast<Index>(md + mu) > p.active_size() - 1) {
    throw std::invalid_argument("bidirectional_sweep: chains do not fit in the active block");
  }
  for (const auto& r : down) {
    for (const auto& t : up) {
      if (chordal_distance(r, t) < bopt.margin) {
        throw std::invalid_argument("bidirectional_sweep: shift/pole near-cancellation");
      }
    }
  }
  if (bopt.replace_down && bopt.replace_down->size() != md) {
    throw std::invalid_argument("bidirectional_sweep: replace_down length mismatch");
  }
  if (bopt.replace_up && bopt.replace_up->size() != mu) {
    throw std::invalid_argument("bidirectional_sweep: replace_up length mismatch");
  }

  SweepRecord s;
  s.direction = mu == 0 ? SweepDirection::down : (md == 0 ? SweepDirection::up : SweepDirection::bidirectional);
  s.shift_in = down;
  s.shift_in.insert(s.shift_in.end(), up.begin(), up.end());
  if (bopt.replace_down) s.pole_out = *bopt.replace_down;
  if (bopt.replace_up) s.pole_out.insert(s.pole_out.end(), bopt.replace_up->begin(), bopt.replace_up->end());
  stop_on_split(p, s, [&] {
    if (md > 0 && install_top(p, down, acc, opt, s)) return;
    if (mu > 0 && install_bottom(p, up, acc, opt, s)) return;

    // tag[j] for position lo+j: +1 down shift, -1 up shift, 0 interior pole.
    const Index npos = p.active_size() - 1;
    std::vector<int> tag(static_cast<std::size_t>(npos), 0);
    for (std::size_t i = 0; i < md; ++i) tag[i] = 1;
    for (std::size_t i = 0; i < mu; ++i) tag[static_cast<std::size_t>(npos) - mu + i] = -1;
    auto swap_at = [&](Index j) {  // positions j-1, j
      push(s, move_type2(p, p.lo + j, acc, opt));
      std::swap(tag[static_cast<std::size_t>(j - 1)], tag[static_cast<std::size_t>(j)]);
    };

    bool moved = true;
    while (moved) {
      moved = false;
      // Down pass: deepest down shift first.
      for (Index j = npos - 2; j >= 0; --j) {
        if (tag[static_cast<std::size_t>(j)] == 1 && tag[static_cast<std::size_t>(j + 1)] != 1) {
          swap_at(j + 1);
          moved = true;
        }
      }
      // Up pass: uppermost up shift first.
      for (Index j = 1; j < npos; ++j) {
        if (tag[static_cast<std::size_t>(j)] == -1 && tag[static_cast<std::size_t>(j - 1)] != -1) {
          swap_at(j);
          moved = true;
        }
      }
    }

    if (bopt.replace_down && md > 0) {
      if (replace_bottom_chain(p, *bopt.replace_down, acc, opt, s)) return;
    }
    if (bopt.replace_up && mu > 0) {
      replace_top_chain(p, *bopt.replace_up, acc, opt, s);
    }
  });
  return s;
}

std::pair<double, double> schur_residuals(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& q,
                                          const ComplexMatrix& z, const ComplexMatrix& schur_a,
                                          const ComplexMatrix& schur_b) {
  if (a.rows() != q.rows() || schur_a.rows() != q.cols() || z.rows() != a.cols() || b.rows() != a.rows()) {
    throw DimensionMismatch("schur_residuals: dimensions disagree");
  }
  const double na = frobenius_norm(a);
  const double nb = frobenius_norm(b);
  const double ea = frobenius_norm(a - q * schur_a * z.adjoint());
  const double eb = frobenius_norm(b - q * schur_b * z.adjoint());
  return {na > 0.0 ? ea / na : ea, nb > 0.0 ? eb / nb : eb};
}

namespace {

ProjectiveValue exceptional_shift(const HessenbergPencil& p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);
  const Complex e = std::polar(1.0, phase(rng));
  const Index c = p.hi - 1;
  const Index k = p.active_size();
  const double na = frobenius_norm(p.A.block(p.lo, p.lo, k, k));
  const double nb = frobenius_norm(p.B.block(p.lo, p.lo, k, k));
  const double scale = nb > 0.0 ? na / nb : 1.0;
  if (p.B(c, c) == 0.0 || p.A(c, c) == 0.0) {
    return ProjectiveValue::finite(e * scale);
  }
  const Complex r = p.A(c, c) / p.B(c, c);
  return ProjectiveValue::finite(r + 0.5 * std::abs(r) * e);
}

bool subdiagonal_zero(const HessenbergPencil& p, Index j) { return p.A(j + 1, j) == 0.0 && p.B(j + 1, j) == 0.0; }

SolveResult iterate(const ComplexMatrix& a0, const ComplexMatrix& b0, HessenbergPencil p, Transforms t,
                    const SolveOptions& opt) {
  const Index n = p.size();
  SolveResult out;
  std::mt19937_64 rng(opt.seed);
  const MoveOptions mopt{opt.method, opt.eps};
  const long cap = static_cast<long>(opt.sweeps_per_eigenvalue) * std::max<Index>(n, 1);
  int stalled = 0;
  Index hi = n;
  while (hi > 1) {
    p.lo = 0;
    p.hi = hi;
    detect_deflations(p, opt.eps);
    if (subdiagonal_zero(p, hi - 2)) {
      --hi;
      stalled = 0;
      continue;
    }
    Index lo = hi - 2;
    while (lo > 0 && !subdiagonal_zero(p, lo - 1)) --lo;
    p.lo = lo;
    p.hi = hi;

    if (out.iterations >= cap) {
      out.converged = false;
      out.stuck_lo = lo;
      out.stuck_hi = hi;
      break;
    }
    ++out.iterations;
    ++stalled;

    ProjectiveValue rho = ProjectiveValue::infinity();
    bool exceptional = opt.exceptional_every > 0 && stalled % opt.exceptional_every == 0;
    if (!exceptional) {
      try {
        rho = choose_shift(p, opt.shift, PencilEnd::bottom);
      } catch (const IndeterminateValue&) {
        exceptional = true;
      }
    }
    if (exceptional) rho = exceptional_shift(p, rng);

    ProjectiveValue new_pole = ProjectiveValue::infinity();
    if (opt.pole == PoleStrategy::rayleigh && (p.A(lo, lo) != 0.0 || p.B(lo, lo) != 0.0)) {
      new_pole = ProjectiveValue(p.A(lo, lo), p.B(lo, lo));
    }
    SweepRecord rec = basic_sweep(p, rho, new_pole, &t, mopt);
    if (opt.keep_sweep_log) out.sweep_log.push_back(std::move(rec));
    if (!all_finite(p.A) || !all_finite(p.B)) {
      throw NumericalBreakdown("solve: non-finite entries after sweep " + std::to_string(out.iterations));
    }
  }

  p.lo = 0;
  p.hi = n;
  out.eigenvalues.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    out.eigenvalues.emplace_back(p.A(i, i), p.B(i, i));
  }
  out.schur_a = std::move(p.A);
  out.schur_b = std::move(p.B);
  out.q = std::move(t.q);
  out.z = std::move(t.z);
  const auto [ra, rb] = schur_residuals(a0, b0, out.q, out.z, out.schur_a, out.schur_b);
  out.r_a = ra;
  out.r_b = rb;
  return out;
}

}  // namespace

SolveResult solve(const ComplexMatrix& a, const ComplexMatrix& b, const SolveOptions& opt) {
  ReductionResult red = reduce_to_hessenberg_triangular(a, b);
  Transforms t{std::move(red.q), std::move(red.z)};
  return iterate(a, b, std::move(red.pencil), std::move(t), opt);
}

SolveResult solve(HessenbergPencil p, const SolveOptions& opt,
                  const std::optional<std::vector<ProjectiveValue>>& initial_poles) {
  const ComplexMatrix a0 = p.A;
  const ComplexMatrix b0 = p.B;
  Transforms t = Transforms::identity(p.size());
  p.lo = 0;
  p.hi = p.size();
  if (initial_poles && p.size() >= 2) {
    set_poles(p, *initial_poles, &t, opt.method);
    p.lo = 0;
    p.hi = p.size();
  }
  return iterate(a0, b0, std::move(p), std::move(t), opt);
}

}  // namespace poleswap
