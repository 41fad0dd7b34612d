#include <stdexcept>

#include "poleswap/moves.hpp"
#include "poleswap/pencil.hpp"

namespace poleswap {

SetPolesResult set_poles(HessenbergPencil& p, const std::vector<ProjectiveValue>& targets, Transforms* acc,
                         SwapMethod method) {
  const Index lo = p.lo;
  const Index m = p.active_size() - 1;
  if (m < 0 || static_cast<Index>(targets.size()) != m) {
    throw std::invalid_argument("set_poles: need exactly one target per active pole");
  }
  SetPolesResult out;
  const MoveOptions opt{method, kUnitRoundoff};
  const Index k_top = (m + 1) / 2;

  // Top half: targets k_top-1, ..., 0, each chased down to its slot.
  for (Index t = k_top - 1; t >= 0; --t) {
    MoveRecord r = move_type1_top(p, targets[static_cast<std::size_t>(t)], acc, opt);
    ++out.moves;
    if (r.deflation) {
      out.deflation = r.deflation;
      return out;
    }
    for (Index k = lo + 1; k <= lo + t; ++k) {
      move_type2(p, k, acc, opt);
      ++out.moves;
    }
  }
  // Bottom half: targets k_top, ..., m-1, each chased up to its slot.
  for (Index t = k_top; t < m; ++t) {
    MoveRecord r = move_type1_bottom(p, targets[static_cast<std::size_t>(t)], acc, opt);
    ++out.moves;
    if (r.deflation) {
      out.deflation = r.deflation;
      return out;
    }
    for (Index k = lo + m - 1; k >= lo + t + 1; --k) {
      move_type2(p, k, acc, opt);
      ++out.moves;
    }
  }
  return out;
}

}  // namespace poleswap
