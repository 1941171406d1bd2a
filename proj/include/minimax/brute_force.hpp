#ifndef MINIMAX_BRUTE_FORCE_HPP
#define MINIMAX_BRUTE_FORCE_HPP

// Dense-grid reference values, written without the engine: plain loops over
// a fixed a-grid and a b-grid that starts at each fiber's lower end.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "minimax/problem.hpp"

namespace minimax::oracle {

struct BruteForceSpec {
  double a_step = 1e-3;
  double a_span = 4.0;  // how far past the lower end unbounded action sets are sampled
  double b_step = 1e-2;
  double b_span = 2.0;
};

inline double brute_worst_loss(const Problem& p, double x, double a, const BruteForceSpec& s = {}) {
  const SetDesc fiber = p.phi_B(x, a);
  double best = -std::numeric_limits<double>::infinity();
  for (const Part& part : fiber.parts()) {
    if (!std::isfinite(part.lo)) throw std::invalid_argument("brute_worst_loss: fiber unbounded below");
    const double hi = std::min(part.hi, part.lo + s.b_span);
    const long steps = static_cast<long>(std::floor((hi - part.lo) / s.b_step + 1e-9));
    for (long k = 0; k <= steps; ++k) best = std::max(best, p.f(x, a, part.lo + static_cast<double>(k) * s.b_step));
  }
  return best;
}

struct BruteValue {
  double value;
  double argmin;
};

inline BruteValue brute_value(const Problem& p, double x, const BruteForceSpec& s = {}) {
  const SetDesc actions = p.phi_A(x);
  BruteValue out{std::numeric_limits<double>::infinity(), 0.0};
  for (const Part& part : actions.parts()) {
    if (!std::isfinite(part.lo)) throw std::invalid_argument("brute_value: action set unbounded below");
    const double hi = std::min(part.hi, part.lo + s.a_span);
    const long steps = static_cast<long>(std::floor((hi - part.lo) / s.a_step + 1e-9));
    for (long k = 0; k <= steps; ++k) {
      const double a = part.lo + static_cast<double>(k) * s.a_step;
      const double w = brute_worst_loss(p, x, a, s);
      if (w < out.value) out = {w, a};
    }
  }
  return out;
}

}  // namespace minimax::oracle

#endif  // MINIMAX_BRUTE_FORCE_HPP
