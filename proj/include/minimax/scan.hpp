#ifndef MINIMAX_SCAN_HPP
#define MINIMAX_SCAN_HPP

// Sampling geometry for possibly unbounded subsets of the line, and the
// boundary-refining level-set builder used by swap sections and eps-arg sets.

#include <algorithm>
#include <cmath>
#include <vector>

#include "minimax/grid.hpp"
#include "minimax/set_desc.hpp"

namespace minimax::detail {

/// Evaluation point for an endpoint: open endpoints are nudged inward.
inline double inner_point(double end, bool closed, int inward) {
  if (closed) return end;
  return end + inward * 1e-12 * std::max(1.0, std::abs(end));
}

/// Uniform nodes on [lo, hi] with at most `step` spacing, endpoints included.
inline std::vector<double> uniform(double lo, double hi, double step) {
  if (!(hi > lo)) return {lo};
  const auto n = static_cast<long>(std::ceil((hi - lo) / step - 1e-9));
  std::vector<double> t;
  t.reserve(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) t.push_back(i == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n));
  return t;
}

/// Sampling plan of one part: a base window plus geometric tail bands in each
/// unbounded (or very long) direction. Nodes are sorted; band[i] is 0 for the
/// base window and +-k for the k-th doubling above / below it.
struct PartPlan {
  Part part;
  std::vector<double> nodes;
  std::vector<int> band;
  int bands = 0;  ///< doublings probed in the widest direction
  bool unbounded_up = false;
  bool unbounded_down = false;
};

inline PartPlan plan_part(const Part& p, const GridSpec& g) {
  PartPlan plan;
  plan.part = p;
  plan.unbounded_up = !std::isfinite(p.hi);
  plan.unbounded_down = !std::isfinite(p.lo);
  const double lo_eval = std::isfinite(p.lo) ? inner_point(p.lo, p.lo_closed, +1) : p.lo;
  const double hi_eval = std::isfinite(p.hi) ? inner_point(p.hi, p.hi_closed, -1) : p.hi;
  const double R = g.truncation_radius;

  auto set_base = [&](std::vector<double> base) {
    plan.nodes = std::move(base);
    plan.band.assign(plan.nodes.size(), 0);
  };
  auto reserve_tail = [&](std::size_t extra) {
    plan.nodes.reserve(plan.nodes.size() + extra);
    plan.band.reserve(plan.band.size() + extra);
  };
  if (p.lo == p.hi) {
    set_base({p.lo});
    return plan;
  }
  if (plan.part.bounded() && hi_eval - lo_eval <= 2 * R) {
    set_base(uniform(lo_eval, hi_eval, g.step));
    return plan;
  }

  std::vector<double> down_nodes;
  std::vector<int> down_band;
  const auto tail_capacity = static_cast<std::size_t>(g.tail_doublings) * static_cast<std::size_t>(g.tail_points);
  auto bands = [&](double origin, double limit, int dir) {
    double inner = R;
    int k = 1;
    for (; k <= g.tail_doublings; ++k) {
      const double start = origin + dir * inner;
      if (dir > 0 ? start >= limit : start <= limit) break;
      double end = origin + dir * inner * 2.0;
      if (dir > 0 ? end > limit : end < limit) end = limit;
      for (int i = 1; i <= g.tail_points; ++i) {
        const double t = start + (end - start) * static_cast<double>(i) / g.tail_points;
        if (dir > 0) {
          plan.nodes.push_back(t);
          plan.band.push_back(k);
        } else {
          down_nodes.push_back(t);
          down_band.push_back(-k);
        }
      }
      inner *= 2.0;
    }
    plan.bands = std::max(plan.bands, k - 1);
  };

  if (std::isfinite(p.lo)) {
    set_base(uniform(lo_eval, std::min(hi_eval, p.lo + R), g.step));
    reserve_tail(tail_capacity);
    bands(p.lo, hi_eval, +1);
  } else if (std::isfinite(p.hi)) {
    set_base(uniform(p.hi - R, hi_eval, g.step));
    down_nodes.reserve(tail_capacity + plan.nodes.size());
    down_band.reserve(tail_capacity + plan.nodes.size());
    bands(p.hi, p.lo, -1);
  } else {
    set_base(uniform(-R, R, g.step));
    reserve_tail(tail_capacity);
    down_nodes.reserve(tail_capacity + plan.nodes.size());
    down_band.reserve(tail_capacity + plan.nodes.size());
    bands(0.0, kInf, +1);
    bands(0.0, -kInf, -1);
  }
  if (!down_nodes.empty()) {
    std::reverse(down_nodes.begin(), down_nodes.end());
    std::reverse(down_band.begin(), down_band.end());
    down_nodes.insert(down_nodes.end(), plan.nodes.begin(), plan.nodes.end());
    down_band.insert(down_band.end(), plan.band.begin(), plan.band.end());
    plan.nodes = std::move(down_nodes);
    plan.band = std::move(down_band);
  }
  return plan;
}

inline const std::vector<double>& all_nodes(const PartPlan& plan) { return plan.nodes; }

/// Sorted evaluation points inside one part together with predicate values.
struct PartTruth {
  PartPlan plan;
  std::vector<double> t;
  std::vector<bool> truth;
};

/// Builds the set {t : pred(t)} from sampled truth values, bisecting each
/// true/false transition `depth` times. Runs that reach the outermost probe of
/// an unbounded direction are extended to infinity; runs that reach a finite
/// part endpoint inherit it with its closedness.
template <typename Pred>
SetDesc level_set(const std::vector<PartTruth>& parts, Pred&& pred, int depth) {
  std::vector<Part> out;
  for (const PartTruth& pt : parts) {
    const auto n = pt.t.size();
    std::size_t i = 0;
    while (i < n) {
      if (!pt.truth[i]) { ++i; continue; }
      std::size_t j = i;
      while (j + 1 < n && pt.truth[j + 1]) ++j;

      Part r{pt.t[i], pt.t[j], true, true};
      if (i == 0) {
        r.lo = pt.plan.part.lo;
        r.lo_closed = pt.plan.part.lo_closed;
      } else {
        double f = pt.t[i - 1], t = pt.t[i];
        for (int k = 0; k < depth; ++k) {
          const double m = 0.5 * (f + t);
          if (m == f || m == t) break;
          (pred(m) ? t : f) = m;
        }
        r.lo = t;
      }
      if (j + 1 == n) {
        r.hi = pt.plan.part.hi;
        r.hi_closed = pt.plan.part.hi_closed;
      } else {
        double t = pt.t[j], f = pt.t[j + 1];
        for (int k = 0; k < depth; ++k) {
          const double m = 0.5 * (f + t);
          if (m == f || m == t) break;
          (pred(m) ? t : f) = m;
        }
        r.hi = t;
      }
      out.push_back(r);
      i = j + 1;
    }
  }
  return SetDesc::from_parts(std::move(out));
}

}  // namespace minimax::detail

#endif  // MINIMAX_SCAN_HPP
