#ifndef MINIMAX_ENGINE_HPP
#define MINIMAX_ENGINE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string_view>
#include <tuple>
#include <vector>

#include <fmt/format.h>

#include "minimax/errors.hpp"
#include "minimax/ext_real.hpp"
#include "minimax/grid.hpp"
#include "minimax/problem.hpp"
#include "minimax/scan.hpp"
#include "minimax/set_desc.hpp"

namespace minimax {

enum class Mode { Sup, Inf };

enum class ExtremumStatus { Attained, DivergentPlusInf, DivergentMinusInf, TruncationLimited };

inline std::string_view to_string(ExtremumStatus s) {
  switch (s) {
    case ExtremumStatus::Attained: return "attained";
    case ExtremumStatus::DivergentPlusInf: return "divergent_plus_inf";
    case ExtremumStatus::DivergentMinusInf: return "divergent_minus_inf";
    case ExtremumStatus::TruncationLimited: return "truncation_limited";
  }
  return "unknown";
}

struct ExtremumResult {
  ExtReal value;
  SetDesc witness;  ///< eps-arg set; empty when divergent
  ExtremumStatus status = ExtremumStatus::Attained;
  double truncation_radius_used = 0.0;
  std::size_t grid_points_evaluated = 0;
};

namespace detail {

struct Sample {
  double t;
  ExtReal v;
};

struct Scan {
  ExtremumResult result;
  std::vector<PartPlan> plans;
  std::vector<std::vector<Sample>> samples;  // per part, sorted by t
};

// ExtReal orders like its to_double() image, which is NaN-free.
inline bool better(const ExtReal& l, const ExtReal& r, Mode mode) noexcept {
  return mode == Mode::Sup ? l.to_double() > r.to_double() : l.to_double() < r.to_double();
}

inline bool near_best(const ExtReal& v, const ExtReal& best, Mode mode, double eps) noexcept {
  if (!best.is_finite()) return v == best;
  return mode == Mode::Sup ? v.to_double() >= best.to_double() - eps : v.to_double() <= best.to_double() + eps;
}

// Amount by which `now` improves on `before` in the direction of `mode`.
inline double improvement(const ExtReal& before, const ExtReal& now, Mode mode) {
  if (before == now) return 0.0;
  if (!now.is_finite() || !before.is_finite()) return better(now, before, mode) ? kInf : 0.0;
  const double d = now.value() - before.value();
  return mode == Mode::Sup ? d : -d;
}

// With value_only the refinement samples and the witness set are skipped.
template <typename G>
Scan scan_extremum(G&& g, const SetDesc& s, Mode mode, const GridSpec& grid, bool value_only = false) {
  if (s.is_empty()) throw EmptySetError("extremum over the empty set");
  grid.validate();

  Scan scan;
  std::size_t evals = 0;
  bool have_best = false;
  ExtReal best;
  auto offer = [&](const ExtReal& v) {
    if (!have_best || better(v, best, mode)) {
      best = v;
      have_best = true;
    }
  };

  scan.samples.resize(s.parts().size());
  scan.plans.reserve(s.parts().size());
  bool unbounded = false;
  int max_bands = 0;
  for (std::size_t i = 0; i < s.parts().size(); ++i) {
    scan.plans.push_back(plan_part(s.parts()[i], grid));
    const PartPlan& plan = scan.plans.back();
    unbounded = unbounded || plan.unbounded_up || plan.unbounded_down;
    max_bands = std::max(max_bands, plan.bands);
    scan.samples[i].resize(plan.nodes.size());
  }
  // Evaluates every node of band level `level` (0 = base window).
  auto eval_level = [&](int level) {
    for (std::size_t i = 0; i < scan.plans.size(); ++i) {
      const PartPlan& plan = scan.plans[i];
      for (std::size_t j = 0; j < plan.nodes.size(); ++j) {
        if (std::abs(plan.band[j]) != level) continue;
        const double t = plan.nodes[j];
        const ExtReal v = g(t);
        ++evals;
        scan.samples[i][j] = {t, v};
        offer(v);
      }
    }
  };
  eval_level(0);

  // Geometric tail: one band per doubling of the probed radius.
  int diverging_bands = 0;
  double last_improvement = 0.0;
  double radius = grid.truncation_radius;
  for (int k = 1; k <= max_bands; ++k) {
    const ExtReal before = best;
    eval_level(k);
    radius *= 2.0;
    last_improvement = improvement(before, best, mode);
    if (last_improvement > grid.growth_cap) ++diverging_bands;
  }
  const int bands_probed = max_bands;
  scan.result.truncation_radius_used = radius;

  const bool divergent = unbounded && grid.tail_doublings > 0 && bands_probed == grid.tail_doublings &&
                         diverging_bands == grid.tail_doublings;
  const bool infinite_best = (mode == Mode::Sup && best.is_pos_inf()) || (mode == Mode::Inf && best.is_neg_inf());
  if (divergent || infinite_best) {
    scan.result.value = mode == Mode::Sup ? ExtReal::pos_inf() : ExtReal::neg_inf();
    scan.result.status = mode == Mode::Sup ? ExtremumStatus::DivergentPlusInf : ExtremumStatus::DivergentMinusInf;
    scan.result.grid_points_evaluated = evals;
    return scan;
  }

  // Local refinement seeded at local optima of the coarse samples.
  struct Seed {
    ExtReal v;
    std::size_t part;
    double t, lo, hi;
  };
  std::vector<Seed> seeds;
  for (std::size_t i = 0; i < scan.samples.size(); ++i) {
    const auto& v = scan.samples[i];
    for (std::size_t j = 0; j < v.size(); ++j) {
      const bool left_ok = j == 0 || !better(v[j - 1].v, v[j].v, mode);
      const bool right_ok = j + 1 == v.size() || !better(v[j + 1].v, v[j].v, mode);
      const bool strict = (j > 0 && better(v[j].v, v[j - 1].v, mode)) ||
                          (j + 1 < v.size() && better(v[j].v, v[j + 1].v, mode)) || v.size() == 1;
      if (left_ok && right_ok && (strict || j == 0))
        seeds.push_back({v[j].v, i, v[j].t, j > 0 ? v[j - 1].t : v[j].t, j + 1 < v.size() ? v[j + 1].t : v[j].t});
    }
  }
  std::stable_sort(seeds.begin(), seeds.end(), [&](const Seed& l, const Seed& r) { return better(l.v, r.v, mode); });
  const std::size_t n_seeds = std::min<std::size_t>(seeds.size(), grid.seeded ? grid.max_seeds : 1);
  std::vector<std::vector<Sample>> extra(scan.samples.size());
  for (std::size_t s_i = 0; s_i < n_seeds; ++s_i) {
    Seed sd = seeds[s_i];
    double l = sd.lo, c = sd.t, r = sd.hi;
    ExtReal fc = sd.v;
    for (int k = 0; k < grid.refinement_depth; ++k) {
      double m1 = c, m2 = c;
      ExtReal f1 = fc, f2 = fc;
      if (l < c) { m1 = 0.5 * (l + c); if (m1 != l && m1 != c) { f1 = g(m1); ++evals; if (!value_only) extra[sd.part].push_back({m1, f1}); } else m1 = c; }
      if (c < r) { m2 = 0.5 * (c + r); if (m2 != c && m2 != r) { f2 = g(m2); ++evals; if (!value_only) extra[sd.part].push_back({m2, f2}); } else m2 = c; }
      if (m1 == c && m2 == c) break;
      if (better(f1, fc, mode) && !better(f2, f1, mode)) {
        r = c; c = m1; fc = f1;
      } else if (better(f2, fc, mode)) {
        l = c; c = m2; fc = f2;
      } else {
        l = m1; r = m2;
      }
      if (better(fc, best, mode)) best = fc;
    }
  }

  scan.result.value = best;
  scan.result.status = unbounded && bands_probed > 0 && last_improvement > grid.eps_arg
                           ? ExtremumStatus::TruncationLimited
                           : ExtremumStatus::Attained;
  scan.result.grid_points_evaluated = evals;
  if (value_only) return scan;

  auto by_t = [](const Sample& l, const Sample& r) { return l.t < r.t; };
  for (std::size_t i = 0; i < extra.size(); ++i) {
    if (extra[i].empty()) continue;
    auto& v = scan.samples[i];
    std::sort(extra[i].begin(), extra[i].end(), by_t);
    const auto mid = static_cast<std::ptrdiff_t>(v.size());
    v.insert(v.end(), extra[i].begin(), extra[i].end());
    std::inplace_merge(v.begin(), v.begin() + mid, v.end(), by_t);
  }

  std::vector<Part> witness;
  for (const auto& v : scan.samples) {
    std::size_t j = 0;
    while (j < v.size()) {
      if (!near_best(v[j].v, best, mode, grid.eps_arg)) { ++j; continue; }
      std::size_t e = j;
      while (e + 1 < v.size() && near_best(v[e + 1].v, best, mode, grid.eps_arg)) ++e;
      witness.push_back(Part{v[j].t, v[e].t, true, true});
      j = e + 1;
    }
  }
  scan.result.witness = SetDesc::from_parts(std::move(witness));
  return scan;
}

template <typename Pred>
std::vector<PartTruth> truth_table(const Scan& scan, Pred&& pred) {
  std::vector<PartTruth> out;
  for (std::size_t i = 0; i < scan.plans.size(); ++i) {
    PartTruth pt;
    pt.plan = scan.plans[i];
    for (const Sample& smp : scan.samples[i]) {
      if (!pt.t.empty() && pt.t.back() == smp.t) continue;
      pt.t.push_back(smp.t);
      pt.truth.push_back(pred(smp.v));
    }
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace detail

/// Supremum or infimum of g over s, with the eps-arg witness set. Unbounded
/// parts are probed over geometric tail bands; a sustained improvement larger
/// than growth_cap in every band is reported as divergence.
template <typename G>
ExtremumResult extremum_over_set(G&& g, const SetDesc& s, Mode mode, const GridSpec& grid) {
  return detail::scan_extremum(std::forward<G>(g), s, mode, grid).result;
}

/// f#(x, a) = sup over b in Phi_B(x, a) of f(x, a, b).
inline ExtremumResult worst_loss(const Problem& prob, double x, double a, const GridSpec& grid) {
  const SetDesc fiber = prob.phi_B(x, a);
  return extremum_over_set([&](double b) { return ExtReal(prob.payoff_unchecked(x, a, b)); }, fiber, Mode::Sup, grid);
}

namespace detail {

inline ExtReal worst_loss_value(const Problem& prob, double x, double a, const GridSpec& grid) {
  const SetDesc fiber = prob.phi_B.unchecked(x, a);
  auto g = [&](double b) { return ExtReal(prob.payoff_unchecked(x, a, b)); };
  return scan_extremum(g, fiber, Mode::Sup, grid, true).result.value;
}

inline Scan minimax_scan(const Problem& prob, double x, const GridSpec& outer, const GridSpec& inner) {
  if (!prob.x_domain.member(x)) throw DomainError(fmt::format("x = {} outside the parameter domain", x));
  const SetDesc actions = prob.phi_A(x);
  return scan_extremum([&](double a) { return worst_loss_value(prob, x, a, inner); }, actions, Mode::Inf, outer);
}

}  // namespace detail

/// v#(x) = inf over a in Phi_A(x) of f#(x, a). The inner grid defaults to the outer one.
inline ExtremumResult minimax_value(const Problem& prob, double x, const GridSpec& grid) {
  return detail::minimax_scan(prob, x, grid, grid).result;
}
inline ExtremumResult minimax_value(const Problem& prob, double x, const GridSpec& outer, const GridSpec& inner) {
  return detail::minimax_scan(prob, x, outer, inner).result;
}

struct MinimaxSolution {
  ExtremumResult value;
  SetDesc solution;
};

/// v#(x) together with the eps-arg set
/// Phi*_A(x) = {a in Phi_A(x) : f#(x, a) <= v#(x) + eps}, from a single scan.
/// The set is Phi_A(x) when v#(x) = +inf or eps = +inf.
inline MinimaxSolution minimax_solution(const Problem& prob, double x, double eps, const GridSpec& grid) {
  if (!(eps >= 0)) throw DomainError("solution_A: eps must be nonnegative");
  const detail::Scan scan = detail::minimax_scan(prob, x, grid, grid);
  const ExtReal v = scan.result.value;
  if (v.is_pos_inf() || std::isinf(eps)) return {scan.result, prob.phi_A(x)};
  const ExtReal threshold = v + ExtReal(eps);
  auto parts = detail::truth_table(scan, [&](const ExtReal& fv) { return fv <= threshold; });
  SetDesc sol = detail::level_set(
      parts, [&](double a) { return detail::worst_loss_value(prob, x, a, grid) <= threshold; },
      grid.refinement_depth);
  return {scan.result, std::move(sol)};
}

inline SetDesc solution_A(const Problem& prob, double x, double eps, const GridSpec& grid) {
  if (!(eps >= 0)) throw DomainError("solution_A: eps must be nonnegative");
  if (!prob.x_domain.member(x)) throw DomainError(fmt::format("x = {} outside the parameter domain", x));
  if (std::isinf(eps)) return prob.phi_A(x);
  return minimax_solution(prob, x, eps, grid).solution;
}

/// eps-arg version of Phi*_B(x, a) = {b in Phi_B(x, a) : f(x, a, b) >= f#(x, a) - eps}.
inline SetDesc solution_B(const Problem& prob, double x, double a, double eps, const GridSpec& grid) {
  if (!(eps >= 0)) throw DomainError("solution_B: eps must be nonnegative");
  const SetDesc fiber = prob.phi_B(x, a);
  auto g = [&](double b) { return ExtReal(prob.payoff_unchecked(x, a, b)); };
  const detail::Scan scan = detail::scan_extremum(g, fiber, Mode::Sup, grid);
  const ExtReal v = scan.result.value;
  if (v.is_pos_inf() || std::isinf(eps)) return fiber;
  const ExtReal threshold = v - ExtReal(eps);
  auto parts = detail::truth_table(scan, [&](const ExtReal& fv) { return fv >= threshold; });
  return detail::level_set(parts, [&](double b) { return g(b) >= threshold; }, grid.refinement_depth);
}

}  // namespace minimax

#endif  // MINIMAX_ENGINE_HPP
