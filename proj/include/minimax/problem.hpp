#ifndef MINIMAX_PROBLEM_HPP
#define MINIMAX_PROBLEM_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "minimax/errors.hpp"
#include "minimax/grid.hpp"
#include "minimax/scan.hpp"
#include "minimax/set_desc.hpp"

namespace minimax {

/// Strict multifunction x -> Phi(x) on a declared domain. Evaluation outside
/// the domain, or an empty value inside it, is a DomainError.
class Multifunction {
public:
  using Rule = std::function<SetDesc(double)>;

  Multifunction() = default;
  Multifunction(SetDesc domain, Rule rule) : domain_(std::move(domain)), rule_(std::move(rule)) {}

  const SetDesc& domain() const noexcept { return domain_; }

  SetDesc operator()(double x) const {
    if (!domain_.member(x)) throw DomainError(fmt::format("x = {} outside domain {}", x, domain_.to_string()));
    SetDesc v = rule_(x);
    if (v.is_empty()) throw DomainError(fmt::format("multifunction is empty at x = {}", x));
    return v;
  }

private:
  SetDesc domain_;
  Rule rule_;
};

/// Strict multifunction (x, a) -> Phi_B(x, a) defined on Gr(Phi_A).
class GraphMultifunction {
public:
  using Rule = std::function<SetDesc(double, double)>;

  GraphMultifunction() = default;
  GraphMultifunction(Multifunction base, Rule rule) : base_(std::move(base)), rule_(std::move(rule)) {}

  const Multifunction& base() const noexcept { return base_; }

  bool in_domain(double x, double a) const {
    return base_.domain().member(x) && base_(x).member(a);
  }

  SetDesc operator()(double x, double a) const {
    if (!in_domain(x, a)) throw DomainError(fmt::format("(x, a) = ({}, {}) outside Gr(Phi_A)", x, a));
    return unchecked(x, a);
  }

  /// Evaluation without the graph-membership check, for points the caller
  /// generated from Phi_A itself.
  SetDesc unchecked(double x, double a) const {
    SetDesc v = rule_(x, a);
    if (v.is_empty()) throw DomainError(fmt::format("Phi_B is empty at (x, a) = ({}, {})", x, a));
    return v;
  }

private:
  Multifunction base_;
  Rule rule_;
};

using Payoff = std::function<double(double, double, double)>;
using SwapRule = std::function<SetDesc(double, double)>;

/// The triple (Phi_A, Phi_B, f) with the parameter domain. Payoffs are real
/// valued on Gr(Phi_B); infinite values are rejected at evaluation.
struct Problem {
  std::string id;
  SetDesc x_domain;
  Multifunction phi_A;
  GraphMultifunction phi_B;
  Payoff f;
  /// Closed-form {a in Phi_A(x) : b in Phi_B(x, a)} when the fiber
  /// boundaries are known to be monotone; otherwise swap sections are searched.
  std::optional<SwapRule> swap_rule;

  double payoff(double x, double a, double b) const {
    if (!phi_B(x, a).member(b))
      throw DomainError(fmt::format("(x, a, b) = ({}, {}, {}) outside Gr(Phi_B)", x, a, b));
    return payoff_unchecked(x, a, b);
  }

  double payoff_unchecked(double x, double a, double b) const {
    const double v = f(x, a, b);
    if (!std::isfinite(v))
      throw DomainError(fmt::format("payoff is not finite at ({}, {}, {})", x, a, b));
    return v;
  }
};

struct GraphSample {
  std::vector<std::vector<double>> points;
  std::optional<SetDesc> restriction;
  bool truncated = false;  ///< some fiber was unbounded and cut at `radius`
  double radius = 0.0;
};

namespace detail {

inline std::vector<double> fiber_points(const SetDesc& fiber, const GridSpec& grid, bool& truncated) {
  if (!fiber.bounded()) truncated = true;
  std::vector<double> out;
  const SetDesc cut = fiber.truncate(grid.truncation_radius);
  for (const Part& p : cut.parts()) {
    if (p.lo == p.hi) {
      out.push_back(p.lo);
      continue;
    }
    for (double t : uniform(inner_point(p.lo, p.lo_closed, +1), inner_point(p.hi, p.hi_closed, -1), grid.step))
      out.push_back(t);
  }
  return out;
}

inline std::vector<double> compact_points(const SetDesc& z, const GridSpec& grid) {
  if (!z.bounded()) throw DomainError("graph restriction must be compact, got " + z.to_string());
  bool unused = false;
  return fiber_points(z, GridSpec{.step = grid.step, .truncation_radius = kInf}, unused);
}

}  // namespace detail

/// Sample of Gr_Z(Phi): x on a grid over Z, y on the (truncated) fiber.
inline GraphSample graph_sample(const Multifunction& m, const SetDesc& z, const GridSpec& grid) {
  GraphSample out;
  out.restriction = z;
  out.radius = grid.truncation_radius;
  for (double x : detail::compact_points(z, grid)) {
    const SetDesc fiber = m(x);
    for (double y : detail::fiber_points(fiber, grid, out.truncated)) out.points.push_back({x, y});
  }
  return out;
}

/// Sample of Gr(Phi_B) above the given graph points (x, a) of Phi_A.
inline GraphSample graph_sample(const GraphMultifunction& m, const std::vector<std::pair<double, double>>& base,
                                const GridSpec& grid) {
  GraphSample out;
  out.radius = grid.truncation_radius;
  for (const auto& [x, a] : base) {
    const SetDesc fiber = m(x, a);
    for (double b : detail::fiber_points(fiber, grid, out.truncated)) out.points.push_back({x, a, b});
  }
  return out;
}

struct SwapSection {
  SetDesc set;
  bool approximate = false;
};

/// {a in Phi_A(x) : b in Phi_B(x, a)}: exact through the problem's swap rule
/// when present, otherwise grid search with bisection at membership changes.
inline SwapSection swap_section(const Problem& prob, double x, double b, const GridSpec& grid) {
  if (!prob.x_domain.member(x)) throw DomainError(fmt::format("x = {} outside the parameter domain", x));
  if (prob.swap_rule) return {(*prob.swap_rule)(x, b), false};

  const SetDesc actions = prob.phi_A(x);
  auto pred = [&](double a) { return prob.phi_B.unchecked(x, a).member(b); };
  std::vector<detail::PartTruth> parts;
  for (const Part& p : actions.parts()) {
    detail::PartTruth pt;
    pt.plan = detail::plan_part(p, grid);
    pt.t = detail::all_nodes(pt.plan);
    for (double a : pt.t) pt.truth.push_back(pred(a));
    parts.push_back(std::move(pt));
  }
  return {detail::level_set(parts, pred, grid.refinement_depth), true};
}

/// f^{A<->B}(x, b, a) = f(x, a, b) on Gr(Phi_B^{A<->B}). Unchecked: section
/// endpoints from an exact inverse can sit one ulp outside Gr(Phi_B).
inline auto swap_objective(const Problem& prob) {
  return [&prob](double x, double b, double a) { return prob.payoff_unchecked(x, a, b); };
}

}  // namespace minimax

#endif  // MINIMAX_PROBLEM_HPP
