#ifndef MINIMAX_LIBRARY_HPP
#define MINIMAX_LIBRARY_HPP

// Builtin problems: the counterexample (non-compact Phi_A, Phi_B lower but not
// A-lower semicontinuous) and two control problems on which A-lower
// semicontinuity holds.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "minimax/problem.hpp"
#include "minimax/set_desc.hpp"

namespace minimax::library {

inline constexpr double kXMax = 10.0;

struct Oracles {
  std::function<double(double, double)> fsharp;
  std::function<double(double)> vsharp;
  std::function<SetDesc(double)> solution_A;
};

/// Sequence x_n -> x with companions a_n in Phi_A(x_n) that defeats
/// A-lower semicontinuity at (x, a, b).
struct AlscWitness {
  double x = 0, a = 0, b = 0;
  std::vector<double> xs;
  std::vector<double> companions;
  bool expect_counterexample = true;
};

struct NamedProblem {
  std::string id;
  Problem problem;
  std::optional<Oracles> oracles;  ///< closed forms, when known analytically
  std::vector<AlscWitness> witnesses;
};

// ---- the counterexample ---------------------------------------------------

/// Lower boundary of Phi_B(x, a) = [phi_B(x, a), +inf).
inline double example1_phi_b(double x, double a) {
  if (x <= 0 || (x > 0 && a < 1 / (2 * x))) return 0;
  if (x > 0 && 1 / (2 * x) <= a && a <= 1 / x) return 2 * (2 * x + 1) * a - 2 - 1 / x;
  return 2 + 1 / x;
}

inline double example1_payoff(double x, double a, double b) {
  if (x <= 0 || (x > 0 && a < 1 / (2 * x))) return 1 + a - b;
  if (x > 0 && 1 / (2 * x) <= a && a <= 1 / x) return (2 * x + 1) * a - b;
  return 2 + a - b;
}

inline double example1_fsharp(double x, double a) {
  if (x <= 0 || a < 1 / (2 * x)) return 1 + a;
  if (a <= 1 / x) return (2 * x + 1) * (1 / x - a);
  return a - 1 / x;
}

inline double example1_vsharp(double x) { return x <= 0 ? 1.0 : 0.0; }

inline SetDesc example1_solution_A(double x) { return SetDesc::singleton(x <= 0 ? 0.0 : 1 / x); }

struct Example1Oracles {
  double fsharp;
  double vsharp;
  SetDesc solution_A;
};

inline Example1Oracles example1_oracles(double x, double a) {
  if (a < 0) throw DomainError("example1 oracles need a >= 0");
  return {example1_fsharp(x, a), example1_vsharp(x), example1_solution_A(x)};
}

// {a >= 0 : phi_B(x, a) <= b}; phi_B(x, .) is nondecreasing.
inline SetDesc example1_swap(double x, double b) {
  if (b < 0) return SetDesc::empty();
  if (x <= 0 || b >= 2 + 1 / x) return SetDesc::half_line(0.0);
  return SetDesc::interval(0.0, (b + 2 + 1 / x) / (2 * (2 * x + 1)));
}

/// x_n = 1/n with companions a_n = n, anchored at (0, 0, 0).
inline AlscWitness example1_witness(std::size_t n_terms = 128) {
  AlscWitness w;
  for (std::size_t n = 1; n <= n_terms; ++n) {
    w.xs.push_back(1.0 / static_cast<double>(n));
    w.companions.push_back(static_cast<double>(n));
  }
  return w;
}

inline Problem make_problem(std::string id, SetDesc actions, Payoff f, GraphMultifunction::Rule phi_b,
                            std::optional<SwapRule> swap) {
  Problem p;
  p.id = std::move(id);
  p.x_domain = SetDesc::interval(-kXMax, kXMax);
  p.phi_A = Multifunction(p.x_domain, [actions](double) { return actions; });
  p.phi_B = GraphMultifunction(p.phi_A, std::move(phi_b));
  p.f = std::move(f);
  p.swap_rule = std::move(swap);
  return p;
}

inline NamedProblem example1() {
  NamedProblem np;
  np.id = "example1";
  np.problem = make_problem(
      "example1", SetDesc::half_line(0.0), example1_payoff,
      [](double x, double a) { return SetDesc::half_line(example1_phi_b(x, a)); }, SwapRule(example1_swap));
  np.oracles = Oracles{example1_fsharp, example1_vsharp, example1_solution_A};
  np.witnesses.push_back(example1_witness());
  return np;
}

/// Same data with compact action sets Phi_A(x) = [0, 1].
inline NamedProblem control_compact() {
  NamedProblem np;
  np.id = "control_compact";
  np.problem = make_problem(
      "control_compact", SetDesc::interval(0.0, 1.0), example1_payoff,
      [](double x, double a) { return SetDesc::half_line(example1_phi_b(x, a)); },
      SwapRule([](double x, double b) { return SetDesc::intersect(example1_swap(x, b), SetDesc::interval(0.0, 1.0)); }));
  np.oracles = Oracles{example1_fsharp, nullptr, nullptr};
  return np;
}

/// Phi_B(x, a) = [0, +inf) independent of a, f = (a - x)^2 - b^2.
inline double independent_payoff(double x, double a, double b) { return (a - x) * (a - x) - b * b; }

inline NamedProblem control_independent() {
  NamedProblem np;
  np.id = "control_independent";
  np.problem = make_problem(
      "control_independent", SetDesc::half_line(0.0), independent_payoff,
      [](double, double) { return SetDesc::half_line(0.0); },
      SwapRule([](double, double b) { return b >= 0 ? SetDesc::half_line(0.0) : SetDesc::empty(); }));
  np.oracles = Oracles{
      [](double x, double a) { return (a - x) * (a - x); },
      [](double x) { return std::min(x, 0.0) * std::min(x, 0.0); },
      [](double x) { return SetDesc::singleton(std::max(x, 0.0)); },
  };
  return np;
}

inline const std::vector<std::string>& builtin_ids() {
  static const std::vector<std::string> ids{"example1", "control_compact", "control_independent"};
  return ids;
}

inline NamedProblem builtin(const std::string& id) {
  if (id == "example1") return example1();
  if (id == "control_compact") return control_compact();
  if (id == "control_independent") return control_independent();
  throw std::invalid_argument("unknown builtin problem: " + id);
}

}  // namespace minimax::library

#endif  // MINIMAX_LIBRARY_HPP
