#ifndef MINIMAX_BATTERY_HPP
#define MINIMAX_BATTERY_HPP

// The Example 1 regression battery: ten numbered criteria with their
// tolerances fixed here. Used by `minimax verify` and the acceptance test.

#include <bit>
#include <chrono>
#include <cstdint>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "minimax/brute_force.hpp"
#include "minimax/diagnostics.hpp"
#include "minimax/dsl.hpp"
#include "minimax/engine.hpp"
#include "minimax/library.hpp"

#ifndef MINIMAX_PROBLEMS_DIR
#define MINIMAX_PROBLEMS_DIR "problems"
#endif

namespace minimax::battery {

namespace tolerance {
inline constexpr double kWorstLoss = 1e-6;
inline constexpr double kValue = 1e-3;
inline constexpr double kSolutionEps = 1e-3;
inline constexpr double kSolutionWidth = 0.05;
inline constexpr double kJumpMargin = 0.9;
inline constexpr double kAlscMargin = 1.0;
inline constexpr double kZeroLevel = 1e-6;
inline constexpr double kBruteForce = 1e-3;
}  // namespace tolerance

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;

  std::string line() const {
    return fmt::format("[{}] criterion {:>2}: {} ({}) [{:.1f}s]", pass ? "PASS" : "FAIL", id, name, detail, seconds);
  }
};

struct Options {
  GridSpec grid;
  diag::DiagnosticConfig diag;
  std::string problems_dir = MINIMAX_PROBLEMS_DIR;
};

namespace detail {

using diag::Point;

// Values of x -> F(x) shared between checks that probe the same points.
template <typename T>
class Memo {
public:
  explicit Memo(std::function<T(double)> fn) : fn_(std::move(fn)) {}
  const T& operator()(double x) {
    auto it = cache_.find(x);
    if (it == cache_.end()) it = cache_.emplace(x, fn_(x)).first;
    return it->second;
  }

private:
  std::function<T(double)> fn_;
  std::map<double, T> cache_;
};

inline diag::SequenceProbe harmonic_probe(double anchor, std::size_t n_terms) {
  diag::ProbeConfig pc;
  pc.length = n_terms;
  pc.quadratic = false;
  for (auto& p : diag::generate_probes({anchor}, pc))
    if (p.direction.at(0) > 0) return p;
  throw std::logic_error("no harmonic probe");
}

inline std::vector<diag::SequenceProbe> x_probes(const Problem& p, double x, const diag::ProbeConfig& pc = {}) {
  return diag::keep_inside(diag::generate_probes({x}, pc), [&](const Point& q) { return p.x_domain.member(q[0]); });
}

inline double width(const SetDesc& s) { return s.upper() - s.lower(); }

inline CriterionResult c1_worst_loss(const Options& o) {
  CriterionResult r{1, "worst-loss matches closed form on x in [-1,2], a in [0,10]", false, {}, 0.0};
  const Problem p = library::example1().problem;
  double worst = 0.0;
  double at_x = 0, at_a = 0;
  bool statuses_ok = true;
  for (int i = -100; i <= 200; ++i) {
    const double x = i / 100.0;
    for (int j = 0; j <= 1000; ++j) {
      const double a = j / 100.0;
      const ExtremumResult w = worst_loss(p, x, a, o.grid);
      statuses_ok = statuses_ok && w.status == ExtremumStatus::Attained;
      const double err = w.value.is_finite() ? std::abs(w.value.value() - library::example1_fsharp(x, a)) : INFINITY;
      if (err > worst) {
        worst = err;
        at_x = x;
        at_a = a;
      }
    }
  }
  r.pass = statuses_ok && worst <= tolerance::kWorstLoss;
  r.detail = fmt::format("max error {:.3g} at (x={}, a={}), tol {}{}", worst, at_x, at_a, tolerance::kWorstLoss,
                         statuses_ok ? "" : ", some sup not attained");
  return r;
}

inline CriterionResult c2_minimax(const Options& o) {
  CriterionResult r{2, "minimax value and solution set match closed form", false, {}, 0.0};
  const Problem p = library::example1().problem;
  double worst_v = 0.0, worst_w = 0.0;
  int misses = 0;
  for (int i = -100; i <= 200; ++i) {
    if (i == 0) continue;
    const double x = i / 100.0;
    const MinimaxSolution ms = minimax_solution(p, x, tolerance::kSolutionEps, o.grid);
    const ExtReal v = ms.value.value;
    worst_v = std::max(worst_v, v.is_finite() ? std::abs(v.value() - library::example1_vsharp(x)) : INFINITY);
    const SetDesc& sol = ms.solution;
    const double target = library::example1_solution_A(x).lower();
    if (!sol.closure().member(target)) ++misses;
    worst_w = std::max(worst_w, width(sol));
  }
  r.pass = worst_v <= tolerance::kValue && misses == 0 && worst_w <= tolerance::kSolutionWidth;
  r.detail = fmt::format("max value error {:.3g} (tol {}), oracle point missed {} times, max width {:.3g} (tol {})",
                         worst_v, tolerance::kValue, misses, worst_w, tolerance::kSolutionWidth);
  return r;
}

struct Example1Values {
  Problem p = library::example1().problem;
  GridSpec grid;
  Memo<MinimaxSolution> at{[this](double x) { return minimax_solution(p, x, grid.eps_arg, grid); }};
  double v(double x) { return at(x).value.value.to_double(); }
  const SetDesc& solA(double x) { return at(x).solution; }
};

inline CriterionResult c3_jump(const Options& o, Example1Values& e) {
  CriterionResult r{3, "minimax value is not lsc at x = 0 but is usc there", false, {}, 0.0};
  const auto probe = harmonic_probe(0.0, 128);
  auto v = [&](const Point& q) { return e.v(q[0]); };
  auto in = [&](const Point& q) { return e.p.x_domain.member(q[0]); };
  const diag::Verdict lo = diag::check_function_semicontinuity(v, in, {0.0}, diag::Side::Lower, {probe}, o.diag);
  const diag::Verdict up = diag::check_function_semicontinuity(v, in, {0.0}, diag::Side::Upper, {probe}, o.diag);
  r.pass = lo.counterexample() && lo.min_margin() >= tolerance::kJumpMargin && !up.counterexample();
  r.detail = fmt::format("lower: {}, margin {:.3g}; upper: {}", diag::to_string(lo.outcome), lo.min_margin(),
                         diag::to_string(up.outcome));
  return r;
}

inline CriterionResult c4_alsc(const Options& o) {
  CriterionResult r{4, "A-lsc fails at (0,0,0) with the shipped and adversarial companions", false, {}, 0.0};
  const Problem p = library::example1().problem;
  const auto w = library::example1_witness();
  std::vector<Point> xs;
  for (double x : w.xs) xs.push_back({x});
  const auto shipped = diag::custom_probe({0.0}, xs, w.companions, "x_n = 1/n, a_n = n");
  const diag::Verdict hinted = diag::check_A_lsc(p, w.x, w.a, w.b, {shipped}, o.diag);
  const diag::Verdict adversarial = diag::check_A_lsc(p, w.x, w.a, w.b, diag::strip_companions({shipped}), o.diag);
  auto ok = [](const diag::Verdict& v) { return v.counterexample() && v.min_margin() >= tolerance::kAlscMargin; };
  r.pass = ok(hinted) && ok(adversarial);
  r.detail = fmt::format("shipped: {} margin {:.3g}; adversarial: {} margin {:.3g}", diag::to_string(hinted.outcome),
                         hinted.min_margin(), diag::to_string(adversarial.outcome), adversarial.min_margin());
  return r;
}

inline std::vector<std::pair<double, double>> phi_b_anchors() {
  std::vector<std::pair<double, double>> out;
  for (double x : {-1.0, -0.25, 0.0, 0.5, 1.0})
    for (double a : {0.0, 0.5, 1.0, 2.0}) out.emplace_back(x, a);
  return out;
}

inline CriterionResult c5_lsc(const Options& o) {
  CriterionResult r{5, "Phi_B is lsc at 20 graph anchors", false, {}, 0.0};
  const Problem p = library::example1().problem;
  auto m = [&](const Point& q) { return p.phi_B(q[0], q[1]); };
  auto in = [&](const Point& q) { return p.phi_B.in_domain(q[0], q[1]); };
  int failures = 0;
  std::size_t probes = 0;
  for (auto [x, a] : phi_b_anchors()) {
    const auto family = diag::keep_inside(diag::generate_probes({x, a}, {}), in);
    const diag::Verdict v = diag::check_multifunction_lsc(m, {x, a}, family, o.diag);
    probes += v.probes_tested;
    if (v.counterexample()) ++failures;
  }
  r.pass = failures == 0;
  r.detail = fmt::format("{} anchors with counterexamples, {} probes", failures, probes);
  return r;
}

inline CriterionResult c6_k_inf(const Options& o) {
  CriterionResult r{6, "f-sharp not K-inf-compact, swapped payoff is", false, {}, 0.0};
  const Problem p = library::example1().problem;
  auto u = [&](const Point& q, double a) { return minimax::detail::worst_loss_value(p, q[0], a, o.grid); };
  auto mA = [&](const Point& q) { return p.phi_A(q[0]); };
  auto inX = [&](const Point& q) { return p.x_domain.member(q[0]); };
  const diag::Verdict direct = diag::check_K_inf_compact(u, mA, inX, {{0.0}}, {0.5}, {}, o.diag);
  bool zero_values = false, diverging = false;
  if (direct.counterexample()) {
    zero_values = true;
    for (double val : direct.witness->values) zero_values = zero_values && std::abs(val) <= tolerance::kZeroLevel;
    const auto& mags = direct.witness->margins;
    diverging = mags.back() > o.diag.grid.truncation_radius;
    for (std::size_t i = 1; i < mags.size(); ++i) diverging = diverging && mags[i] > mags[i - 1];
  }

  auto section = [&](const Point& q) { return swap_section(p, q[0], q[1], o.grid).set; };
  auto us = [&](const Point& q, double a) { return p.payoff_unchecked(q[0], a, q[1]); };
  auto in_swap = [&](const Point& q) { return p.x_domain.member(q[0]) && !section(q).is_empty(); };
  std::vector<Point> anchors;
  for (double x : {-1.0, 0.0, 0.5, 1.0, 2.0})
    for (double b : {0.5, 3.0}) anchors.push_back({x, b});
  const diag::Verdict swapped = diag::check_K_inf_compact(us, section, in_swap, anchors, {0.5}, {}, o.diag);

  r.pass = direct.counterexample() && zero_values && diverging && !swapped.counterexample();
  r.detail = fmt::format("f-sharp: {}{}; swapped at {} anchors: {}", diag::to_string(direct.outcome),
                         direct.counterexample() ? fmt::format(" ({})", direct.witness->detail) : "", anchors.size(),
                         diag::to_string(swapped.outcome));
  return r;
}

inline CriterionResult c7_escape(const Options& o, Example1Values& e) {
  CriterionResult r{7, "solution set Phi*_A escapes to infinity along x_n = 1/n", false, {}, 0.0};
  const auto probe = harmonic_probe(0.0, 128);
  auto m = [&](const Point& q) { return e.solA(q[0]); };
  const diag::Verdict v = diag::check_multifunction_usc(m, {0.0}, {probe}, o.diag);
  std::size_t short_at = 0;
  if (v.counterexample()) {
    const auto& excess = v.witness->values;
    for (std::size_t n = 1; n <= excess.size() && !short_at; ++n)
      if (excess[n - 1] < static_cast<double>(n) / 2) short_at = n;
  }
  r.pass = v.counterexample() && short_at == 0;
  r.detail = v.counterexample()
                 ? (short_at ? fmt::format("excess below n/2 at n = {}", short_at)
                             : fmt::format("excess >= n/2 at every n, min tail margin {:.3g}", v.min_margin()))
                 : std::string(diag::to_string(v.outcome));
  return r;
}

inline CriterionResult c8_controls(const Options& o) {
  CriterionResult r{8, "control problems satisfy every conclusion", false, {}, 0.0};
  std::vector<std::string> failures;
  double worst_oracle = 0.0;
  for (const char* id : {"control_compact", "control_independent"}) {
    const Problem p = library::builtin(id).problem;
    auto fail = [&](const std::string& what) { failures.push_back(fmt::format("{}: {}", id, what)); };

    for (double x : {-1.0, 0.0, 0.5}) {
      const auto probes = diag::strip_companions(x_probes(p, x));
      for (double a : {0.0, 0.5, 1.0}) {
        const double lo = p.phi_B(x, a).lower();
        for (double b : {lo, lo + 1.0})
          if (diag::check_A_lsc(p, x, a, b, probes, o.diag).counterexample())
            fail(fmt::format("A-lsc at ({}, {}, {})", x, a, b));
      }
    }

    Memo<MinimaxSolution> at([&](double x) { return minimax_solution(p, x, o.grid.eps_arg, o.grid); });
    auto v = [&](double x) { return at(x).value.value.to_double(); };
    auto vf = [&](const Point& q) { return v(q[0]); };
    auto in = [&](const Point& q) { return p.x_domain.member(q[0]); };
    auto sol = [&](const Point& q) { return at(q[0]).solution; };
    // the unbounded problem is only probed at the point where Example 1 jumps
    const std::vector<double> anchors =
        p.phi_A(0.0).bounded() ? std::vector<double>{-1.0, 0.0, 1.0} : std::vector<double>{0.0};
    for (double x : anchors) {
      const auto probes = x_probes(p, x);
      if (diag::check_function_semicontinuity(vf, in, {x}, diag::Side::Lower, probes, o.diag).counterexample())
        fail(fmt::format("value lsc at {}", x));
      if (diag::check_function_semicontinuity(vf, in, {x}, diag::Side::Upper, probes, o.diag).counterexample())
        fail(fmt::format("value usc at {}", x));
      if (diag::check_multifunction_usc(sol, {x}, probes, o.diag).counterexample())
        fail(fmt::format("solution usc at {}", x));
    }

    for (int i = -40; i <= 40; ++i) {
      const double x = i * 0.05;
      const double err = std::abs(v(x) - oracle::brute_value(p, x).value);
      worst_oracle = std::max(worst_oracle, err);
    }
  }
  if (worst_oracle > tolerance::kBruteForce) failures.push_back("brute-force oracle mismatch");
  r.pass = failures.empty();
  r.detail = fmt::format("max |v - brute force| {:.3g} (tol {}){}", worst_oracle, tolerance::kBruteForce,
                         failures.empty() ? "" : "; failed: " + failures.front());
  return r;
}

inline CriterionResult c9_continuity(const Options& o) {
  CriterionResult r{9, "f-sharp continuous at 50 anchors, Phi*_B usc at 20 anchors", false, {}, 0.0};
  const Problem p = library::example1().problem;
  auto in = [&](const Point& q) { return p.phi_B.in_domain(q[0], q[1]); };
  int fs_fail = 0, sb_fail = 0;
  for (double x : {-1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 8.0}) {
    for (double a : {0.0, 0.3, 0.7, 1.2, 2.5}) {
      std::map<std::pair<double, double>, double> memo;
      auto fs = [&](const Point& q) {
        auto key = std::pair{q[0], q[1]};
        auto it = memo.find(key);
        if (it == memo.end()) it = memo.emplace(key, minimax::detail::worst_loss_value(p, q[0], q[1], o.grid).to_double()).first;
        return it->second;
      };
      const auto probes = diag::keep_inside(diag::generate_probes({x, a}, {}), in);
      if (diag::check_function_semicontinuity(fs, in, {x, a}, diag::Side::Lower, probes, o.diag).counterexample() ||
          diag::check_function_semicontinuity(fs, in, {x, a}, diag::Side::Upper, probes, o.diag).counterexample())
        ++fs_fail;
    }
  }
  auto solB = [&](const Point& q) { return solution_B(p, q[0], q[1], o.grid.eps_arg, o.grid); };
  for (auto [x, a] : phi_b_anchors()) {
    const auto probes = diag::keep_inside(diag::generate_probes({x, a}, {}), in);
    if (diag::check_multifunction_usc(solB, {x, a}, probes, o.diag).counterexample()) ++sb_fail;
  }
  r.pass = fs_fail == 0 && sb_fail == 0;
  r.detail = fmt::format("f-sharp failures at {} of 50 anchors, Phi*_B failures at {} of 20", fs_fail, sb_fail);
  return r;
}

inline CriterionResult c10_parser(const Options& o) {
  CriterionResult r{10, "parsed problem files agree with builtins and round-trip", false, {}, 0.0};
  std::vector<std::string> failures;
  for (const std::string& id : library::builtin_ids()) {
    const std::string path = o.problems_dir + "/" + id + ".mmx";
    try {
      const dsl::ProblemAST ast = dsl::parse_file(path);
      const std::string text = dsl::format(ast);
      if (!(dsl::parse(text) == ast) || dsl::format(dsl::parse(text)) != text) failures.push_back(id + " round-trip");
      const Problem parsed = dsl::to_problem(ast, id);
      const Problem builtin = library::builtin(id).problem;
      int mismatches = 0;
      const double a_hi = std::min(builtin.phi_A(0.0).upper(), 3.0);
      for (int i = 0; i < 10; ++i) {
        const double x = -2.0 + 4.0 * i / 9.0 + (i == 4 ? 1.0 / 9.0 : 0.0);
        for (int j = 0; j < 10; ++j) {
          const double a = a_hi * j / 9.0;
          const SetDesc fb = builtin.phi_B(x, a);
          if (!(parsed.phi_B(x, a) == fb)) ++mismatches;
          for (int k = 0; k < 10; ++k) {
            const double b = fb.lower() + 0.37 * k;
            const double fv = builtin.f(x, a, b), pv = parsed.f(x, a, b);
            if (std::bit_cast<std::uint64_t>(fv) != std::bit_cast<std::uint64_t>(pv)) ++mismatches;
          }
        }
      }
      if (mismatches) failures.push_back(fmt::format("{}: {} mismatches", id, mismatches));
    } catch (const std::exception& ex) {
      failures.push_back(fmt::format("{}: {}", id, ex.what()));
    }
  }
  r.pass = failures.empty();
  r.detail = failures.empty() ? "3 files, 1000 grid points each, exact" : failures.front();
  return r;
}

}  // namespace detail

/// Runs criteria 1-10 in order; `on_result` sees each result as it completes.
inline std::vector<CriterionResult> run(const Options& o,
                                        const std::function<void(const CriterionResult&)>& on_result = {}) {
  detail::Example1Values e;
  e.grid = o.grid;
  std::vector<std::function<CriterionResult()>> steps{
      [&] { return detail::c1_worst_loss(o); }, [&] { return detail::c2_minimax(o); },
      [&] { return detail::c3_jump(o, e); },    [&] { return detail::c4_alsc(o); },
      [&] { return detail::c5_lsc(o); },        [&] { return detail::c6_k_inf(o); },
      [&] { return detail::c7_escape(o, e); },  [&] { return detail::c8_controls(o); },
      [&] { return detail::c9_continuity(o); }, [&] { return detail::c10_parser(o); },
  };
  std::vector<CriterionResult> out;
  for (auto& step : steps) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = step();
    } catch (const std::exception& ex) {
      r.id = static_cast<int>(out.size()) + 1;
      r.name = "criterion raised an error";
      r.detail = ex.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace minimax::battery

#endif  // MINIMAX_BATTERY_HPP
