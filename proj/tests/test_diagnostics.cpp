#include <cmath>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "minimax/diagnostics.hpp"
#include "minimax/library.hpp"

using namespace minimax;
using namespace minimax::diag;

namespace {

const Problem& ex1() {
  static const Problem p = library::example1().problem;
  return p;
}

auto anywhere = [](const Point&) { return true; };

std::vector<SequenceProbe> line_probes(double anchor, std::size_t n = 128) {
  ProbeConfig pc;
  pc.length = n;
  return generate_probes({anchor}, pc);
}

}  // namespace

TEST(Probes, HarmonicAndMirrored) {
  ProbeConfig pc;
  pc.quadratic = false;
  const auto probes = generate_probes({0.0}, pc);
  ASSERT_EQ(probes.size(), 2u);
  EXPECT_EQ(probes[0].direction, Point{1.0});
  EXPECT_EQ(probes[1].direction, Point{-1.0});
  for (std::size_t n = 1; n <= 128; ++n) {
    EXPECT_EQ(probes[0].points[n - 1][0], 1.0 / static_cast<double>(n));
    EXPECT_EQ(probes[1].points[n - 1][0], -1.0 / static_cast<double>(n));
  }
}

TEST(Probes, FamilyShapeAndCustomPassthrough) {
  ProbeConfig pc;
  pc.scales = {1.0, 0.5};
  pc.custom.push_back(custom_probe({0.0}, {{3.0}, {2.0}, {1.0}}, {}, "mine"));
  const auto probes = generate_probes({0.0, 0.0}, pc);
  EXPECT_EQ(probes.size(), 2u * 2u * 8u + 1u);
  EXPECT_EQ(probes.back().label, "mine");
  EXPECT_EQ(probes.back().points, (std::vector<Point>{{3.0}, {2.0}, {1.0}}));
  pc.length = 8;
  EXPECT_THROW(generate_probes({0.0}, pc), std::invalid_argument);
  EXPECT_THROW(custom_probe({0.0}, {{1.0}}, {1.0, 2.0}), std::invalid_argument);
}

TEST(TailRule, PersistentGapsOnly) {
  std::vector<double> flat(128, 1.0), harmonic(128), small(128, 1e-5);
  for (std::size_t n = 1; n <= 128; ++n) harmonic[n - 1] = 1.0 / static_cast<double>(n);
  EXPECT_TRUE(assess_tail(flat, 1e-4, 0.75).counterexample);
  EXPECT_EQ(assess_tail(flat, 1e-4, 0.75).indices.front(), 65u);
  EXPECT_FALSE(assess_tail(harmonic, 1e-4, 0.75).counterexample);
  EXPECT_FALSE(assess_tail(small, 1e-4, 0.75).counterexample);
}

TEST(FunctionSemicontinuity, ValueFunctionJumpsDownAtZero) {
  auto v = [](const Point& p) { return library::example1_vsharp(p[0]); };
  const auto probes = line_probes(0.0);
  const Verdict lo = check_function_semicontinuity(v, anywhere, {0.0}, Side::Lower, probes, {});
  ASSERT_TRUE(lo.counterexample());
  EXPECT_EQ(lo.witness->probe.label, "harmonic c=1 dir=(1)");
  EXPECT_EQ(lo.min_margin(), 1.0);
  const Verdict up = check_function_semicontinuity(v, anywhere, {0.0}, Side::Upper, probes, {});
  EXPECT_FALSE(up.counterexample());
  EXPECT_NE(up.summary().find("among tested probes"), std::string::npos);
}

TEST(FunctionSemicontinuity, ContinuousFunctionPasses) {
  auto f = [](const Point& p) { return 3 * p[0] * p[0] - 2 * p[1] + std::sin(p[0]); };
  const Point s{0.4, -1.0};
  const auto probes = generate_probes(s, {});
  EXPECT_FALSE(check_function_semicontinuity(f, anywhere, s, Side::Lower, probes, {}).counterexample());
  EXPECT_FALSE(check_function_semicontinuity(f, anywhere, s, Side::Upper, probes, {}).counterexample());
}

TEST(FunctionSemicontinuity, ProbeLeavingDomainIsAnError) {
  auto f = [](const Point& p) { return p[0]; };
  auto nonneg = [](const Point& p) { return p[0] >= 0; };
  EXPECT_THROW(check_function_semicontinuity(f, nonneg, {0.0}, Side::Lower, line_probes(0.0), {}), DomainError);
  EXPECT_EQ(keep_inside(line_probes(0.0), nonneg).size(), 2u);
}

TEST(MultifunctionLsc, Example1FiberNearZero) {
  auto m = [](const Point& p) { return ex1().phi_B(p[0], p[1]); };
  std::vector<Point> pts;
  for (int n = 1; n <= 128; ++n) pts.push_back({1.0 / n, 0.0});
  const Verdict v = check_multifunction_lsc(m, {0.0, 0.0}, {custom_probe({0.0, 0.0}, pts)}, {});
  EXPECT_FALSE(v.counterexample());
  EXPECT_TRUE(v.truncated);
}

TEST(MultifunctionLsc, TextbookFailure) {
  auto m = [](const Point& p) { return p[0] == 0 ? SetDesc::unite(SetDesc::singleton(0), SetDesc::singleton(1)) : SetDesc::singleton(0); };
  const Verdict v = check_multifunction_lsc(m, {0.0}, line_probes(0.0), {});
  ASSERT_TRUE(v.counterexample());
  EXPECT_EQ(v.witness->detail, "target b = 1");
  EXPECT_EQ(v.min_margin(), 1.0);
}

TEST(MultifunctionUsc, SolutionSetEscapes) {
  auto m = [](const Point& p) { return library::example1_solution_A(p[0]); };
  const Verdict v = check_multifunction_usc(m, {0.0}, line_probes(0.0), {});
  ASSERT_TRUE(v.counterexample());
  const auto& excess = v.witness->values;
  for (std::size_t n = 1; n <= excess.size(); ++n) EXPECT_GE(excess[n - 1], static_cast<double>(n) / 2);
}

TEST(MultifunctionUsc, ConstantAndShrinkingFibersPass) {
  auto constant = [](const Point&) { return SetDesc::interval(-1, 2); };
  EXPECT_FALSE(check_multifunction_usc(constant, {0.0}, line_probes(0.0), {}).counterexample());
  auto shrinking = [](const Point& p) { return SetDesc::interval(0, 1 + std::abs(p[0])); };
  EXPECT_FALSE(check_multifunction_usc(shrinking, {0.0}, line_probes(0.0), {}).counterexample());
  auto unbounded = [](const Point&) { return SetDesc::half_line(0); };
  const Verdict u = check_multifunction_usc(unbounded, {0.0}, line_probes(0.0), {});
  EXPECT_FALSE(u.counterexample());
  EXPECT_TRUE(u.truncated);
}

TEST(ALsc, WitnessOfExample1) {
  const auto w = library::example1_witness();
  std::vector<Point> xs;
  for (double x : w.xs) xs.push_back({x});
  const Verdict v = check_A_lsc(ex1(), 0, 0, 0, {custom_probe({0.0}, xs, w.companions)}, {});
  ASSERT_TRUE(v.counterexample());
  EXPECT_GE(v.min_margin(), 1.0);
  EXPECT_EQ(v.witness->indices.front(), 65u);
  EXPECT_DOUBLE_EQ(v.witness->margins.front(), 67.0);
}

TEST(ALsc, InfeasibleCompanionIsAnError) {
  const Verdict ok = check_A_lsc(ex1(), 0, 0, 0, {}, {});
  EXPECT_FALSE(ok.counterexample());
  std::vector<Point> xs(16, Point{0.5});
  EXPECT_THROW(check_A_lsc(ex1(), 0, 0, 0, {custom_probe({0.0}, xs, std::vector<double>(16, -1.0))}, {}), DomainError);
  EXPECT_THROW(check_A_lsc(ex1(), 1, 2, 0, {}, {}), DomainError);
}

TEST(ALsc, IndependentControlPasses) {
  const Problem p = library::control_independent().problem;
  for (double x : {-1.0, 0.0, 1.5})
    for (double a : {0.0, 2.0})
      for (double b : {0.0, 1.0, 10.0})
        EXPECT_FALSE(check_A_lsc(p, x, a, b, strip_companions(line_probes(x)), {}).counterexample());
}

TEST(ALsc, ConstantFibersHaveZeroDistance) {
  Problem p = ex1();
  p.phi_B = GraphMultifunction(p.phi_A, [](double, double) { return SetDesc::half_line(0); });
  const Verdict v = check_A_lsc(p, 0.3, 1.0, 2.0, strip_companions(line_probes(0.3)), {});
  EXPECT_FALSE(v.counterexample());
}

TEST(ALsc, CompactActionsRestoreIt) {
  const Problem p = library::control_compact().problem;
  for (double x : {-0.5, 0.0, 0.5, 1.0})
    for (double a : {0.0, 0.5, 1.0}) {
      const double lo = p.phi_B(x, a).lower();
      for (double b : {lo, lo + 0.5})
        EXPECT_FALSE(check_A_lsc(p, x, a, b, strip_companions(line_probes(x)), {}).counterexample())
            << x << " " << a << " " << b;
    }
}

TEST(KInfCompact, CoerciveFunctionPasses) {
  auto u = [](const Point&, double y) { return y * y; };
  auto m = [](const Point&) { return SetDesc::real_line(); };
  for (double lambda : {0.5, 4.0, 100.0})
    EXPECT_FALSE(check_K_inf_compact(u, m, anywhere, {{0.0}, {2.0}}, {lambda}, {}, {}).counterexample());
}

TEST(KInfCompact, ClosedFormWorstLossFails) {
  auto u = [](const Point& p, double a) { return library::example1_fsharp(p[0], a); };
  auto m = [](const Point&) { return SetDesc::half_line(0); };
  const Verdict v = check_K_inf_compact(u, m, anywhere, {{0.0}}, {0.5}, {}, {});
  ASSERT_TRUE(v.counterexample());
  for (double val : v.witness->values) EXPECT_NEAR(val, 0.0, 1e-9);
}

TEST(InfCompact, LevelSets) {
  const GridSpec g;
  EXPECT_FALSE(check_inf_compact([](double a) { return a; }, SetDesc::half_line(0), {{5.0}}, g).counterexample());
  EXPECT_TRUE(
      check_inf_compact([](double a) { return 1 / (1 + a); }, SetDesc::half_line(0), {{0.5}}, g).counterexample());
  EXPECT_FALSE(check_inf_compact([](double a) { return library::example1_fsharp(2.0, a); }, SetDesc::half_line(0),
                                 {{0.0}}, g)
                   .counterexample());
  // sup-compactness through -f
  EXPECT_TRUE(check_inf_compact([](double a) { return -a; }, SetDesc::half_line(0), {{-3.0}}, g).counterexample());
  const Verdict open = check_inf_compact([](double a) { return a; }, SetDesc::interval(0, 1, false, true), {{1.0}}, g);
  EXPECT_FALSE(open.counterexample());
  EXPECT_NE(open.note.find("may not be closed"), std::string::npos);
}

// ---- properties ----------------------------------------------------------------

namespace {

// Random function of one variable with an optional jump at 0.
struct JumpFunction {
  double left, right, at, slope;
  double operator()(const Point& p) const {
    const double x = p[0];
    if (x == 0) return at;
    return (x < 0 ? left : right) + slope * x;
  }
};

JumpFunction jump_function(gen::Rng& r) {
  auto level = [&] { return r.coin(0.3) ? 0.0 : r.uniform(-2, 2); };
  return {level(), level(), level(), r.uniform(-3, 3)};
}

}  // namespace

TEST(DiagnosticsProperty, UpperModeIsLowerModeOfNegation) {
  gen::Rng r(41);
  for (int i = 0; i < 300; ++i) {
    const JumpFunction f = jump_function(r);
    auto neg = [&](const Point& p) { return -f(p); };
    const auto probes = line_probes(0.0, 32);
    const Verdict up = check_function_semicontinuity(f, anywhere, {0.0}, Side::Upper, probes, {});
    const Verdict lo = check_function_semicontinuity(neg, anywhere, {0.0}, Side::Lower, probes, {});
    ASSERT_EQ(up.outcome, lo.outcome) << i;
    if (up.counterexample()) {
      EXPECT_EQ(up.witness->probe_index, lo.witness->probe_index);
      EXPECT_EQ(up.witness->indices, lo.witness->indices);
      EXPECT_EQ(up.witness->margins, lo.witness->margins);
    }
  }
}

TEST(DiagnosticsProperty, ShrinkingToleranceKeepsCounterexamples) {
  gen::Rng r(42);
  for (int i = 0; i < 300; ++i) {
    const JumpFunction f = jump_function(r);
    DiagnosticConfig loose, tight;
    loose.tol = r.uniform(1e-4, 1.5);
    tight.tol = loose.tol * r.uniform(0.0, 1.0);
    const auto probes = line_probes(0.0, 32);
    for (Side side : {Side::Lower, Side::Upper}) {
      if (check_function_semicontinuity(f, anywhere, {0.0}, side, probes, loose).counterexample())
        EXPECT_TRUE(check_function_semicontinuity(f, anywhere, {0.0}, side, probes, tight).counterexample()) << i;
    }
    auto m = [&](const Point& p) { return SetDesc::interval(0, 1 + std::abs(f(p) - f({0.0}))); };
    if (check_multifunction_usc(m, {0.0}, probes, loose).counterexample())
      EXPECT_TRUE(check_multifunction_usc(m, {0.0}, probes, tight).counterexample()) << i;
  }
}

TEST(DiagnosticsProperty, WitnessesReplayBitForBit) {
  gen::Rng r(43);
  int replayed = 0;
  for (int i = 0; i < 200; ++i) {
    const JumpFunction f = jump_function(r);
    const Verdict v = check_function_semicontinuity(f, anywhere, {0.0}, Side::Lower, line_probes(0.0, 32), {});
    if (!v.counterexample()) continue;
    ++replayed;
    const Witness& w = *v.witness;
    const Verdict again = check_function_semicontinuity(f, anywhere, w.probe.anchor, Side::Lower, {w.probe}, {});
    ASSERT_TRUE(again.counterexample());
    EXPECT_EQ(again.witness->indices, w.indices);
    for (std::size_t k = 0; k < w.indices.size(); ++k) {
      const double margin = f(w.probe.anchor) - f(w.probe.points[w.indices[k] - 1]);
      EXPECT_EQ(std::bit_cast<std::uint64_t>(margin), std::bit_cast<std::uint64_t>(w.margins[k]));
      EXPECT_EQ(std::bit_cast<std::uint64_t>(again.witness->margins[k]), std::bit_cast<std::uint64_t>(w.margins[k]));
    }
  }
  EXPECT_GT(replayed, 20);
}

TEST(DiagnosticsProperty, ALscImpliesLsc) {
  for (const char* id : {"control_compact", "control_independent"}) {
    const Problem p = library::builtin(id).problem;
    auto m = [&](const Point& q) { return p.phi_B(q[0], q[1]); };
    auto in = [&](const Point& q) { return p.phi_B.in_domain(q[0], q[1]); };
    for (double x : {-0.5, 0.0, 0.5})
      for (double a : {0.0, 0.5, 1.0}) {
        const double b = p.phi_B(x, a).lower() + 0.25;
        // companions a_n -> a along each graph probe
        std::vector<SequenceProbe> joint = keep_inside(generate_probes({x, a}, {}), in), with_companions;
        for (const auto& pr : joint) {
          std::vector<Point> xs;
          std::vector<double> as;
          for (const Point& q : pr.points) xs.push_back({q[0]}), as.push_back(q[1]);
          with_companions.push_back(custom_probe({x}, xs, as, pr.label));
        }
        const Verdict alsc = check_A_lsc(p, x, a, b, with_companions, {});
        if (!alsc.counterexample()) {
          EXPECT_FALSE(check_multifunction_lsc(m, {x, a}, joint, {}).counterexample()) << id << " " << x << " " << a;
        }
      }
  }
  // the converse fails on Example 1
  auto m = [](const Point& q) { return ex1().phi_B(q[0], q[1]); };
  auto in = [](const Point& q) { return ex1().phi_B.in_domain(q[0], q[1]); };
  EXPECT_FALSE(check_multifunction_lsc(m, {0.0, 0.0}, keep_inside(generate_probes({0.0, 0.0}, {}), in), {}).counterexample());
  EXPECT_TRUE(check_A_lsc(ex1(), 0, 0, 0, strip_companions(keep_inside(line_probes(0.0), [](const Point& q) { return ex1().x_domain.member(q[0]); })), {}).counterexample());
}
