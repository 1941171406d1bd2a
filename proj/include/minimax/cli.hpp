#ifndef MINIMAX_CLI_HPP
#define MINIMAX_CLI_HPP

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "minimax/battery.hpp"
#include "minimax/diagnostics.hpp"
#include "minimax/dsl.hpp"
#include "minimax/engine.hpp"
#include "minimax/library.hpp"
#include "minimax/report.hpp"

namespace minimax::cli {

enum ExitCode : int { kOk = 0, kMismatch = 1, kUsage = 2 };

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  double radius = GridSpec{}.truncation_radius;
  double growth_cap = GridSpec{}.growth_cap;
  int refine = GridSpec{}.refinement_depth;
  bool seedless = false;
  bool timing = false;

  GridSpec grid() const {
    GridSpec g;
    g.truncation_radius = radius;
    g.growth_cap = growth_cap;
    g.refinement_depth = refine;
    if (seedless) {
      g.seeded = false;
      g.max_seeds = 1;
    }
    try {
      g.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return g;
  }
};

struct Loaded {
  std::string id;
  Problem problem;
  std::optional<library::NamedProblem> named;
};

inline Loaded load_problem(const std::string& source) {
  constexpr std::string_view prefix = "builtin:";
  if (source.rfind(prefix, 0) == 0) {
    const std::string id = source.substr(prefix.size());
    try {
      library::NamedProblem np = library::builtin(id);
      return {id, np.problem, np};
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  const std::string id = std::filesystem::path(source).stem().string();
  return {id, dsl::to_problem(dsl::parse_file(source), id), std::nullopt};
}

inline double parse_number(std::string_view s) {
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
    throw UsageError(fmt::format("not a number: '{}'", s));
  return v;
}

inline std::vector<double> split_numbers(const std::string& text, char sep) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = text.find(sep, start);
    out.push_back(parse_number(std::string_view(text).substr(start, end - start)));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

/// "lo:hi:step" -> lo, lo + step, ... up to hi; empty when hi < lo.
inline std::vector<double> parse_x_grid(const std::string& text) {
  const auto v = split_numbers(text, ':');
  if (v.size() != 3) throw UsageError("--x-grid expects lo:hi:step");
  if (!(v[2] > 0)) throw UsageError("--x-grid step must be positive");
  std::vector<double> xs;
  if (v[1] < v[0]) return xs;
  const auto n = static_cast<long>(std::floor((v[1] - v[0]) / v[2] + 1e-9));
  for (long k = 0; k <= n; ++k) xs.push_back(v[0] + static_cast<double>(k) * v[2]);
  return xs;
}

inline std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return fmt::format("{:.12g}", v);
}
inline std::string num(const ExtReal& v) { return num(v.to_double()); }

inline void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot open output file: " + path);
  f << text;
  if (!f) throw std::ios_base::failure("cannot write output file: " + path);
}

// ---- subcommands -----------------------------------------------------------

struct EvalArgs {
  std::string problem;
  double x = 0;
  std::optional<double> a;
  double eps = GridSpec{}.eps_arg;
  std::string out = "text";
};

inline int run_eval(const EvalArgs& args, const Globals& g, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const Loaded L = load_problem(args.problem);
  const GridSpec grid = g.grid();
  if (!(args.eps >= 0)) throw UsageError("--eps must be nonnegative");
  const MinimaxSolution ms = minimax_solution(L.problem, args.x, args.eps, grid);

  report::Report r;
  r.problem_id = L.id;
  r.command = "eval";
  r.config = {{"grid", report::grid_json(grid)}, {"eps", args.eps}};
  report::Row row;
  row.x = args.x;
  row.values = {{"v_sharp", report::number(ms.value.value)},
                {"status", std::string(to_string(ms.value.status))},
                {"solution_A", report::set_json(ms.solution)}};
  std::optional<ExtremumResult> fs;
  std::optional<SetDesc> solB;
  if (args.a) {
    row.a = *args.a;
    fs = worst_loss(L.problem, args.x, *args.a, grid);
    solB = solution_B(L.problem, args.x, *args.a, args.eps, grid);
    row.values["f_sharp"] = report::number(fs->value);
    row.values["f_sharp_status"] = std::string(to_string(fs->status));
    row.values["solution_B"] = report::set_json(*solB);
  }
  r.rows.push_back(row);
  if (g.timing) r.timing_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (args.out == "json") {
    out << report::dump(r);
    return kOk;
  }
  out << fmt::format("problem: {}\nx = {}\n", L.id, num(args.x));
  if (args.a) {
    out << fmt::format("a = {}\n", num(*args.a));
    out << fmt::format("f_sharp = {} ({})\n", num(fs->value), to_string(fs->status));
  }
  out << fmt::format("v_sharp = {} ({})\n", num(ms.value.value), to_string(ms.value.status));
  out << fmt::format("solution_A (eps = {}) = {}\n", args.eps, ms.solution.to_string());
  if (solB) out << fmt::format("solution_B (eps = {}) = {}\n", args.eps, solB->to_string());
  if (r.timing_seconds) out << fmt::format("time: {:.3f}s\n", *r.timing_seconds);
  return kOk;
}

struct SweepArgs {
  std::string problem;
  std::string x_grid;
  std::string out = "csv";
  std::string output;
  double eps = GridSpec{}.eps_arg;
};

inline int run_sweep(const SweepArgs& args, const Globals& g, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const Loaded L = load_problem(args.problem);
  const GridSpec grid = g.grid();
  std::vector<double> xs = parse_x_grid(args.x_grid);
  std::sort(xs.begin(), xs.end());
  std::vector<report::SweepRow> rows;
  for (double x : xs) {
    MinimaxSolution ms = minimax_solution(L.problem, x, args.eps, grid);
    rows.push_back({x, ms.value, std::move(ms.solution)});
  }
  if (args.out == "csv") {
    write_output(report::sweep_csv(rows), args.output, out);
    return kOk;
  }
  report::Report r;
  r.problem_id = L.id;
  r.command = "sweep";
  r.config = {{"grid", report::grid_json(grid)}, {"x_grid", args.x_grid}, {"eps", args.eps}};
  for (const auto& row : rows) r.rows.push_back(report::sweep_row_json(row));
  r.sort_rows();
  if (g.timing) r.timing_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_output(report::dump(r), args.output, out);
  return kOk;
}

struct DiagnoseArgs {
  std::string problem;
  std::string property;
  std::string at;
  std::string target;
  std::size_t probes = 128;
  double tol = diag::DiagnosticConfig{}.tol;
  std::vector<double> lambda;
  std::string out = "text";
  std::string output;
};

inline diag::Verdict diagnose(const DiagnoseArgs& args, const Loaded& L, const GridSpec& grid) {
  using diag::Point;
  const Problem& P = L.problem;
  const std::vector<double> at = split_numbers(args.at, ',');
  diag::DiagnosticConfig cfg;
  cfg.tol = args.tol;
  cfg.grid = grid;
  diag::ProbeConfig pc;
  pc.length = args.probes;
  const std::vector<double> lambdas = args.lambda.empty() ? std::vector<double>{0.5} : args.lambda;

  auto need = [&](std::size_t lo, std::size_t hi, const char* what) {
    if (at.size() < lo || at.size() > hi) throw UsageError(fmt::format("--property {} expects --at {}", args.property, what));
  };
  auto inX = [&](const Point& q) { return P.x_domain.member(q[0]); };
  auto inGraph = [&](const Point& q) { return P.phi_B.in_domain(q[0], q[1]); };
  auto x_probes = [&](const Point& anchor) { return diag::keep_inside(diag::generate_probes(anchor, pc), inX); };
  auto graph_probes = [&](const Point& anchor) {
    return diag::keep_inside(diag::generate_probes(anchor, pc), inGraph);
  };
  auto vsharp = [&](const Point& q) { return minimax_value(P, q[0], grid).value; };
  auto fsharp = [&](const Point& q) { return minimax::detail::worst_loss_value(P, q[0], q[1], grid); };

  const std::string& prop = args.property;
  if (prop == "fn-lsc" || prop == "fn-usc") {
    need(1, 2, "x (minimax value) or x,a (worst loss)");
    const diag::Side side = prop == "fn-lsc" ? diag::Side::Lower : diag::Side::Upper;
    if (at.size() == 1) {
      if (!inX(at)) throw DomainError("anchor outside the parameter domain");
      return diag::check_function_semicontinuity(vsharp, inX, at, side, x_probes(at), cfg);
    }
    if (!inGraph(at)) throw DomainError("anchor (x, a) outside Gr(Phi_A)");
    return diag::check_function_semicontinuity(fsharp, inGraph, at, side, graph_probes(at), cfg);
  }
  if (prop == "mf-lsc" || prop == "mf-usc") {
    need(1, 2, "x or x,a");
    std::string target = args.target;
    if (target.empty()) target = at.size() == 1 ? "solution_A" : "phi_B";
    const bool lsc = prop == "mf-lsc";
    auto check = [&](auto&& m, const std::vector<diag::SequenceProbe>& probes) {
      return lsc ? diag::check_multifunction_lsc(m, at, probes, cfg) : diag::check_multifunction_usc(m, at, probes, cfg);
    };
    if (at.size() == 1) {
      if (!inX(at)) throw DomainError("anchor outside the parameter domain");
      if (target == "phi_A") return check([&](const Point& q) { return P.phi_A(q[0]); }, x_probes(at));
      if (target == "solution_A")
        return check([&](const Point& q) { return solution_A(P, q[0], grid.eps_arg, grid); }, x_probes(at));
      throw UsageError("with --at x, --target must be phi_A or solution_A");
    }
    if (!inGraph(at)) throw DomainError("anchor (x, a) outside Gr(Phi_A)");
    if (target == "phi_B") return check([&](const Point& q) { return P.phi_B(q[0], q[1]); }, graph_probes(at));
    if (target == "solution_B")
      return check([&](const Point& q) { return solution_B(P, q[0], q[1], grid.eps_arg, grid); }, graph_probes(at));
    throw UsageError("with --at x,a, --target must be phi_B or solution_B");
  }
  if (prop == "a-lsc") {
    need(3, 3, "x,a,b");
    std::vector<diag::SequenceProbe> probes;
    if (L.named) {
      for (const auto& w : L.named->witnesses) {
        if (w.x != at[0] || w.a != at[1] || w.b != at[2]) continue;
        const std::size_t n = std::min(w.xs.size(), args.probes);
        std::vector<Point> pts;
        for (std::size_t i = 0; i < n; ++i) pts.push_back({w.xs[i]});
        probes.push_back(diag::custom_probe({w.x}, pts,
                                            std::vector<double>(w.companions.begin(), w.companions.begin() + n),
                                            "library witness"));
      }
    }
    // a library witness for this anchor takes precedence in the report
    diag::Verdict adversarial = diag::check_A_lsc(P, at[0], at[1], at[2], diag::strip_companions(x_probes({at[0]})), cfg);
    if (probes.empty()) return adversarial;
    diag::Verdict hinted = diag::check_A_lsc(P, at[0], at[1], at[2], probes, cfg);
    hinted.probes_tested += adversarial.probes_tested;
    hinted.note = fmt::format("adversarial companions: {}", diag::to_string(adversarial.outcome));
    if (hinted.counterexample()) return hinted;
    adversarial.probes_tested = hinted.probes_tested;
    adversarial.note = "library witness: NoCounterexampleFound";
    return adversarial;
  }
  if (prop == "k-inf-compact") {
    need(1, 2, "x (worst loss over Gr(Phi_A)) or x,b (swapped payoff over the swap sections)");
    if (lambdas.size() != 1) throw UsageError("k-inf-compact takes a single --lambda");
    if (at.size() == 1) {
      auto mA = [&](const Point& q) { return P.phi_A(q[0]); };
      auto u = [&](const Point& q, double a) { return minimax::detail::worst_loss_value(P, q[0], a, grid); };
      return diag::check_K_inf_compact(u, mA, inX, {at}, {lambdas[0]}, pc, cfg);
    }
    auto section = [&](const Point& q) { return swap_section(P, q[0], q[1], grid).set; };
    auto u = [&](const Point& q, double a) { return P.payoff_unchecked(q[0], a, q[1]); };
    auto in = [&](const Point& q) { return inX(q) && !section(q).is_empty(); };
    return diag::check_K_inf_compact(u, section, in, {at}, {lambdas[0]}, pc, cfg);
  }
  if (prop == "inf-compact") {
    need(1, 1, "x");
    if (!inX(at)) throw DomainError("anchor outside the parameter domain");
    std::vector<diag::LevelCap> caps;
    for (double l : lambdas) caps.push_back({l});
    return diag::check_inf_compact([&](double a) { return minimax::detail::worst_loss_value(P, at[0], a, grid); },
                                   P.phi_A(at[0]), caps, grid);
  }
  throw UsageError("unknown --property " + prop);
}

inline int run_diagnose(const DiagnoseArgs& args, const Globals& g, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  if (args.probes < 16) throw UsageError("--probes must be at least 16");
  if (!(args.tol > 0)) throw UsageError("--tol must be positive");
  const Loaded L = load_problem(args.problem);
  const GridSpec grid = g.grid();
  const diag::Verdict v = diagnose(args, L, grid);

  report::Report r;
  r.problem_id = L.id;
  r.command = "diagnose";
  r.config = {{"grid", report::grid_json(grid)}, {"property", args.property}, {"at", split_numbers(args.at, ',')},
              {"probes", args.probes},           {"tol", args.tol}};
  if (!args.target.empty()) r.config["target"] = args.target;
  if (!args.lambda.empty()) r.config["lambda"] = args.lambda;
  r.verdicts.push_back(report::verdict_json(v));
  if (g.timing) r.timing_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (args.out == "json") {
    write_output(report::dump(r), args.output, out);
    return kOk;
  }
  std::string text = fmt::format("problem: {}\n{}\n", L.id, v.summary());
  if (v.witness) {
    const auto& w = *v.witness;
    const std::size_t shown = std::min<std::size_t>(w.indices.size(), 5);
    for (std::size_t i = 0; i < shown; ++i) {
      const std::size_t n = w.indices[i];
      text += fmt::format("  n = {:>4}  point = ({})", n, fmt::join(w.probe.points.at(n - 1), ", "));
      if (w.probe.has_companions()) text += fmt::format("  a_n = {}", w.probe.companions.at(n - 1));
      else if (w.values.size() == w.indices.size()) text += fmt::format("  value = {}", num(w.values[i]));
      text += fmt::format("  margin = {}\n", num(w.margins[i]));
    }
    if (w.indices.size() > shown) text += fmt::format("  ... {} offending indices in total\n", w.indices.size());
  }
  if (r.timing_seconds) text += fmt::format("time: {:.3f}s\n", *r.timing_seconds);
  write_output(text, args.output, out);
  return kOk;
}

inline int run_verify(const std::string& builtin, const Globals& g, std::ostream& out) {
  if (builtin != "example1") throw UsageError("verify: no acceptance battery for '" + builtin + "'");
  battery::Options o;
  o.grid = g.grid();
  o.diag.grid = o.grid;
  const auto t0 = std::chrono::steady_clock::now();
  const auto results = battery::run(o, [&](const battery::CriterionResult& r) { out << r.line() << '\n' << std::flush; });
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto first = std::find_if(results.begin(), results.end(), [](const auto& r) { return !r.pass; });
  if (first != results.end()) {
    out << fmt::format("verify: FAILED; first failing criterion {}: {}\n", first->id, first->name);
    return kMismatch;
  }
  out << fmt::format("verify: all {} criteria passed in {:.1f}s\n", results.size(), total);
  return kOk;
}

// ---- entry point -------------------------------------------------------------

/// Runs the command line `args` (without the program name).
inline int execute(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parametric minimax solver and continuity diagnostics", "minimax"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--radius", g.radius, "truncation radius of unbounded sets")->check(CLI::PositiveNumber);
  app.add_option("--growth-cap", g.growth_cap, "per-doubling improvement treated as divergence")
      ->check(CLI::PositiveNumber);
  app.add_option("--refine", g.refine, "refinement depth")->check(CLI::NonNegativeNumber);
  app.add_flag("--seedless", g.seedless, "refine only around the best coarse grid point");
  app.add_flag("--timing", g.timing, "include wall-clock timing in reports");

  const std::string problem_help = "problem file (.mmx) or builtin:<id>";

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "worst loss, minimax value and solution sets at a point");
  eval->add_option("--problem", ea.problem, problem_help)->required();
  eval->add_option("--x", ea.x, "parameter value")->required();
  eval->add_option("--a", ea.a, "first-player action");
  eval->add_option("--eps", ea.eps, "eps of the eps-arg solution sets");
  eval->add_option("--out", ea.out, "text or json")->check(CLI::IsMember({"text", "json"}));

  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "minimax value and solution bounds over an x grid");
  sweep->add_option("--problem", sa.problem, problem_help)->required();
  sweep->add_option("--x-grid", sa.x_grid, "lo:hi:step")->required();
  sweep->add_option("--out", sa.out, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--output", sa.output, "output path (default: standard output)");
  sweep->add_option("--eps", sa.eps, "eps of the eps-arg solution sets");

  DiagnoseArgs da;
  auto* diagnose_cmd = app.add_subcommand("diagnose", "semicontinuity and compactness diagnostics");
  diagnose_cmd->add_option("--problem", da.problem, problem_help)->required();
  diagnose_cmd
      ->add_option("--property", da.property, "fn-lsc, fn-usc, mf-lsc, mf-usc, a-lsc, k-inf-compact or inf-compact")
      ->required()
      ->check(CLI::IsMember({"fn-lsc", "fn-usc", "mf-lsc", "mf-usc", "a-lsc", "k-inf-compact", "inf-compact"}));
  diagnose_cmd->add_option("--at", da.at, "anchor point, comma separated")->required();
  diagnose_cmd->add_option("--target", da.target, "multifunction: phi_A, solution_A, phi_B or solution_B");
  diagnose_cmd->add_option("--probes", da.probes, "probe length N");
  diagnose_cmd->add_option("--tol", da.tol, "tolerance");
  diagnose_cmd->add_option("--lambda", da.lambda, "level cap(s)");
  diagnose_cmd->add_option("--out", da.out, "text or json")->check(CLI::IsMember({"text", "json"}));
  diagnose_cmd->add_option("--output", da.output, "output path (default: standard output)");

  std::string vb;
  auto* verify = app.add_subcommand("verify", "run the acceptance battery");
  verify->add_option("--builtin", vb, "builtin problem id")->required();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (eval->parsed()) return run_eval(ea, g, out);
    if (sweep->parsed()) return run_sweep(sa, g, out);
    if (diagnose_cmd->parsed()) return run_diagnose(da, g, out);
    if (verify->parsed()) return run_verify(vb, g, out);
  } catch (const ParseError& e) {
    err << "error: parse error at " << e.what() << '\n';
  } catch (const EvalError& e) {
    err << "error: evaluation error: " << e.what() << '\n';
  } catch (const DomainError& e) {
    err << "error: domain error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kUsage;
}

}  // namespace minimax::cli

#endif  // MINIMAX_CLI_HPP
