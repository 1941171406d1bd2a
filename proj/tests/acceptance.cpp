// Acceptance suite: one PASS/FAIL line per criterion. Criterion 10 also runs
// the command-line `verify` and checks its exit status and wall time.

#include <chrono>
#include <cstdio>
#include <string>
#include <sys/wait.h>

#include <fmt/format.h>

#include "minimax/battery.hpp"

#ifndef MINIMAX_CLI_PATH
#error "MINIMAX_CLI_PATH must name the minimax executable"
#endif

namespace {

constexpr double kVerifyBudgetSeconds = 60.0;

struct VerifyRun {
  int exit_code = -1;
  double seconds = 0.0;
  std::string output;
};

VerifyRun run_verify() {
  VerifyRun v;
  const auto t0 = std::chrono::steady_clock::now();
  FILE* pipe = popen(MINIMAX_CLI_PATH " verify --builtin example1 2>&1", "r");
  if (!pipe) return v;
  char buf[512];
  while (fgets(buf, sizeof buf, pipe)) v.output += buf;
  const int status = pclose(pipe);
  v.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  v.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return v;
}

}  // namespace

int main() {
  minimax::battery::Options options;
  int failures = 0;
  minimax::battery::run(options, [&](minimax::battery::CriterionResult r) {
    if (r.id == 10) {
      const VerifyRun v = run_verify();
      const bool ok = v.exit_code == 0 && v.seconds < kVerifyBudgetSeconds;
      r.detail += fmt::format("; `verify --builtin example1` exit {} in {:.1f}s (budget {}s)", v.exit_code, v.seconds,
                              kVerifyBudgetSeconds);
      if (!ok) fmt::print("{}", v.output);
      r.pass = r.pass && ok;
    }
    failures += r.pass ? 0 : 1;
    fmt::print("{}\n", r.line());
    std::fflush(stdout);
  });
  fmt::print("{}\n", failures ? fmt::format("acceptance: {} criteria failed", failures) : "acceptance: all criteria passed");
  return failures ? 1 : 0;
}
