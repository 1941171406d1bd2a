#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "minimax/cli.hpp"
#include "minimax/report.hpp"

using namespace minimax;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::execute(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) {
    if (!l.empty() && l.back() == '\r') l.pop_back();
    out.push_back(l);
  }
  return out;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path;
}

const std::string kFixture = std::string(MINIMAX_PROBLEMS_DIR) + "/example1.mmx";

}  // namespace

TEST(Cli, EvalAtPositiveX) {
  const Outcome r = run({"eval", "--problem", "builtin:example1", "--x", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("v_sharp = 0 (attained)"), std::string::npos) << r.out;
  const Outcome j = run({"eval", "--problem", "builtin:example1", "--x", "2", "--out", "json"});
  const auto doc = report::json::parse(j.out);
  const auto& part = doc["rows"][0]["solution_A"]["parts"][0];
  EXPECT_NEAR(part["lo"].get<double>(), 0.5, 1e-5);
  EXPECT_NEAR(part["hi"].get<double>(), 0.5, 1e-5);
}

TEST(Cli, EvalWithAction) {
  const Outcome r = run({"eval", "--problem", kFixture, "--x", "1", "--a", "0.75", "--out", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = report::json::parse(r.out);
  EXPECT_NEAR(doc["rows"][0]["f_sharp"].get<double>(), 0.75, 1e-12);
  EXPECT_EQ(doc["rows"][0]["a"].get<double>(), 0.75);
  EXPECT_EQ(doc["rows"][0]["solution_B"]["parts"][0]["lo"].get<double>(), 1.5);
}

TEST(Cli, SweepCsv) {
  const Outcome r = run({"sweep", "--problem", "builtin:example1", "--x-grid", "-1:1:0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 6u);
  EXPECT_EQ(ls[0], "x,v_sharp,solA_lo,solA_hi,status");
  const std::vector<std::string> expected_v{"1", "1", "1", "0", "0"};
  for (std::size_t i = 0; i < 5; ++i) {
    std::vector<std::string> cols;
    std::istringstream row(ls[i + 1]);
    for (std::string c; std::getline(row, c, ',');) cols.push_back(c);
    ASSERT_EQ(cols.size(), 5u);
    EXPECT_EQ(cols[1], expected_v[i]) << ls[i + 1];
    EXPECT_EQ(cols[4], "attained");
  }
  EXPECT_NE(r.out.find("\r\n"), std::string::npos);
}

TEST(Cli, EmptySweepIsHeaderOnly) {
  const Outcome r = run({"sweep", "--problem", "builtin:example1", "--x-grid", "1:0:0.5"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "x,v_sharp,solA_lo,solA_hi,status\r\n");
}

TEST(Cli, FileAndBuiltinAgree) {
  const Outcome a = run({"sweep", "--problem", "builtin:example1", "--x-grid", "-0.5:1:0.25"});
  const Outcome b = run({"sweep", "--problem", kFixture, "--x-grid", "-0.5:1:0.25"});
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, ReportsAreDeterministic) {
  const std::vector<std::string> args{"sweep", "--problem", "builtin:control_independent", "--x-grid", "-1:1:0.5",
                                      "--out", "json"};
  const Outcome a = run(args), b = run(args);
  EXPECT_EQ(a.out, b.out);
  auto timed = args;
  timed.insert(timed.begin(), "--timing");
  auto doc = report::json::parse(run(timed).out);
  ASSERT_TRUE(doc.contains("timing"));
  doc.erase("timing");
  EXPECT_EQ(doc.dump(2) + "\n", a.out);
}

TEST(Cli, SweepJsonWritesFile) {
  const auto path = std::filesystem::temp_directory_path() / "minimax_sweep_test.json";
  const Outcome r = run({"sweep", "--problem", "builtin:example1", "--x-grid", "0:1:0.5", "--out", "json", "--output",
                     path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(path);
  const auto doc = report::json::parse(in);
  EXPECT_EQ(doc["schema_version"], "1.0");
  EXPECT_EQ(doc["command"], "sweep");
  ASSERT_EQ(doc["rows"].size(), 3u);
  EXPECT_EQ(doc["rows"][0]["v_sharp"].get<double>(), 1.0);
  EXPECT_EQ(doc["rows"][2]["v_sharp"].get<double>(), 0.0);
  std::filesystem::remove(path);
}

TEST(Cli, DiagnoseALscReportsWitness) {
  const Outcome r = run({"diagnose", "--problem", "builtin:example1", "--property", "a-lsc", "--at", "0,0,0"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("counterexample found on probe 'library witness'"), std::string::npos) << r.out;
  const Outcome j = run({"diagnose", "--problem", "builtin:example1", "--property", "a-lsc", "--at", "0,0,0", "--out", "json"});
  const auto w = report::json::parse(j.out)["verdicts"][0]["witness"];
  EXPECT_EQ(w["indices"][0], 65);
  EXPECT_EQ(w["companions"][0].get<double>(), 65.0);
  EXPECT_DOUBLE_EQ(w["points"][0][0].get<double>(), 1.0 / 65);
  for (const auto& m : w["margins"]) EXPECT_GE(m.get<double>(), 1.0);
}

TEST(Cli, DiagnoseNeverFailsOnCounterexamples) {
  const Outcome r = run({"diagnose", "--problem", "builtin:example1", "--property", "mf-usc", "--at", "0", "--probes", "16"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("counterexample found"), std::string::npos);
  const Outcome k = run({"diagnose", "--problem", "builtin:control_independent", "--property", "inf-compact", "--at", "1",
                     "--lambda", "2"});
  EXPECT_EQ(k.code, 0);
  EXPECT_NE(k.out.find("no counterexample among tested probes"), std::string::npos);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"eval", "--problem", "builtin:example1"}).code, 2);
  EXPECT_EQ(run({"eval", "--problem", "builtin:nope", "--x", "1"}).code, 2);
  EXPECT_EQ(run({"sweep", "--problem", "builtin:example1", "--x-grid", "0:1"}).code, 2);
  EXPECT_EQ(run({"sweep", "--problem", "builtin:example1", "--x-grid", "0:1:-1"}).code, 2);
  EXPECT_EQ(run({"diagnose", "--problem", "builtin:example1", "--property", "a-lsc", "--at", "0,0"}).code, 2);
  EXPECT_EQ(run({"diagnose", "--problem", "builtin:example1", "--property", "fn-lsc", "--at", "0", "--probes", "4"}).code, 2);
  EXPECT_EQ(run({"verify", "--builtin", "control_compact"}).code, 2);
  EXPECT_EQ(run({"--radius", "-1", "eval", "--problem", "builtin:example1", "--x", "1"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, DomainAndIoErrorsExitTwo) {
  const Outcome d = run({"eval", "--problem", "builtin:example1", "--x", "11"});
  EXPECT_EQ(d.code, 2);
  EXPECT_NE(d.err.find("domain error"), std::string::npos);
  EXPECT_EQ(run({"eval", "--problem", "builtin:example1", "--x", "1", "--a", "-1"}).code, 2);
  EXPECT_EQ(run({"eval", "--problem", "/nonexistent/p.mmx", "--x", "1"}).code, 2);
  EXPECT_EQ(run({"sweep", "--problem", "builtin:example1", "--x-grid", "0:1:1", "--output", "/nonexistent/dir/out.csv"}).code, 2);
}

TEST(Cli, ParseErrorsReportPosition) {
  const auto path = temp_file("minimax_bad.mmx", "x_domain = interval(0, 1);\nphi_A = halfline(b);\n");
  const Outcome r = run({"eval", "--problem", path.string(), "--x", "0.5"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("2:18"), std::string::npos) << r.err;
  const auto div = temp_file("minimax_div.mmx",
                             "x_domain = interval(0, 1);\nphi_A = halfline(0);\nphi_B = halfline(0);\nf = 1 / x;\n");
  const Outcome e = run({"eval", "--problem", div.string(), "--x", "0"});
  EXPECT_EQ(e.code, 2);
  EXPECT_NE(e.err.find("division by zero"), std::string::npos) << e.err;
  std::filesystem::remove(path);
  std::filesystem::remove(div);
}

TEST(Cli, ParsesGrids) {
  EXPECT_EQ(cli::parse_x_grid("-1:1:0.5"), (std::vector<double>{-1, -0.5, 0, 0.5, 1}));
  EXPECT_EQ(cli::parse_x_grid("0:0.3:0.1").size(), 4u);
  EXPECT_TRUE(cli::parse_x_grid("2:1:0.1").empty());
}

TEST(Report, JsonRoundTrip) {
  report::Report r;
  r.problem_id = "example1";
  r.command = "sweep";
  r.config = {{"grid", report::grid_json(GridSpec{})}, {"x_grid", "-1:1:0.5"}};
  r.rows.push_back({0.5, std::nullopt, {{"v_sharp", 0.0}, {"status", "attained"}}});
  r.rows.push_back({-1.0, 2.0, {{"v_sharp", "+inf"}, {"status", "divergent_plus_inf"}}});
  r.rows.push_back({-1.0, std::nullopt, {{"v_sharp", 1.0}}});
  r.sort_rows();
  EXPECT_EQ(r.rows[0].a, std::nullopt);
  EXPECT_EQ(r.rows[1].a, 2.0);
  r.verdicts.push_back({{"property", "A-lsc"}, {"outcome", "CounterexampleFound"}});
  r.timing_seconds = 0.25;
  EXPECT_EQ(report::from_json(report::json::parse(report::dump(r))), r);
}

TEST(Report, CsvQuoting) {
  EXPECT_EQ(report::csv_field("plain"), "plain");
  EXPECT_EQ(report::csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(report::csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(report::csv_field("two\nlines"), "\"two\nlines\"");
  EXPECT_EQ(report::csv_number(INFINITY), "inf");
  EXPECT_EQ(report::csv_number(0.1 + 0.2), "0.3");
}
