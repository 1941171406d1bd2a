#ifndef MINIMAX_REPORT_HPP
#define MINIMAX_REPORT_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "minimax/diagnostics.hpp"
#include "minimax/engine.hpp"
#include "minimax/ext_real.hpp"
#include "minimax/grid.hpp"
#include "minimax/set_desc.hpp"

namespace minimax::report {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1.0";

// Finite numbers stay numbers; infinities become "+inf" / "-inf".
inline json number(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return v;
}
inline json number(const ExtReal& v) { return number(v.to_double()); }

inline json set_json(const SetDesc& s) {
  json parts = json::array();
  for (const Part& p : s.parts())
    parts.push_back({{"lo", number(p.lo)}, {"hi", number(p.hi)}, {"lo_closed", p.lo_closed}, {"hi_closed", p.hi_closed}});
  return {{"text", s.to_string()}, {"parts", parts}};
}

inline json grid_json(const GridSpec& g) {
  return {{"step", g.step},
          {"refinement_depth", g.refinement_depth},
          {"truncation_radius", g.truncation_radius},
          {"growth_cap", g.growth_cap},
          {"tail_doublings", g.tail_doublings},
          {"tail_points", g.tail_points},
          {"eps_arg", g.eps_arg},
          {"seeded", g.seeded}};
}

inline json verdict_json(const diag::Verdict& v) {
  json out{{"property", v.property},
           {"outcome", std::string(diag::to_string(v.outcome))},
           {"summary", v.summary()},
           {"probes_tested", v.probes_tested},
           {"tolerance_used", v.tolerance_used},
           {"truncated", v.truncated}};
  if (!v.note.empty()) out["note"] = v.note;
  if (v.witness) {
    const diag::Witness& w = *v.witness;
    json points = json::array();
    for (std::size_t idx : w.indices) points.push_back(w.probe.points.at(idx - 1));
    json margins = json::array(), values = json::array();
    for (double m : w.margins) margins.push_back(number(m));
    for (double m : w.values) values.push_back(number(m));
    out["witness"] = {{"probe", w.probe.label},   {"probe_index", w.probe_index}, {"indices", w.indices},
                      {"points", points},         {"margins", margins},           {"values", values},
                      {"detail", w.detail}};
    if (w.probe.has_companions()) {
      json comp = json::array();
      for (std::size_t idx : w.indices) comp.push_back(w.probe.companions.at(idx - 1));
      out["witness"]["companions"] = comp;
    }
  }
  return out;
}

struct Row {
  double x = 0.0;
  std::optional<double> a;
  json values = json::object();

  friend bool operator==(const Row&, const Row&) = default;
};

struct Report {
  std::string schema_version = kSchemaVersion;
  std::string problem_id;
  std::string command;
  json config = json::object();
  std::vector<Row> rows;
  std::vector<json> verdicts;
  std::optional<double> timing_seconds;

  /// Orders rows by (x, then a); rows without a come first.
  void sort_rows() {
    std::stable_sort(rows.begin(), rows.end(), [](const Row& l, const Row& r) {
      if (l.x != r.x) return l.x < r.x;
      return l.a.value_or(-INFINITY) < r.a.value_or(-INFINITY);
    });
  }

  friend bool operator==(const Report&, const Report&) = default;
};

inline json to_json(const Report& r) {
  json rows = json::array();
  for (const Row& row : r.rows) {
    json j{{"x", row.x}};
    if (row.a) j["a"] = *row.a;
    for (const auto& [k, v] : row.values.items()) j[k] = v;
    rows.push_back(std::move(j));
  }
  json out{{"schema_version", r.schema_version},
           {"problem_id", r.problem_id},
           {"command", r.command},
           {"config", r.config},
           {"rows", rows},
           {"verdicts", r.verdicts}};
  if (r.timing_seconds) out["timing"] = {{"seconds", *r.timing_seconds}};
  return out;
}

inline Report from_json(const json& j) {
  Report r;
  r.schema_version = j.at("schema_version").get<std::string>();
  r.problem_id = j.at("problem_id").get<std::string>();
  r.command = j.at("command").get<std::string>();
  r.config = j.at("config");
  for (const json& row : j.at("rows")) {
    Row out;
    out.x = row.at("x").get<double>();
    if (row.contains("a")) out.a = row.at("a").get<double>();
    for (const auto& [k, v] : row.items())
      if (k != "x" && k != "a") out.values[k] = v;
    r.rows.push_back(std::move(out));
  }
  for (const json& v : j.at("verdicts")) r.verdicts.push_back(v);
  if (j.contains("timing")) r.timing_seconds = j.at("timing").at("seconds").get<double>();
  return r;
}

inline std::string dump(const Report& r) { return to_json(r).dump(2) + "\n"; }

// ---- CSV -------------------------------------------------------------------

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.12g}", v);
}

struct SweepRow {
  double x = 0.0;
  ExtremumResult value;
  SetDesc solution;
};

inline constexpr const char* kCsvHeader = "x,v_sharp,solA_lo,solA_hi,status";

/// One line per grid point, CRLF-terminated. Solution columns carry the
/// bounding interval of the eps-arg set.
inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = std::string(kCsvHeader) + "\r\n";
  for (const SweepRow& r : rows) {
    const bool empty = r.solution.is_empty();
    out += fmt::format("{},{},{},{},{}\r\n", csv_field(csv_number(r.x)), csv_field(csv_number(r.value.value.to_double())),
                       empty ? "" : csv_field(csv_number(r.solution.lower())),
                       empty ? "" : csv_field(csv_number(r.solution.upper())),
                       csv_field(std::string(to_string(r.value.status))));
  }
  return out;
}

inline Row sweep_row_json(const SweepRow& r) {
  Row row;
  row.x = r.x;
  row.values = {{"v_sharp", number(r.value.value)},
                {"status", std::string(to_string(r.value.status))},
                {"solution_A", set_json(r.solution)},
                {"grid_points_evaluated", r.value.grid_points_evaluated}};
  return row;
}

}  // namespace minimax::report

#endif  // MINIMAX_REPORT_HPP
