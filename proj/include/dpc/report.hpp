#pragma once
// JSON reporting; needs the vendored json.hpp on the include path.
#include <json.hpp>

#include "suites.hpp"

namespace dpc {

inline constexpr const char* kReportSchema = "dpc-report/1";

using Json = nlohmann::ordered_json;

// NDJSON: one object per record, then one summary object.
struct Report {
  std::vector<std::string> command;
  std::uint64_t seed = 0;
  std::vector<Json> records;
  bool pass = true;
  double seconds = 0;

  friend bool operator==(const Report&, const Report&) = default;
};

inline std::string to_ndjson(const Report& r) {
  std::string out;
  for (const auto& rec : r.records) {
    Json line = {{"schema", kReportSchema}, {"kind", "record"}, {"data", rec}};
    out += line.dump() + "\n";
  }
  Json summary = {{"schema", kReportSchema}, {"kind", "summary"}, {"command", r.command}, {"seed", r.seed},
                  {"records", r.records.size()}, {"pass", r.pass}, {"seconds", r.seconds}};
  out += summary.dump() + "\n";
  return out;
}

inline Report parse_report(std::string_view text) {
  Report r;
  bool have_summary = false;
  std::size_t lineno = 0;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (line.empty()) continue;
    if (have_summary) throw ParseError(lineno, "record after the summary");
    try {
      Json j = Json::parse(line);
      if (!j.is_object() || j.value("schema", "") != kReportSchema) throw ParseError(lineno, "not a dpc-report/1 object");
      const auto kind = j.value("kind", "");
      if (kind == "record") {
        r.records.push_back(j.at("data"));
      } else if (kind == "summary") {
        r.command = j.at("command").get<std::vector<std::string>>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.pass = j.at("pass").get<bool>();
        r.seconds = j.at("seconds").get<double>();
        if (j.at("records").get<std::size_t>() != r.records.size()) throw ParseError(lineno, "record count mismatch");
        have_summary = true;
      } else {
        throw ParseError(lineno, "unknown kind '" + kind + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(lineno, e.what());
    }
  }
  if (!have_summary) throw ParseError(lineno, "missing summary");
  return r;
}

// ------------------------------------------------------------------ payloads

inline Json bound_value(std::size_t x) { return x == kUnbounded ? Json("unbounded") : Json(x); }

inline Json to_json(const RunResult& r) {
  Json outputs = Json::array();
  for (auto [id, out] : r.outputs) outputs.push_back({{"id", id}, {"accept", out}});
  Json congestion = Json::array();
  for (const auto& [e, c] : r.edge_congestion) congestion.push_back({e.first, e.second, c});
  return {{"verdict", r.verdict},
          {"rounds_used", r.rounds_used},
          {"max_message_bits", r.max_message_bits},
          {"bandwidth", r.bandwidth},
          {"total_messages", r.total_messages},
          {"outputs", outputs},
          {"decision_round", r.decision_round},
          {"edge_congestion", congestion},
          {"local_steps", r.local_steps}};
}

inline Json to_json(const ReductionBounds& b) {
  return {{"nodes", b.nodes},         {"host_nodes", b.host_nodes}, {"size_exponent", b.size_exponent},
          {"radius", b.radius},       {"congestion", bound_value(b.congestion)}, {"path_load", b.path_load},
          {"rounds", b.rounds},       {"produced_k", b.produced_k}};
}

inline Json to_json(const Envelope& e) {
  return {{"s", e.s}, {"r", e.r}, {"c", bound_value(e.c)}, {"t", e.t}, {"p", e.p}};
}

inline Json to_json(const CheckRecord& c) {
  return {{"check", c.name}, {"cases", c.cases}, {"failures", c.failures}, {"pass", c.pass()}, {"detail", c.detail}};
}

inline std::vector<Json> to_records(const SuiteReport& s) {
  std::vector<Json> out;
  for (const auto& c : s.checks) {
    auto j = to_json(c);
    j["suite"] = s.suite;
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace dpc
