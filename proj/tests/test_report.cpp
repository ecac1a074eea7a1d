#include <gtest/gtest.h>

#include "dpc/report.hpp"

using namespace dpc;

namespace {

Report sample() {
  Report r;
  r.command = {"dpc", "acceptance", "--seed", "7"};
  r.seed = 7;
  r.records = {Json{{"suite", "kernel"}, {"pass", true}}, Json{{"value", 3}}};
  r.pass = false;
  r.seconds = 1.5;
  return r;
}

std::size_t parse_error_line(const std::string& text) {
  try {
    parse_report(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(Report, NdjsonRoundTrip) {
  auto r = sample();
  auto text = to_ndjson(r);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
  EXPECT_EQ(parse_report(text), r);
  Report empty;
  EXPECT_EQ(parse_report(to_ndjson(empty)), empty);
}

TEST(Report, MalformedInputsRejected) {
  const std::string good = to_ndjson(sample());
  const std::string summary = good.substr(good.rfind('\n', good.size() - 2) + 1);
  EXPECT_EQ(parse_error_line("{not json\n"), 1u);
  EXPECT_EQ(parse_error_line(R"({"schema":"other","kind":"summary"})" "\n"), 1u);
  EXPECT_EQ(parse_error_line(R"({"schema":"dpc-report/1","kind":"banana"})" "\n"), 1u);
  EXPECT_EQ(parse_error_line(R"({"schema":"dpc-report/1","kind":"record","data":1})" "\n"), 1u);
  EXPECT_EQ(parse_error_line(good + summary), 4u);
  EXPECT_EQ(parse_error_line(summary), 1u);  // count says 2, none seen
  EXPECT_EQ(parse_error_line(R"({"schema":"dpc-report/1","kind":"summary","command":[],"seed":0,"records":0,"pass":true})" "\n"),
            1u);
  EXPECT_EQ(parse_error_line(R"({"schema":"dpc-report/1","kind":"summary","command":"x","seed":0,"records":0,"pass":true,"seconds":0})" "\n"),
            1u);
  EXPECT_EQ(parse_error_line("[1,2]\n"), 1u);
}

TEST(Report, SuiteRecords) {
  SuiteReport s;
  s.suite = "bandwidth";
  s.checks = {{"a", 3, 0, "ok"}, {"b", 2, 1, "first failure"}};
  auto recs = to_records(s);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0]["suite"], "bandwidth");
  EXPECT_EQ(recs[0]["pass"], true);
  EXPECT_EQ(recs[1]["pass"], false);
  EXPECT_EQ(recs[1]["detail"], "first failure");
  EXPECT_EQ(bound_value(kUnbounded), "unbounded");
  EXPECT_EQ(bound_value(4), 4);
  Envelope e;
  e.c = kUnbounded;
  EXPECT_EQ(to_json(e)["c"], "unbounded");
}
