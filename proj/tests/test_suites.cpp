#include <gtest/gtest.h>

#include <set>

#include "dpc/suites.hpp"

using namespace dpc;

TEST(Suites, RegistryCoversEveryCriterionOnce) {
  const auto& reg = suite_registry();
  ASSERT_EQ(reg.size(), 10u);
  std::set<std::string> names;
  for (std::size_t i = 0; i < reg.size(); ++i) {
    EXPECT_EQ(reg[i].criterion, static_cast<int>(i + 1));
    EXPECT_TRUE(names.insert(reg[i].name).second) << reg[i].name;
    EXPECT_EQ(&find_suite(reg[i].name), &reg[i]);
  }
  EXPECT_THROW(find_suite("nope"), UnknownSuite);
}

TEST(Suites, TallyKeepsFirstFailure) {
  suite::Tally t("x");
  t.note("all good");
  t.expect(true, "unused");
  t.expect(false, "first");
  t.expect(false, "second");
  auto rec = t.done();
  EXPECT_EQ(rec.cases, 3u);
  EXPECT_EQ(rec.failures, 2u);
  EXPECT_EQ(rec.detail, "first");
  EXPECT_FALSE(rec.pass());
  EXPECT_FALSE(CheckRecord{}.pass());
  EXPECT_FALSE(SuiteReport{}.pass());
}

TEST(Suites, TimeLimit) {
  EXPECT_TRUE(suite::time_limit("t", 1.0, 2.0).pass());
  EXPECT_FALSE(suite::time_limit("t", 2.0, 2.0).pass());
}

class FastSuite : public ::testing::TestWithParam<const char*> {};

TEST_P(FastSuite, Passes) {
  auto rep = run_suite(GetParam());
  EXPECT_EQ(rep.suite, GetParam());
  for (const auto& c : rep.checks) EXPECT_TRUE(c.pass()) << c.name << ": " << c.detail;
  EXPECT_TRUE(rep.pass());
}

INSTANTIATE_TEST_SUITE_P(Registry, FastSuite,
                         ::testing::Values("gaifman-negation", "indistinguishability", "bandwidth", "kernel"));
