#include <gtest/gtest.h>

#include "bergman/io.hpp"
#include "bergman/verify.hpp"

using namespace bergman;

namespace {

const SuiteReport& full_suite() {
  static const SuiteReport report = run_examples();
  return report;
}

}  // namespace

TEST(Suite, CaseListIsSortedAndComplete) {
  std::vector<std::string> names;
  for (const auto& c : builtin_cases()) names.push_back(c.name);
  const std::vector<std::string> expect = {"decay-circle", "ex41-berezin-identity", "ex41-k2-trace",
                                           "ex42-alpha0",  "ex42-delta0",           "ex42-norm",
                                           "ex42-trace-11", "ex43-trace",           "rank-one"};
  EXPECT_EQ(names, expect);
  for (const auto& c : builtin_cases()) EXPECT_GT(c.tolerance, 0.0) << c.name;
}

TEST(Suite, EveryDisplayedFormulaAppearsInExactlyOneCase) {
  const std::vector<std::string> formulas = {
      "k/((k−1)(2k−3))",
      "α!(α+1)!, if α = β",
      "2(1+2|z0|²)/(1−|z0|²)⁴",
      "√(1+2|z0|²)/(√2(1−|z0|²)²)",
      "(−1)^α (α+1)! z̄0^α/(1−|z0|²)^{2+α}",
      "−4r0/(1−r0²)³",
      "α!(α+1)!|z|^{2α}/(1−|z|²)^α · B_α((1−|w|²)^{2k−α})(z)",
  };
  const auto cases = builtin_cases();
  for (const auto& f : formulas) {
    int hits = 0;
    for (const auto& c : cases) hits += c.anchor == f;
    EXPECT_EQ(hits, 1) << f;
  }
  for (const auto& c : cases) {
    if (!c.anchor.empty()) {
      EXPECT_NE(std::find(formulas.begin(), formulas.end(), c.anchor), formulas.end()) << c.name;
    }
  }
}

TEST(Suite, AllCasesPass) {
  const auto& r = full_suite();
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.cases.size(), 9u);
  for (const auto& c : r.cases) {
    EXPECT_TRUE(c.pass) << c.name << ": " << c.error;
    EXPECT_TRUE(c.error.empty()) << c.name;
    for (const auto& k : c.checks) EXPECT_TRUE(k.pass) << c.name << " / " << k.label;
  }
}

TEST(Suite, FrozenExamples) {
  const auto& r = full_suite();
  auto find = [&](const std::string& name) -> const CaseResult& {
    for (const auto& c : r.cases)
      if (c.name == name) return c;
    throw std::runtime_error("missing case " + name);
  };
  for (const auto& k : find("ex43-trace").checks)
    for (const auto& rv : k.routes) EXPECT_NEAR(std::abs(rv.value - k.reference), 0.0, 1e-5) << k.label << rv.route;
  bool saw = false;
  for (const auto& k : find("ex43-trace").checks)
    if (k.label.find("0.5") != std::string::npos) {
      saw = true;
      EXPECT_NEAR(k.reference.real(), -4.740741, 1e-6);
    }
  EXPECT_TRUE(saw);

  const auto& ex41 = find("ex41-k2-trace");
  ASSERT_EQ(ex41.checks.size(), 1u);
  EXPECT_NEAR(ex41.checks[0].reference.real(), 4.0, 1e-12);
  ASSERT_TRUE(ex41.checks[0].paper_reference_value);
  EXPECT_EQ(*ex41.checks[0].paper_reference_value, complex(2.0));
  ASSERT_TRUE(ex41.checks[0].ratio_to_reference);
  EXPECT_NEAR(*ex41.checks[0].ratio_to_reference, 2.0, 1e-8);
  EXPECT_EQ(ex41.provenance, Provenance::derived_oracle);

  const auto& delta = find("ex42-delta0");
  bool saw_11 = false;
  for (const auto& k : delta.checks)
    if (std::abs(k.reference - complex(2.0)) < 1e-15) saw_11 = true;
  EXPECT_TRUE(saw_11);
  EXPECT_EQ(find("ex42-norm").tolerance, 1e-10);
}

TEST(Suite, Deterministic) {
  const auto a = suite_json(run_examples("ex4[23]")).dump();
  const auto b = suite_json(run_examples("ex4[23]")).dump();
  EXPECT_EQ(a, b);
}

TEST(Suite, Filter) {
  const auto r = run_examples("^ex42-");
  std::vector<std::string> names;
  for (const auto& c : r.cases) names.push_back(c.name);
  EXPECT_EQ(names, (std::vector<std::string>{"ex42-alpha0", "ex42-delta0", "ex42-norm", "ex42-trace-11"}));
  EXPECT_TRUE(run_examples("no-such-case").cases.empty());
  EXPECT_THROW(run_examples("("), contract_violation);
}
