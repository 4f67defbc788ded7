#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace shg;
using namespace shg::testing;

TEST(Oracle, MetricsOnSmallRandomStores) {
  auto r = run_metrics_oracle(200, 11, 6, 4);
  for (const auto& f : r.failures) ADD_FAILURE() << f;
  EXPECT_GT(r.checks, 200u);
}

TEST(Oracle, MetricsOnLargerRandomStores) {
  auto r = run_metrics_oracle(40, 12);
  for (const auto& f : r.failures) ADD_FAILURE() << f;
}

TEST(Oracle, NaiveMatcherAgreesOnPrintedExamples) {
  NaiveMatcher naive;
  auto check = [&](const char* e, const char* p) {
    auto edge = parse_notation(e);
    auto pat = parse_pattern(p);
    std::set<std::string> got;
    for (const auto& b : match(edge, pat)) got.insert(b.str());
    EXPECT_EQ(naive.run(edge, pat), got) << e << " vs " << p;
    return !got.empty();
  };
  EXPECT_TRUE(check("(is/P.sc (the/M sky/C) blue/C)", "(is/P.sc SUBJ PROP/C)"));
  EXPECT_TRUE(check("(is/P.cs blue/C (the/M sky/C))", "(is/P.{sc} SUBJ PROP/C)"));
  EXPECT_TRUE(check("(is/P.xsc today/C (the/M sky/C) blue/C)", "(is/P.{sc} SUBJ PROP/C ...)"));
  EXPECT_TRUE(check("(play/P.o football/C)", "(PRED/P.-sp X...)"));
  EXPECT_FALSE(check("(plays/P.so alice/C football/C)", "(PRED/P.-sp X...)"));
  EXPECT_TRUE(check("(was/P.pa it/C (by/M him/C))", "(PRED/P.{[sp]} X ...)"));
  EXPECT_TRUE(check("(is/P.scx a/C b/C (in/T c/C))", "(REL/P.{[sp][cora]x} ARG1/C ARG2 ARG3...)"));
  EXPECT_FALSE(check("(and/J (likes/P mary/C meat/C) (hates/P mary/C potatoes/C))",
                     "(and/J (likes/P X...) (hates/P X...))"));
}

TEST(Oracle, MatcherOnRandomPairs) {
  auto r = run_matcher_oracle(300, 21);
  for (const auto& f : r.failures) ADD_FAILURE() << f;
  EXPECT_GT(r.matching, r.pairs / 10);
  EXPECT_LT(r.matching, r.pairs * 9 / 10);
}
