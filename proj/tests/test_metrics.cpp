#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "gplp/metrics.hpp"
#include "oracles.hpp"

using namespace gplp;

TEST(Auroc, SmallCases) {
  EXPECT_EQ(auroc({{0.9, 0.1}, {1, 0}}), 1.0);
  EXPECT_EQ(auroc({{0.5, 0.5}, {1, 0}}), 0.5);
  EXPECT_EQ(auroc({{0.1, 0.9}, {1, 0}}), 0.0);
  try {
    auroc({{0.1, 0.2}, {1, 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingleClass);
  }
}

TEST(Aupr, SmallCases) {
  EXPECT_EQ(aupr({{0.9, 0.2, 0.1}, {1, 0, 0}}), 1.0);
  EXPECT_DOUBLE_EQ(aupr({{0.3, 0.3, 0.3, 0.3}, {1, 0, 0, 0}}), 0.25);
  // ranks: + - + : recall 0.5 at precision 1, recall 1 at precision 2/3
  EXPECT_DOUBLE_EQ(aupr({{0.9, 0.8, 0.7}, {1, 0, 1}}), 0.5 + 0.5 * 2.0 / 3.0);
  EXPECT_THROW(aupr({{0.5}, {0}}), Error);
}

TEST(MetricsOracle, RandomSetsMatchBruteForce) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 200; ++i) {
    auto s = oracle::random_scored_set(rng, 200, i % 2 == 0);
    EXPECT_NEAR(auroc(s), oracle::pairwise_auroc(s), 1e-12);
    EXPECT_NEAR(aupr(s), oracle::enumerated_aupr(s), 1e-12);
  }
}

TEST(MetricsProperties, MonotoneTransformKeepsAuroc) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    auto s = oracle::random_scored_set(rng, 100, i % 2 == 0);
    auto t = s;
    for (auto& v : t.scores) v = std::exp(3 * v) - 7;
    EXPECT_NEAR(auroc(s), auroc(t), 1e-12);
    EXPECT_NEAR(aupr(s), aupr(t), 1e-12);
  }
}

TEST(MetricsProperties, FlipSymmetry) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 50; ++i) {
    auto s = oracle::random_scored_set(rng, 100, i % 2 == 0);
    auto r = dual_class_report(s);
    EXPECT_NEAR(r.auroc_pos, r.auroc_neg, 1e-12);
    ScoredSet f;
    for (std::size_t k = 0; k < s.size(); ++k) {
      f.scores.push_back(1 - s.scores[k]);
      f.labels.push_back(1 - s.labels[k]);
    }
    auto rf = dual_class_report(f);
    EXPECT_NEAR(rf.aupr_pos, r.aupr_neg, 1e-12);
    EXPECT_NEAR(rf.aupr_neg, r.aupr_pos, 1e-12);
  }
}

TEST(DualClassReport, PerfectAndTied) {
  auto r = dual_class_report({{0.9, 0.8, 0.2, 0.1}, {1, 1, 0, 0}});
  for (double v : r.values()) EXPECT_EQ(v, 1.0);
  auto t = dual_class_report({{0.4, 0.4, 0.4, 0.4}, {1, 0, 1, 0}});
  EXPECT_EQ(t.aupr_pos, 0.5);
  EXPECT_EQ(t.aupr_neg, 0.5);
  EXPECT_EQ(t.aupr_harmonic, 0.5);
  EXPECT_EQ(t.precision, 0.0);
  EXPECT_EQ(t.recall, 0.0);
}

TEST(DualClassReport, ThresholdCounts) {
  auto r = dual_class_report({{0.7, 0.6, 0.5, 0.2, 0.1}, {1, 0, 0, 1, 0}});
  EXPECT_DOUBLE_EQ(r.precision, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.recall, 0.5);
}

TEST(Harmonic, Properties) {
  EXPECT_DOUBLE_EQ(harmonic(0.7, 0.7), 0.7);
  EXPECT_EQ(harmonic(0, 0), 0.0);
  for (double x : {0.1, 0.5, 0.9})
    for (double y : {0.2, 0.6, 1.0}) {
      EXPECT_LE(harmonic(x, y), (x + y) / 2 + 1e-15);
      EXPECT_GE(harmonic(x, y), std::min(x, y) - 1e-15);
    }
}

TEST(Curves, EndpointsAndShape) {
  ScoredSet s{{0.9, 0.8, 0.8, 0.3, 0.1}, {1, 0, 1, 0, 1}};
  auto roc = roc_curve(s);
  EXPECT_EQ(roc.front().x, 0.0);
  EXPECT_EQ(roc.front().y, 0.0);
  EXPECT_EQ(roc.back().x, 1.0);
  EXPECT_EQ(roc.back().y, 1.0);
  EXPECT_EQ(roc.size(), 5u);
  auto pr = pr_curve(s);
  EXPECT_EQ(pr.size(), 4u);
  EXPECT_EQ(pr.back().x, 1.0);
  EXPECT_DOUBLE_EQ(pr.back().y, 0.6);
}

TEST(Report, WriteReadRoundTrip) {
  MetricsReport r = MetricsReport::from_values({0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8});
  std::stringstream ss;
  write_report(ss, r);
  EXPECT_EQ(read_report(ss).values(), r.values());
  std::istringstream missing("auroc_pos\t0.5\n");
  EXPECT_THROW(read_report(missing), Error);
  std::istringstream unknown("bogus\t0.5\n");
  EXPECT_THROW(read_report(unknown), ParseError);
}
