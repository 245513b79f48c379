// Copyright 2026 The kvmatch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "kvmatch/generators.h"
#include "kvmatch/optimizer.h"
#include "test_util.h"

namespace kvmatch {
namespace {

TEST(EstimateTest, SingleEdgeIsTwiceM) {
  PatternGraph e = parsePattern(std::string("2 1 undirected\n1 2\n"));
  GraphStats stats{1e6, 5e6, nullptr};
  EXPECT_NEAR(estimateMatchCount(e, stats), 2 * 5e6, 1e-6);
}

TEST(EstimateTest, SingleVertexIsN) {
  PatternGraph e = parsePattern(std::string("2 1 undirected\n1 2\n"));
  GraphStats stats{1000, 3000, nullptr};
  EXPECT_DOUBLE_EQ(estimateMatchCount(e, 1u, stats), 1000);
}

TEST(EstimateTest, DisconnectedComponentsMultiply) {
  PatternGraph path = parsePattern(std::string("3 2 undirected\n1 2\n2 3\n"));
  GraphStats stats{100, 400, nullptr};
  // {u1,u3} has no edge between them: two 1-vertex components.
  EXPECT_DOUBLE_EQ(estimateMatchCount(path, 0b101u, stats), 100.0 * 100.0);
}

TEST(EstimateTest, DoublingMScalesByTwoToTheL) {
  for (const auto& p : allConnectedPatterns(4)) {
    GraphStats a{5000, 20000, nullptr}, b{5000, 40000, nullptr};
    const double ratio = estimateMatchCount(p, b) / estimateMatchCount(p, a);
    EXPECT_NEAR(ratio, std::pow(2.0, p.numEdges()), 1e-9 * ratio);
  }
}

TEST(EstimateTest, CustomEstimatorIsUsed) {
  struct Constant : CardinalityEstimator {
    double estimate(const PatternGraph&, uint32_t) const override { return 7; }
  };
  PatternGraph e = parsePattern(std::string("2 1 undirected\n1 2\n"));
  GraphStats stats{10, 10, std::make_shared<Constant>()};
  EXPECT_EQ(estimateMatchCount(e, stats), 7);
}

TEST(CostTest, CommCostCountsVerticesWithLaterNeighbours) {
  PatternGraph path = parsePattern(std::string("3 2 undirected\n1 2\n2 3\n"));
  GraphStats stats{100, 400, nullptr};
  // u2 first: DBQ for u2 only, estimate of the 1-vertex graph.
  EXPECT_DOUBLE_EQ(estimateCommunicationCost(path, {1, 0, 2}, stats), 100);
  // u1,u2,u3: DBQ for u1 (N) and u2 (edge estimate).
  EXPECT_DOUBLE_EQ(estimateCommunicationCost(path, {0, 1, 2}, stats),
                   100 + estimateMatchCount(path, 0b011u, stats));
}

TEST(CostTest, PlanCommCostAgreesWithOrderCost) {
  GraphStats stats{2000, 9000, nullptr};
  for (const auto& p : allConnectedPatterns(4)) {
    std::vector<PatternVertex> order(4);
    std::iota(order.begin(), order.end(), 0);
    do {
      ExecutionPlan plan = optimizePlan(p, order);
      EXPECT_TRUE(costsEqual(estimatePlanCommunicationCost(p, plan, stats), estimateCommunicationCost(p, order, stats)));
    } while (std::next_permutation(order.begin(), order.end()));
  }
}

TEST(CostTest, CostsEqualTolerance) {
  EXPECT_TRUE(costsEqual(1.0, 1.0 + 1e-12));
  EXPECT_FALSE(costsEqual(1.0, 1.0 + 1e-6));
  EXPECT_FALSE(costsEqual(1.0, std::numeric_limits<double>::infinity()));
}

TEST(SyntacticEquivalenceTest, Examples) {
  PatternGraph fan = testing::loadPatternFixture("fan.pattern");
  EXPECT_FALSE(syntacticallyEquivalent(fan, 1, 5));
  PatternGraph tri = parsePattern(std::string("3 3 undirected\n1 2\n2 3\n1 3\n"));
  EXPECT_TRUE(syntacticallyEquivalent(tri, 0, 2));
  PatternGraph path = parsePattern(std::string("3 2 undirected\n1 2\n2 3\n"));
  EXPECT_TRUE(syntacticallyEquivalent(path, 0, 2));
  EXPECT_FALSE(syntacticallyEquivalent(path, 0, 1));
}

TEST(SearchTest, PrunedEqualsExhaustiveBatch) {
  const std::vector<GraphStats> stats_list = {{60, 240, nullptr}, {1e6, 5e6, nullptr}, {500, 60000, nullptr}};
  for (int n = 1; n <= 5; ++n) {
    for (const auto& p : allConnectedPatterns(n)) {
      for (const auto& stats : stats_list) {
        PlannedQuery q = bestExecutionPlan(p, stats);
        const double exhaustive = exhaustiveMinCommunicationCost(p, stats);
        EXPECT_TRUE(costsEqual(q.cost.comm_cost, exhaustive)) << dumpPattern(p);
        EXPECT_TRUE(costsEqual(estimateCommunicationCost(p, q.cost.order, stats), q.cost.comm_cost));
        EXPECT_LE(q.search.orders_explored, q.search.total_orders);
        EXPECT_GE(q.search.candidates, 1u);
      }
    }
  }
}

TEST(SearchTest, PrunedEqualsExhaustiveIncremental) {
  const std::vector<std::string> patterns = {"2 1 directed\n1 2\n", "3 2 directed\n1 2\n2 3\n",
                                             "3 3 directed\n1 2\n2 3\n3 1\n",
                                             "4 5 directed\n1 2\n1 3\n2 4\n3 4\n2 3\n", "3 2 directed\n1 3\n2 3\n"};
  GraphStats stats{1e5, 8e5, nullptr};
  for (const auto& text : patterns) {
    PatternGraph p = parsePattern(text);
    auto plans = bestIncrementalPlans(p, stats);
    ASSERT_EQ(static_cast<int>(plans.size()), p.numEdges());
    for (size_t i = 0; i < plans.size(); ++i) {
      const PatternEdge e = p.edge(static_cast<int>(i) + 1);
      EXPECT_EQ(plans[i].cost.order[0], e.src);
      EXPECT_EQ(plans[i].cost.order[1], e.dst);
      EXPECT_EQ(plans[i].plan.delta_edge, static_cast<int>(i) + 1);
      EXPECT_TRUE(costsEqual(plans[i].cost.comm_cost, exhaustiveMinCommunicationCost(p, stats, {e.src, e.dst})));
    }
  }
}

TEST(SearchTest, PruningSkipsOrders) {
  GraphStats stats{1e6, 5e6, nullptr};
  PlannedQuery q = bestExecutionPlan(testing::loadPatternFixture("fan.pattern"), stats);
  EXPECT_EQ(q.search.total_orders, 720u);
  EXPECT_LT(q.search.fraction(), 1.0);
}

TEST(SearchTest, DualOrdersHaveEqualCosts) {
  GraphStats stats{3000, 20000, nullptr};
  for (int n = 3; n <= 5; ++n) {
    for (const auto& p : allConnectedPatterns(n)) {
      std::vector<PatternVertex> order(n);
      std::iota(order.begin(), order.end(), 0);
      do {
        for (int a = 0; a < n; ++a) {
          for (int b = a + 1; b < n; ++b) {
            if (!syntacticallyEquivalent(p, a, b)) continue;
            std::vector<PatternVertex> dual = order;
            for (auto& u : dual) u = u == a ? b : u == b ? a : u;
            EXPECT_TRUE(costsEqual(estimateCommunicationCost(p, order, stats),
                                   estimateCommunicationCost(p, dual, stats)));
            EXPECT_TRUE(costsEqual(estimateComputationCost(p, optimizePlan(p, order), stats),
                                   estimateComputationCost(p, optimizePlan(p, dual), stats)));
          }
        }
      } while (std::next_permutation(order.begin(), order.end()));
    }
  }
}

TEST(SearchTest, TooManyVerticesRejected) {
  std::string text = "11 10 undirected\n";
  for (int k = 2; k <= 11; ++k) text += "1 " + std::to_string(k) + "\n";
  EXPECT_THROW(bestExecutionPlan(parsePattern(text), GraphStats{100, 100, nullptr}), CapabilityError);
}

TEST(CostReportTest, KeyValueText) {
  CostReport r{12.5, 3, {0, 2, 1}};
  EXPECT_EQ(r.toString(), "comm_cost=12.5\ncomp_cost=3\norder=u1,u3,u2\n");
}

}  // namespace
}  // namespace kvmatch
