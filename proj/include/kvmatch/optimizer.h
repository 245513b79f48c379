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

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kvmatch/compiler.h"
#include "kvmatch/graph.h"
#include "kvmatch/pattern.h"
#include "kvmatch/plan.h"

namespace kvmatch {

/** Pluggable cardinality model. Partial pattern graphs are the subgraphs of P induced by a vertex mask. */
class CardinalityEstimator {
 public:
  virtual ~CardinalityEstimator() = default;
  /** Expected number of matches of P[mask], ignoring edge directions. */
  virtual double estimate(const PatternGraph& p, uint32_t mask) const = 0;
};

/**
 * Independent-edge random graph model: each connected component with k vertices and l edges contributes
 * N(N-1)...(N-k+1) * p^l with p = 2M / (N(N-1)); components multiply.
 */
class ErdosRenyiEstimator : public CardinalityEstimator {
 public:
  ErdosRenyiEstimator(double num_vertices, double num_edges);
  double estimate(const PatternGraph& p, uint32_t mask) const override;

 private:
  double n_;
  double p_;
};

struct GraphStats {
  double num_vertices = 1;
  double num_edges = 0;
  /** Null selects the Erdos-Renyi model over (num_vertices, num_edges). */
  std::shared_ptr<const CardinalityEstimator> estimator;

  static GraphStats of(const UndirectedGraph& g);
  static GraphStats of(const DirectedGraph& g);
  double estimate(const PatternGraph& p, uint32_t mask) const;
};

double estimateMatchCount(const PatternGraph& p, uint32_t mask, const GraphStats& stats);
/** Whole-pattern estimate. */
double estimateMatchCount(const PatternGraph& p, const GraphStats& stats);

/** Sum over order positions whose vertex has a later neighbor of the prefix-graph estimate (one DBQ per match). */
double estimateCommunicationCost(const PatternGraph& p, const std::vector<PatternVertex>& order,
                                 const GraphStats& stats);
/**
 * Scans the plan: every TRC and multi-operand INT adds the current partial-match estimate; INI and each ENU extend
 * the partial graph.
 */
double estimateComputationCost(const PatternGraph& p, const ExecutionPlan& plan, const GraphStats& stats);
/** Same scan as above but summing DBQ executions. */
double estimatePlanCommunicationCost(const PatternGraph& p, const ExecutionPlan& plan, const GraphStats& stats);

struct CostReport {
  double comm_cost = 0;
  double comp_cost = 0;
  std::vector<PatternVertex> order;
  std::string toString() const;
};

struct SearchStats {
  uint64_t orders_explored = 0;  // complete orders that survived both prunings
  uint64_t total_orders = 0;     // admissible orders (n!, or (n-2)! with a fixed prefix)
  uint64_t candidates = 0;       // orders tied at the best communication cost
  double fraction() const { return total_orders ? static_cast<double>(orders_explored) / total_orders : 0.0; }
};

struct PlannedQuery {
  ExecutionPlan plan;
  CostReport cost;
  SearchStats search;
};

/** Syntactic equivalence: Gamma(a) - {b} == Gamma(b) - {a}. */
bool syntacticallyEquivalent(const PatternGraph& p, PatternVertex a, PatternVertex b);
/** Typed variant for incremental pattern graphs: directions and edge types must agree both ways. */
bool syntacticallyEquivalent(const IncrementalPatternGraph& dp, PatternVertex a, PatternVertex b);

constexpr int kMaxSearchVertices = 10;

/** Order search with dual and cost-based pruning; comm-cost ties are broken by computation cost. */
PlannedQuery bestExecutionPlan(const PatternGraph& p, const GraphStats& stats, const PipelineOptions& options = {});
/** One plan per incremental pattern graph, in edge-id order. */
std::vector<PlannedQuery> bestIncrementalPlans(const PatternGraph& p, const GraphStats& stats);

/** Minimum communication cost over every admissible order, without pruning. */
double exhaustiveMinCommunicationCost(const PatternGraph& p, const GraphStats& stats,
                                      const std::vector<PatternVertex>& fixed_prefix = {});

/** Relative-tolerance comparison used for cost ties. */
bool costsEqual(double a, double b);

}  // namespace kvmatch
