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

#include "kvmatch/optimizer.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

namespace kvmatch {

ErdosRenyiEstimator::ErdosRenyiEstimator(double num_vertices, double num_edges)
    : n_(num_vertices), p_(num_vertices > 1 ? 2.0 * num_edges / (num_vertices * (num_vertices - 1)) : 0.0) {}

double ErdosRenyiEstimator::estimate(const PatternGraph& p, uint32_t mask) const {
  double result = 1.0;
  uint32_t left = mask;
  while (left) {
    uint32_t component = left & (~left + 1);
    for (uint32_t frontier = component; frontier;) {
      uint32_t next = 0;
      for (uint32_t f = frontier; f; f &= f - 1) next |= p.neighborMask(std::countr_zero(f));
      next &= mask & ~component;
      component |= next;
      frontier = next;
    }
    left &= ~component;
    int k = std::popcount(component);
    int l = 0;
    for (uint32_t c = component; c; c &= c - 1) l += std::popcount(p.neighborMask(std::countr_zero(c)) & component);
    l /= 2;
    double falling = 1.0;
    for (int j = 0; j < k; ++j) falling *= std::max(0.0, n_ - j);
    result *= falling * std::pow(p_, l);
  }
  return result;
}

GraphStats GraphStats::of(const UndirectedGraph& g) {
  return {static_cast<double>(std::max<size_t>(1, g.numVertices())), static_cast<double>(g.numEdges()), nullptr};
}

GraphStats GraphStats::of(const DirectedGraph& g) {
  return {static_cast<double>(std::max<size_t>(1, g.numVertices())), static_cast<double>(g.numEdges()), nullptr};
}

double GraphStats::estimate(const PatternGraph& p, uint32_t mask) const {
  if (estimator) return estimator->estimate(p, mask);
  return ErdosRenyiEstimator(num_vertices, num_edges).estimate(p, mask);
}

double estimateMatchCount(const PatternGraph& p, uint32_t mask, const GraphStats& stats) {
  return stats.estimate(p, mask);
}

double estimateMatchCount(const PatternGraph& p, const GraphStats& stats) {
  const int n = p.numVertices();
  return stats.estimate(p, n == 32 ? ~0u : (1u << n) - 1);
}

bool costsEqual(double a, double b) {
  if (a == b) return true;
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  return std::fabs(a - b) <= 1e-9 * std::max(std::fabs(a), std::fabs(b));
}

double estimateCommunicationCost(const PatternGraph& p, const std::vector<PatternVertex>& order,
                                 const GraphStats& stats) {
  const int n = p.numVertices();
  uint32_t remaining = n == 32 ? ~0u : (1u << n) - 1;
  uint32_t placed = 0;
  double cost = 0;
  for (PatternVertex u : order) {
    placed |= 1u << u;
    if (p.neighborMask(u) & remaining) cost += stats.estimate(p, placed);
    remaining &= ~(1u << u);
  }
  return cost;
}

namespace {

template <typename OnInt>
void scanPlan(const PatternGraph& p, const ExecutionPlan& plan, const GraphStats& stats, OnInt&& on_instr) {
  uint32_t placed = 0;
  double cur = 0;
  for (auto& in : plan.instructions) {
    if (in.kind == InstrKind::kIni || in.kind == InstrKind::kEnu || in.kind == InstrKind::kDeltaEnu) {
      const int u = in.target.index - 1;
      if (u >= 0 && u < p.numVertices()) placed |= 1u << u;
      cur = stats.estimate(p, placed);
    } else {
      on_instr(in, cur);
    }
  }
}

}  // namespace

double estimateComputationCost(const PatternGraph& p, const ExecutionPlan& plan, const GraphStats& stats) {
  double cost = 0;
  scanPlan(p, plan, stats, [&](const Instruction& in, double cur) {
    // Filter-only INTs are scans; which C-sets carry them depends on the symmetry conditions, not the order.
    if ((in.kind == InstrKind::kInt && in.operands.size() >= 2) || in.kind == InstrKind::kTrc) cost += cur;
  });
  return cost;
}

double estimatePlanCommunicationCost(const PatternGraph& p, const ExecutionPlan& plan, const GraphStats& stats) {
  double cost = 0;
  scanPlan(p, plan, stats, [&](const Instruction& in, double cur) {
    if (in.kind == InstrKind::kDbq) cost += cur;
  });
  return cost;
}

std::string CostReport::toString() const {
  std::ostringstream out;
  out.precision(17);
  out << "comm_cost=" << comm_cost << '\n' << "comp_cost=" << comp_cost << '\n' << "order=" << orderToString(order) << '\n';
  return out.str();
}

bool syntacticallyEquivalent(const PatternGraph& p, PatternVertex a, PatternVertex b) {
  if (a == b) return true;
  const uint32_t mask = ~((1u << a) | (1u << b));
  return (p.neighborMask(a) & mask) == (p.neighborMask(b) & mask);
}

namespace {

bool containedTyped(const IncrementalPatternGraph& dp, PatternVertex x, PatternVertex y) {
  const PatternGraph& p = dp.base;
  for (int k = 1; k <= p.numEdges(); ++k) {
    const PatternEdge& e = p.edge(k);
    if (e.dst == x && e.src != y) {
      int other = p.edgeId(e.src, y);
      if (other == 0 || dp.type(other) != dp.type(k)) return false;
    }
    if (e.src == x && e.dst != y) {
      int other = p.edgeId(y, e.dst);
      if (other == 0 || dp.type(other) != dp.type(k)) return false;
    }
  }
  return true;
}

uint64_t factorial(int k) {
  uint64_t f = 1;
  for (int j = 2; j <= k; ++j) f *= static_cast<uint64_t>(j);
  return f;
}

class OrderSearch {
 public:
  OrderSearch(const PatternGraph& p, const GraphStats& stats, std::vector<PatternVertex> prefix,
              std::vector<std::vector<bool>> equivalent)
      : p_(p), stats_(stats), prefix_(std::move(prefix)), equivalent_(std::move(equivalent)) {
    for (PatternVertex u : prefix_) exempt_ |= 1u << u;
  }

  void run() {
    const int n = p_.numVertices();
    std::vector<PatternVertex> order;
    search(0, n == 32 ? ~0u : (1u << n) - 1, 0, order, 0.0);
  }

  double best() const { return best_; }
  const std::vector<std::vector<PatternVertex>>& candidates() const { return candidates_; }
  uint64_t explored() const { return explored_; }

 private:
  bool passesDual(PatternVertex u, uint32_t remaining) const {
    if (exempt_ >> u & 1u) return true;
    for (PatternVertex w = 0; w < u; ++w) {
      if ((exempt_ >> w & 1u) || !equivalent_[w][u]) continue;
      if (remaining >> w & 1u) return false;
    }
    return true;
  }

  void search(size_t i, uint32_t remaining, uint32_t placed, std::vector<PatternVertex>& order, double cost) {
    if (remaining == 0) {
      ++explored_;
      if (costsEqual(cost, best_)) {
        candidates_.push_back(order);
      } else if (cost < best_) {
        best_ = cost;
        candidates_.assign(1, order);
      }
      return;
    }
    for (uint32_t r = remaining; r; r &= r - 1) {
      const PatternVertex u = std::countr_zero(r);
      if (i < prefix_.size() && u != prefix_[i]) continue;
      if (i >= prefix_.size() && !passesDual(u, remaining)) continue;
      const uint32_t placed_next = placed | 1u << u;
      double next = cost;
      if (p_.neighborMask(u) & remaining) next += stats_.estimate(p_, placed_next);
      if (next > best_ && !costsEqual(next, best_)) continue;
      order.push_back(u);
      search(i + 1, remaining & ~(1u << u), placed_next, order, next);
      order.pop_back();
    }
  }

  const PatternGraph& p_;
  const GraphStats& stats_;
  std::vector<PatternVertex> prefix_;
  std::vector<std::vector<bool>> equivalent_;
  uint32_t exempt_ = 0;
  double best_ = std::numeric_limits<double>::infinity();
  std::vector<std::vector<PatternVertex>> candidates_;
  uint64_t explored_ = 0;
};

}  // namespace

bool syntacticallyEquivalent(const IncrementalPatternGraph& dp, PatternVertex a, PatternVertex b) {
  return a == b || (containedTyped(dp, a, b) && containedTyped(dp, b, a));
}

PlannedQuery bestExecutionPlan(const PatternGraph& p, const GraphStats& stats, const PipelineOptions& options) {
  const int n = p.numVertices();
  if (n > kMaxSearchVertices) {
    throw CapabilityError("plan search supports at most " + std::to_string(kMaxSearchVertices) + " pattern vertices");
  }
  std::vector<std::vector<bool>> eq(n, std::vector<bool>(n));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) eq[a][b] = syntacticallyEquivalent(p, a, b);
  }
  OrderSearch search(p, stats, {}, std::move(eq));
  search.run();
  PlannedQuery best;
  double best_comp = std::numeric_limits<double>::infinity();
  for (auto& order : search.candidates()) {
    ExecutionPlan plan = optimizePlan(p, order, options);
    double comp = estimateComputationCost(p, plan, stats);
    if (comp < best_comp && !costsEqual(comp, best_comp)) {
      best_comp = comp;
      best.plan = std::move(plan);
      best.cost = {search.best(), comp, order};
    }
  }
  best.search = {search.explored(), factorial(n), search.candidates().size()};
  return best;
}

std::vector<PlannedQuery> bestIncrementalPlans(const PatternGraph& p, const GraphStats& stats) {
  const int n = p.numVertices();
  if (n > kMaxSearchVertices) {
    throw CapabilityError("plan search supports at most " + std::to_string(kMaxSearchVertices) + " pattern vertices");
  }
  std::vector<PlannedQuery> plans;
  for (auto& dp : incrementalPatternGraphs(p)) {
    std::vector<std::vector<bool>> eq(n, std::vector<bool>(n));
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) eq[a][b] = syntacticallyEquivalent(dp, a, b);
    }
    const PatternEdge delta = dp.deltaEdge();
    OrderSearch search(p, stats, {delta.src, delta.dst}, std::move(eq));
    search.run();
    PlannedQuery best;
    double best_comp = std::numeric_limits<double>::infinity();
    for (auto& order : search.candidates()) {
      ExecutionPlan plan = optimizeIncrementalPlan(dp, order);
      double comp = estimateComputationCost(p, plan, stats);
      if (comp < best_comp && !costsEqual(comp, best_comp)) {
        best_comp = comp;
        best.plan = std::move(plan);
        best.cost = {search.best(), comp, order};
      }
    }
    best.search = {search.explored(), factorial(n - 2), search.candidates().size()};
    plans.push_back(std::move(best));
  }
  return plans;
}

double exhaustiveMinCommunicationCost(const PatternGraph& p, const GraphStats& stats,
                                      const std::vector<PatternVertex>& fixed_prefix) {
  std::vector<PatternVertex> rest;
  for (PatternVertex u = 0; u < p.numVertices(); ++u) {
    if (std::find(fixed_prefix.begin(), fixed_prefix.end(), u) == fixed_prefix.end()) rest.push_back(u);
  }
  double best = std::numeric_limits<double>::infinity();
  do {
    std::vector<PatternVertex> order = fixed_prefix;
    order.insert(order.end(), rest.begin(), rest.end());
    best = std::min(best, estimateCommunicationCost(p, order, stats));
  } while (std::next_permutation(rest.begin(), rest.end()));
  return best;
}

}  // namespace kvmatch
