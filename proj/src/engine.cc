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

#include "kvmatch/engine.h"

#include <memory>
#include <numeric>
#include <sstream>

namespace kvmatch {

std::string RunSummary::report() const {
  std::ostringstream os;
  os << "matches=" << matches << "\ntasks=" << num_tasks << "\n" << exec.toString() << comm.toString()
     << "cache_hit_rate=" << comm.hitRate() << "\n";
  if (cost) os << cost->toString();
  os << "workers=" << workers.size() << "\nworker_imbalance=" << imbalanceRatio(workers)
     << "\nwall_seconds=" << wall_seconds << "\n";
  return os.str();
}

ExecutionPlan planBatchQuery(const PatternGraph& p, const UndirectedGraph& g, const EngineConfig& config,
                             std::optional<CostReport>* cost) {
  const GraphStats stats = GraphStats::of(g);
  if (config.order) {
    ExecutionPlan plan = optimizePlan(p, *config.order, config.pipeline);
    if (cost) {
      *cost = CostReport{estimateCommunicationCost(p, *config.order, stats), estimateComputationCost(p, plan, stats),
                         *config.order};
    }
    return plan;
  }
  PlannedQuery q = bestExecutionPlan(p, stats, config.pipeline);
  if (cost) *cost = q.cost;
  return std::move(q.plan);
}

RunSummary executeBatchPlan(const ExecutionPlan& plan, const PatternGraph& p, const UndirectedGraph& g,
                            const GraphStore& store, AdjacencyCache* cache, const EngineConfig& config,
                            MatchSink* sink) {
  requireValidPlan(plan, &p);
  const auto t0 = std::chrono::steady_clock::now();
  RunSummary summary;
  summary.plan = plan;
  const CompiledPlan compiled(plan, p);
  const TotalOrder order = TotalOrder::degreeBased(g);
  std::vector<VertexId> universe(g.numVertices());
  std::iota(universe.begin(), universe.end(), 0);

  CommMetrics metrics;
  ExecContext ctx;
  ctx.store = &store;
  ctx.cache = cache;
  ctx.metrics = &metrics;
  ctx.order = &order;
  ctx.universe = universe;
  ctx.sink = sink;
  ctx.options = config.exec;

  const std::vector<Task> tasks = generateTasks(g, p, plan.order, config.theta);
  summary.num_tasks = tasks.size();
  const int workers = std::max(1, config.workers);
  std::vector<std::unique_ptr<Interpreter>> interpreters;
  std::vector<ExecCounters> counters(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) interpreters.push_back(std::make_unique<Interpreter>(compiled, ctx));
  summary.workers = runParallel(tasks.size(), workers,
                                [&](int w, size_t i) { interpreters[w]->run(tasks[i], counters[w]); });
  for (const auto& c : counters) summary.exec += c;
  summary.matches = summary.exec.results;
  summary.comm = metrics.snapshot();
  summary.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return summary;
}

RunSummary enumerate(const PatternGraph& p, const UndirectedGraph& g, const EngineConfig& config, MatchSink* sink) {
  MemoryStore store(config.store_latency);
  storeBatchGraph(g, store);
  AdjacencyCache cache(config.cache_bytes);
  std::optional<CostReport> cost;
  ExecutionPlan plan = planBatchQuery(p, g, config, &cost);
  RunSummary summary = executeBatchPlan(plan, p, g, store, &cache, config, sink);
  summary.cost = cost;
  return summary;
}

}  // namespace kvmatch
