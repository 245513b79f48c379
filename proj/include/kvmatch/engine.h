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

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "kvmatch/cache.h"
#include "kvmatch/compiler.h"
#include "kvmatch/executor.h"
#include "kvmatch/graph.h"
#include "kvmatch/optimizer.h"
#include "kvmatch/pattern.h"
#include "kvmatch/store.h"

namespace kvmatch {

constexpr size_t kUnboundedCache = static_cast<size_t>(-1);

struct EngineConfig {
  int workers = 1;
  size_t cache_bytes = kUnboundedCache;
  /** Split threshold; nullopt disables splitting. */
  std::optional<size_t> theta;
  /** Fixed matching order; otherwise the optimizer picks one. */
  std::optional<std::vector<PatternVertex>> order;
  PipelineOptions pipeline;
  ExecOptions exec;
  std::chrono::microseconds store_latency{0};
};

struct RunSummary {
  ExecutionPlan plan;
  std::optional<CostReport> cost;
  uint64_t matches = 0;
  size_t num_tasks = 0;
  ExecCounters exec;
  CommCounters comm;
  std::vector<WorkerStats> workers;
  double wall_seconds = 0;

  /** Flat key=value report. */
  std::string report() const;
};

/** Plan for p: the configured order through the pipeline, or the optimizer's best plan. */
ExecutionPlan planBatchQuery(const PatternGraph& p, const UndirectedGraph& g, const EngineConfig& config,
                             std::optional<CostReport>* cost = nullptr);

/** Runs `plan` over a store that already holds g. */
RunSummary executeBatchPlan(const ExecutionPlan& plan, const PatternGraph& p, const UndirectedGraph& g,
                            const GraphStore& store, AdjacencyCache* cache, const EngineConfig& config,
                            MatchSink* sink = nullptr);

/** Stores g in a fresh memory store, plans, and runs every task. */
RunSummary enumerate(const PatternGraph& p, const UndirectedGraph& g, const EngineConfig& config,
                     MatchSink* sink = nullptr);

}  // namespace kvmatch
