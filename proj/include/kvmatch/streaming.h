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
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "kvmatch/cache.h"
#include "kvmatch/engine.h"
#include "kvmatch/executor.h"
#include "kvmatch/graph.h"
#include "kvmatch/optimizer.h"
#include "kvmatch/pattern.h"
#include "kvmatch/store.h"

namespace kvmatch {

struct UpdateOp {
  bool insert;
  VertexId src;
  VertexId dst;
  bool operator==(const UpdateOp&) const = default;
};
using UpdateBatch = std::vector<UpdateOp>;

/** Rejects self-loops, repeated edges, insertions of present edges and deletions of absent ones. */
void validateUpdateBatch(const DirectedGraph& g, const UpdateBatch& batch);
/** Per-vertex delta in/out sets, only for vertices named by the batch. Throws ValidationError on a repeated edge. */
DeltaMap deltaAdjacencySets(const UpdateBatch& batch);
void applyUpdateBatch(DirectedGraph& g, const UpdateBatch& batch);

/** Initial graph ("src dst" lines before the first step header) plus per-step batches. */
struct UpdateStream {
  DirectedGraph initial;
  std::vector<UpdateBatch> steps;
};
UpdateStream parseUpdateStream(std::istream& in);
void writeUpdateStream(std::ostream& out, const UpdateStream& stream);

struct StreamConfig {
  int workers = 1;
  size_t cache_bytes = kUnboundedCache;
  std::optional<size_t> theta;
  ExecOptions exec;
  /** Check the per-emission and per-step result laws; violations are counted in StepResult. */
  bool check_results = true;
  /** Keep every emitted match in StepResult::matches. */
  bool collect = false;
  std::chrono::microseconds store_latency{0};
};

struct StepResult {
  uint64_t step = 0;
  std::vector<uint64_t> appearing_per_plan;
  std::vector<uint64_t> disappearing_per_plan;
  uint64_t appearing = 0;
  uint64_t disappearing = 0;
  std::vector<CollectingSink::Entry> matches;
  size_t num_tasks = 0;
  size_t delta_writes = 0;
  size_t merge_writes = 0;
  ExecCounters exec;
  CommCounters comm;
  uint64_t violations = 0;
  std::vector<std::string> violation_messages;  // first few
  double wall_seconds = 0;

  std::string report() const;
};

/** Continuous enumeration over a dynamic directed graph held in a two-form store. */
class StreamingEngine {
 public:
  /** Plans with the optimizer unless `plans` is given (one per pattern edge, in edge-id order). */
  StreamingEngine(const PatternGraph& p, const DirectedGraph& initial, StreamConfig config,
                  std::optional<std::vector<ExecutionPlan>> plans = std::nullopt, MatchSink* sink = nullptr);

  StepResult processTimeStep(const UpdateBatch& batch);

  const DirectedGraph& snapshot() const { return graph_; }
  const std::vector<ExecutionPlan>& plans() const { return plans_; }
  const std::vector<CostReport>& costs() const { return costs_; }
  const GraphStore& store() const { return store_; }
  uint64_t step() const { return step_; }

 private:
  PatternGraph pattern_;
  DirectedGraph graph_;
  StreamConfig config_;
  MatchSink* sink_;
  MemoryStore store_;
  AdjacencyCache cache_;
  std::vector<ExecutionPlan> plans_;
  std::vector<CostReport> costs_;
  std::vector<std::unique_ptr<CompiledPlan>> compiled_;
  TotalOrder order_;
  uint64_t step_ = 0;
};

}  // namespace kvmatch
