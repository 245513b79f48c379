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
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "kvmatch/cache.h"
#include "kvmatch/graph.h"
#include "kvmatch/pattern.h"
#include "kvmatch/plan.h"
#include "kvmatch/store.h"

namespace kvmatch {

/** Work unit: one start vertex, optionally restricted to an id interval of the second order vertex's bindings. */
struct Task {
  VertexId start = 0;
  VertexId slice_lo = 0;
  VertexId slice_hi = kInvalidVertex;  // exclusive

  bool isSplit() const { return slice_lo != 0 || slice_hi != kInvalidVertex; }
  bool inSlice(VertexId v) const { return v >= slice_lo && v < slice_hi; }
};

/**
 * One task per vertex of g. With a threshold, a start whose set to slice (Γ(v) when the first two order
 * vertices are adjacent, V(G) otherwise) has at least `theta` elements is split into ceil(size/theta)
 * near-equal contiguous slices.
 */
std::vector<Task> generateTasks(const UndirectedGraph& g, const PatternGraph& p, const std::vector<PatternVertex>& order,
                                std::optional<size_t> theta);
/** Splits `start` over the sorted id list `set`. */
void appendSplitTasks(VertexId start, std::span<const VertexId> set, std::optional<size_t> theta,
                      std::vector<Task>& out);

struct ExecCounters {
  uint64_t dbq = 0;
  uint64_t int_execs = 0;
  /** Pairwise set intersections computed: operands - 1 per INT, one per TRC miss. */
  uint64_t intersections = 0;
  uint64_t trc_hits = 0;
  uint64_t trc_misses = 0;
  uint64_t ins_tests = 0;
  uint64_t enu_iterations = 0;
  uint64_t res_firings = 0;
  /** Reported matches (expanded size for compressed plans when expansion is on). */
  uint64_t results = 0;

  ExecCounters& operator+=(const ExecCounters& o);
  std::string toString() const;
};

struct MatchRecord {
  std::span<const VertexId> f;  // indexed by pattern vertex
  int plan = 0;
  int sign = 0;  // +1 appearing, -1 disappearing, 0 batch
};

/** Compressed code: bindings of the cover vertices plus one candidate set per remaining vertex. */
struct CompressedRecord {
  std::span<const VertexId> f;                   // kInvalidVertex outside the cover
  std::span<const std::span<const VertexId>> sets;  // empty span for cover vertices
  int plan = 0;
};

/** Result consumer; implementations must tolerate concurrent calls. */
class MatchSink {
 public:
  virtual ~MatchSink() = default;
  virtual void accept(const MatchRecord& record) = 0;
  virtual void acceptCompressed(const CompressedRecord& record);
};

/** Keeps every match in memory. */
class CollectingSink : public MatchSink {
 public:
  struct Entry {
    std::vector<VertexId> f;
    int plan;
    int sign;
  };
  void accept(const MatchRecord& record) override;
  std::vector<Entry> take();
  size_t size() const;

 private:
  mutable std::mutex mu_;
  std::vector<Entry> entries_;
};

/** Writes "v1 v2 ... vn" per match (prefixed by +/- in streaming) and "c1 .. ck [..] [..]" per compressed code. */
class TextSink : public MatchSink {
 public:
  using Translate = std::function<VertexId(VertexId)>;
  explicit TextSink(std::ostream& out, Translate translate = nullptr) : out_(out), translate_(std::move(translate)) {}
  void accept(const MatchRecord& record) override;
  void acceptCompressed(const CompressedRecord& record) override;

 private:
  VertexId map(VertexId v) const { return translate_ ? translate_(v) : v; }
  std::mutex mu_;
  std::ostream& out_;
  Translate translate_;
};

struct ExecOptions {
  /** Backtrack as soon as an INT/TRC yields an empty set. */
  bool early_exit = true;
  /** Recompute every TRC answer directly and throw on mismatch. */
  bool shadow_check_trc = false;
  size_t trc_cap_bytes = size_t{64} << 20;
  /** Compressed plans: expand codes into matches (count/emit) instead of reporting codes. */
  bool expand_compressed = true;
};

/** Read-only state shared by the interpreters of a run. */
struct ExecContext {
  const GraphStore* store = nullptr;
  AdjacencyCache* cache = nullptr;
  CommMetrics* metrics = nullptr;
  const TotalOrder* order = nullptr;  // null: id order
  std::span<const VertexId> universe;   // V(G), sorted
  bool streaming = false;
  uint64_t step = 0;
  MatchSink* sink = nullptr;
  ExecOptions options;
};

/** Plan lowered to slot indices. */
class CompiledPlan {
 public:
  struct Operand {
    bool is_set;
    int index;  // slot or pattern vertex
  };
  struct Op {
    InstrKind kind;
    int target = -1;            // slot, or pattern vertex for INI/ENU/DeltaENU
    std::vector<int> sets;      // operand slots
    bool universe = false;
    int f1 = -1, f2 = -1;       // pattern vertices read by DBQ/INS/TRC
    std::vector<std::pair<FilterKind, int>> filters;
    DbqOp op = DbqOp::kNone;
    EdgeType type = EdgeType::kEither;
    Direction dir = Direction::kOut;
    std::vector<Operand> report;  // RES
  };

  CompiledPlan(ExecutionPlan plan, const PatternGraph& p);

  const ExecutionPlan& plan() const { return plan_; }
  const std::vector<Op>& ops() const { return ops_; }
  int numSlots() const { return num_slots_; }
  int numVertices() const { return n_; }
  PatternVertex startVertex() const { return start_; }
  /** Second vertex of the matching order, or -1. */
  PatternVertex sliceVertex() const { return slice_vertex_; }
  bool compressed() const { return plan_.variant == PlanVariant::kVcbc; }
  /** Slot of a set variable, or -1. */
  int slotOf(const Var& v) const;
  /** Ordered pairs (a, b) with u_a < u_b among vertices outside the cover. */
  const std::vector<std::pair<int, int>>& expansionConstraints() const { return expansion_constraints_; }

 private:
  ExecutionPlan plan_;
  std::vector<Op> ops_;
  std::vector<std::pair<Var, int>> slots_;
  int num_slots_ = 0;
  int n_ = 0;
  PatternVertex start_ = 0;
  PatternVertex slice_vertex_ = -1;
  std::vector<std::pair<int, int>> expansion_constraints_;
};

/** Executes tasks of one plan. Not thread-safe; use one per worker. */
class Interpreter {
 public:
  Interpreter(const CompiledPlan& plan, const ExecContext& ctx, int plan_index = 0);

  void run(const Task& task, ExecCounters& counters);

  /** Called before each ENU/DeltaENU starts iterating, with the instruction index. */
  std::function<void(const Interpreter&, size_t pc)> trace;
  std::span<const VertexId> setValue(const Var& v) const;
  std::span<const VertexId> mapping() const { return f_; }

 private:
  struct Slot {
    std::span<const VertexId> ids;
    std::span<const uint8_t> flags;
    std::vector<VertexId> buf;
    std::vector<uint8_t> flag_buf;
    std::shared_ptr<const void> keep;
  };
  using TrcEntry = std::shared_ptr<const std::vector<VertexId>>;

  void exec(size_t pc);
  bool accepts(const CompiledPlan::Op& op, VertexId x) const;
  bool before(VertexId a, VertexId b) const { return ctx_.order ? ctx_.order->less(a, b) : a < b; }
  void evalInt(const CompiledPlan::Op& op, Slot& dst);
  void evalTrc(const CompiledPlan::Op& op, Slot& dst);
  void evalDbq(const CompiledPlan::Op& op, Slot& dst);
  void report(const CompiledPlan::Op& op);
  void expand(size_t depth);

  const CompiledPlan& plan_;
  const ExecContext& ctx_;
  int plan_index_;
  Task task_;
  ExecCounters* counters_ = nullptr;
  std::vector<VertexId> f_;
  std::vector<Slot> slots_;
  std::vector<VertexId> scratch_;
  DbqOp cur_op_ = DbqOp::kPlus;
  std::unordered_map<VertexId, TrcEntry> trc_;
  size_t trc_bytes_ = 0;
  // compressed expansion state
  std::vector<std::span<const VertexId>> expand_sets_;
  std::vector<int> expand_vertices_;
};

struct WorkerStats {
  uint64_t tasks = 0;
  double cpu_seconds = 0;
};

/**
 * Runs fn(worker, task) for task in [0, num_tasks) on `workers` threads. Tasks are dealt round-robin into
 * per-worker deques; idle workers steal from the back of others. The first exception is rethrown.
 */
std::vector<WorkerStats> runParallel(size_t num_tasks, int workers, const std::function<void(int, size_t)>& fn);

/** max / mean of per-worker CPU time (1 when idle). */
double imbalanceRatio(const std::vector<WorkerStats>& stats);

}  // namespace kvmatch
