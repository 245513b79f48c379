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

#include "kvmatch/streaming.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <mutex>
#include <set>
#include <sstream>

namespace kvmatch {

namespace {

std::string arc(VertexId a, VertexId b) { return "(" + std::to_string(a) + "," + std::to_string(b) + ")"; }

}  // namespace

void validateUpdateBatch(const DirectedGraph& g, const UpdateBatch& batch) {
  std::vector<std::string> problems;
  std::set<std::pair<VertexId, VertexId>> seen;
  for (const auto& op : batch) {
    if (op.src == op.dst) {
      problems.push_back("self-loop " + arc(op.src, op.dst));
    } else if (!seen.emplace(op.src, op.dst).second) {
      problems.push_back("edge " + arc(op.src, op.dst) + " appears more than once");
    } else if (op.insert && g.hasEdge(op.src, op.dst)) {
      problems.push_back("insertion of existing edge " + arc(op.src, op.dst));
    } else if (!op.insert && !g.hasEdge(op.src, op.dst)) {
      problems.push_back("deletion of absent edge " + arc(op.src, op.dst));
    }
  }
  if (problems.empty()) return;
  const std::string what = "update batch rejected: " + problems.front();
  throw ValidationError(what, std::move(problems));
}

DeltaMap deltaAdjacencySets(const UpdateBatch& batch) {
  std::set<std::pair<VertexId, VertexId>> seen;
  DeltaMap map;
  for (const auto& op : batch) {
    if (!seen.emplace(op.src, op.dst).second) {
      throw ValidationError("edge " + arc(op.src, op.dst) + " appears more than once in the batch");
    }
    map[op.src].out.push_back({op.insert, op.dst});
    map[op.dst].in.push_back({op.insert, op.src});
  }
  auto byVertex = [](const DeltaEntry& a, const DeltaEntry& b) { return a.vertex < b.vertex; };
  for (auto& [v, d] : map) {
    std::sort(d.in.begin(), d.in.end(), byVertex);
    std::sort(d.out.begin(), d.out.end(), byVertex);
  }
  return map;
}

void applyUpdateBatch(DirectedGraph& g, const UpdateBatch& batch) {
  for (const auto& op : batch) {
    g.addVertex(op.src);
    g.addVertex(op.dst);
    bool changed = op.insert ? g.addEdge(op.src, op.dst) : g.removeEdge(op.src, op.dst);
    if (!changed) throw ConsistencyError("update " + arc(op.src, op.dst) + " does not match the graph");
  }
}

namespace {

VertexId parseVertex(std::string_view tok, size_t line) {
  VertexId v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || v == kInvalidVertex) {
    throw ParseError("bad vertex id '" + std::string(tok) + "'", line);
  }
  return v;
}

}  // namespace

UpdateStream parseUpdateStream(std::istream& in) {
  UpdateStream stream;
  std::string line;
  size_t lineno = 0;
  bool in_steps = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::vector<std::string> toks;
    for (std::string t; ss >> t;) toks.push_back(t);
    if (toks.empty()) continue;
    if (toks[0] == "##") {
      if (toks.size() != 3 || toks[1] != "step") throw ParseError("expected '## step <t>'", lineno);
      stream.steps.emplace_back();
      in_steps = true;
      continue;
    }
    if (toks[0][0] == '#') continue;
    if (!in_steps) {
      if (toks.size() != 2) throw ParseError("initial edge needs 'src dst'", lineno);
      VertexId a = parseVertex(toks[0], lineno), b = parseVertex(toks[1], lineno);
      if (a == b) throw ParseError("self-loop in initial graph", lineno);
      stream.initial.addVertex(a);
      stream.initial.addVertex(b);
      stream.initial.addEdge(a, b);
      continue;
    }
    if (toks.size() != 3 || (toks[0] != "+" && toks[0] != "-")) throw ParseError("expected '+ src dst' or '- src dst'", lineno);
    stream.steps.back().push_back({toks[0] == "+", parseVertex(toks[1], lineno), parseVertex(toks[2], lineno)});
  }
  return stream;
}

void writeUpdateStream(std::ostream& out, const UpdateStream& stream) {
  for (const auto& [a, b] : stream.initial.edgeList()) out << a << ' ' << b << '\n';
  for (size_t t = 0; t < stream.steps.size(); ++t) {
    out << "## step " << t + 1 << '\n';
    for (const auto& op : stream.steps[t]) out << (op.insert ? '+' : '-') << ' ' << op.src << ' ' << op.dst << '\n';
  }
}

std::string StepResult::report() const {
  std::ostringstream os;
  os << "step=" << step << "\nappearing=" << appearing << "\ndisappearing=" << disappearing;
  for (size_t i = 0; i < appearing_per_plan.size(); ++i) {
    os << "\nappearing_" << i + 1 << "=" << appearing_per_plan[i] << "\ndisappearing_" << i + 1 << "="
       << disappearing_per_plan[i];
  }
  os << "\ntasks=" << num_tasks << "\ndelta_writes=" << delta_writes << "\nmerge_writes=" << merge_writes << "\n"
     << exec.toString() << comm.toString() << "cache_hit_rate=" << comm.hitRate() << "\nviolations=" << violations
     << "\nwall_seconds=" << wall_seconds << "\n";
  return os.str();
}

namespace {

/** Counts per (plan, sign), optionally keeps entries, forwards to the user sink. */
class StepSink : public MatchSink {
 public:
  StepSink(size_t plans, bool keep, MatchSink* forward) : counts_(2 * plans), keep_(keep), forward_(forward) {}

  void accept(const MatchRecord& r) override {
    counts_[2 * static_cast<size_t>(r.plan) + (r.sign > 0 ? 0 : 1)].fetch_add(1, std::memory_order_relaxed);
    if (keep_) {
      std::lock_guard lock(mu_);
      entries_.push_back({std::vector<VertexId>(r.f.begin(), r.f.end()), r.plan, r.sign});
    }
    if (forward_) forward_->accept(r);
  }

  uint64_t count(size_t plan, bool appearing) const { return counts_[2 * plan + (appearing ? 0 : 1)].load(); }
  std::vector<CollectingSink::Entry>& entries() { return entries_; }

 private:
  std::vector<std::atomic<uint64_t>> counts_;
  bool keep_;
  MatchSink* forward_;
  std::mutex mu_;
  std::vector<CollectingSink::Entry> entries_;
};

std::vector<VertexId> canonicalKey(const PatternGraph& p, const std::vector<VertexId>& f) {
  std::vector<VertexId> vs(f.begin(), f.end());
  std::sort(vs.begin(), vs.end());
  std::vector<std::pair<VertexId, VertexId>> arcs;
  for (const auto& e : p.edges()) arcs.emplace_back(f[e.src], f[e.dst]);
  std::sort(arcs.begin(), arcs.end());
  vs.push_back(kInvalidVertex);
  for (const auto& [a, b] : arcs) {
    vs.push_back(a);
    vs.push_back(b);
  }
  return vs;
}

}  // namespace

StreamingEngine::StreamingEngine(const PatternGraph& p, const DirectedGraph& initial, StreamConfig config,
                                 std::optional<std::vector<ExecutionPlan>> plans, MatchSink* sink)
    : pattern_(p),
      graph_(initial),
      config_(config),
      sink_(sink),
      store_(config.store_latency),
      cache_(config.cache_bytes) {
  if (!p.directed()) throw ValidationError("streaming mode needs a directed pattern");
  if (config_.workers < 1) throw ValidationError("worker count must be at least 1");
  if (plans) {
    if (static_cast<int>(plans->size()) != p.numEdges()) {
      throw ValidationError("expected one incremental plan per pattern edge");
    }
    plans_ = std::move(*plans);
  } else {
    for (auto& q : bestIncrementalPlans(p, GraphStats::of(initial))) {
      plans_.push_back(std::move(q.plan));
      costs_.push_back(std::move(q.cost));
    }
  }
  for (size_t i = 0; i < plans_.size(); ++i) {
    requireValidPlan(plans_[i], &pattern_);
    if (plans_[i].variant != PlanVariant::kIncremental || plans_[i].delta_edge != static_cast<int>(i) + 1) {
      throw ValidationError("plan " + std::to_string(i + 1) + " is not the incremental plan of edge " +
                            std::to_string(i + 1));
    }
    compiled_.push_back(std::make_unique<CompiledPlan>(plans_[i], pattern_));
  }
  storeSnapshot(graph_, store_);
}

StepResult StreamingEngine::processTimeStep(const UpdateBatch& batch) {
  const auto t0 = std::chrono::steady_clock::now();
  validateUpdateBatch(graph_, batch);
  const DeltaMap deltas = deltaAdjacencySets(batch);
  StepResult result;
  result.step = ++step_;
  result.delta_writes = applyDeltaSets(store_, deltas);

  std::vector<Task> tasks;
  for (const auto& [v, d] : deltas) {
    if (d.out.empty()) continue;
    std::vector<VertexId> ids;
    ids.reserve(d.out.size());
    for (const auto& e : d.out) ids.push_back(e.vertex);
    appendSplitTasks(v, ids, config_.theta, tasks);
  }
  result.num_tasks = tasks.size();

  std::set<VertexId> universe_set;
  for (const auto& [v, _] : graph_.adjacency()) universe_set.insert(v);
  for (const auto& [v, _] : deltas) universe_set.insert(v);
  const std::vector<VertexId> universe(universe_set.begin(), universe_set.end());

  const size_t m = compiled_.size();
  StepSink sink(m, config_.collect || config_.check_results, sink_);
  CommMetrics metrics;
  ExecContext ctx;
  ctx.store = &store_;
  ctx.cache = &cache_;
  ctx.metrics = &metrics;
  ctx.order = &order_;
  ctx.universe = universe;
  ctx.streaming = true;
  ctx.step = step_;
  ctx.sink = &sink;
  ctx.options = config_.exec;

  const int workers = config_.workers;
  std::vector<std::vector<std::unique_ptr<Interpreter>>> interpreters(static_cast<size_t>(workers));
  for (auto& per_worker : interpreters) {
    for (size_t i = 0; i < m; ++i) per_worker.push_back(std::make_unique<Interpreter>(*compiled_[i], ctx, static_cast<int>(i)));
  }
  std::vector<ExecCounters> counters(static_cast<size_t>(workers));
  runParallel(tasks.size(), workers, [&](int w, size_t k) {
    for (auto& interp : interpreters[w]) interp->run(tasks[k], counters[w]);
  });

  result.merge_writes = mergePostStep(store_, deltas);
  const DirectedGraph before = config_.check_results ? graph_ : DirectedGraph();
  applyUpdateBatch(graph_, batch);

  for (const auto& c : counters) result.exec += c;
  result.comm = metrics.snapshot();
  for (size_t i = 0; i < m; ++i) {
    result.appearing_per_plan.push_back(sink.count(i, true));
    result.disappearing_per_plan.push_back(sink.count(i, false));
    result.appearing += result.appearing_per_plan.back();
    result.disappearing += result.disappearing_per_plan.back();
  }

  if (config_.check_results) {
    auto violation = [&](std::string msg) {
      ++result.violations;
      if (result.violation_messages.size() < 10) result.violation_messages.push_back(std::move(msg));
    };
    std::set<std::vector<VertexId>> seen;
    for (const auto& e : sink.entries()) {
      const PatternEdge pe = pattern_.edge(e.plan + 1);
      const VertexId a = e.f[pe.src], b = e.f[pe.dst];
      const bool ok = e.sign > 0 ? (graph_.hasEdge(a, b) && !before.hasEdge(a, b))
                                 : (before.hasEdge(a, b) && !graph_.hasEdge(a, b));
      if (!ok) {
        violation("plan " + std::to_string(e.plan + 1) + " reported a match whose delta edge " + arc(a, b) +
                  " was not " + (e.sign > 0 ? "inserted" : "deleted"));
      }
      if (!seen.insert(canonicalKey(pattern_, e.f)).second) {
        violation("subgraph reported twice in step " + std::to_string(step_) + " (plan " +
                  std::to_string(e.plan + 1) + ")");
      }
    }
  }
  if (config_.collect) result.matches = std::move(sink.entries());
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace kvmatch
