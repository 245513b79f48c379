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

#include "kvmatch/executor.h"

#include <time.h>

#include <algorithm>
#include <atomic>
#include <deque>
#include <exception>
#include <numeric>
#include <sstream>
#include <thread>

#include "kvmatch/set_ops.h"

namespace kvmatch {

void appendSplitTasks(VertexId start, std::span<const VertexId> set, std::optional<size_t> theta,
                      std::vector<Task>& out) {
  if (theta && *theta == 0) throw ValidationError("split threshold must be at least 1");
  if (!theta || set.empty() || set.size() < *theta) {
    out.push_back({start});
    return;
  }
  const size_t k = (set.size() + *theta - 1) / *theta;
  const size_t base = set.size() / k, rem = set.size() % k;
  size_t pos = 0;
  for (size_t i = 0; i < k; ++i) {
    size_t len = base + (i < rem ? 1 : 0);
    Task t{start};
    t.slice_lo = i == 0 ? 0 : set[pos];
    t.slice_hi = i + 1 == k ? kInvalidVertex : set[pos + len];
    out.push_back(t);
    pos += len;
  }
}

std::vector<Task> generateTasks(const UndirectedGraph& g, const PatternGraph& p, const std::vector<PatternVertex>& order,
                                std::optional<size_t> theta) {
  if (theta && *theta == 0) throw ValidationError("split threshold must be at least 1");
  std::vector<Task> tasks;
  tasks.reserve(g.numVertices());
  const bool single = order.size() < 2;
  const bool adjacent = !single && p.adjacent(order[0], order[1]);
  std::vector<VertexId> universe;
  if (!single && !adjacent) {
    universe.resize(g.numVertices());
    std::iota(universe.begin(), universe.end(), 0);
  }
  for (VertexId v = 0; v < g.numVertices(); ++v) {
    if (single) {
      tasks.push_back({v});
    } else {
      appendSplitTasks(v, adjacent ? g.neighbors(v) : std::span<const VertexId>(universe), theta, tasks);
    }
  }
  return tasks;
}

ExecCounters& ExecCounters::operator+=(const ExecCounters& o) {
  dbq += o.dbq;
  int_execs += o.int_execs;
  intersections += o.intersections;
  trc_hits += o.trc_hits;
  trc_misses += o.trc_misses;
  ins_tests += o.ins_tests;
  enu_iterations += o.enu_iterations;
  res_firings += o.res_firings;
  results += o.results;
  return *this;
}

std::string ExecCounters::toString() const {
  std::ostringstream os;
  os << "dbq_executed=" << dbq << "\nint_executed=" << int_execs << "\nintersections=" << intersections
     << "\ntrc_hits=" << trc_hits << "\ntrc_misses=" << trc_misses << "\nins_tests=" << ins_tests
     << "\nenu_iterations=" << enu_iterations << "\nres_firings=" << res_firings << "\nresults=" << results << "\n";
  return os.str();
}

void MatchSink::acceptCompressed(const CompressedRecord&) {
  throw CapabilityError("this sink does not accept compressed codes");
}

void CollectingSink::accept(const MatchRecord& record) {
  std::lock_guard lock(mu_);
  entries_.push_back({std::vector<VertexId>(record.f.begin(), record.f.end()), record.plan, record.sign});
}

std::vector<CollectingSink::Entry> CollectingSink::take() {
  std::lock_guard lock(mu_);
  return std::exchange(entries_, {});
}

size_t CollectingSink::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

void TextSink::accept(const MatchRecord& record) {
  std::ostringstream line;
  if (record.sign != 0) line << (record.sign > 0 ? "+ " : "- ");
  for (size_t i = 0; i < record.f.size(); ++i) line << (i ? " " : "") << map(record.f[i]);
  line << '\n';
  std::lock_guard lock(mu_);
  out_ << line.str();
}

void TextSink::acceptCompressed(const CompressedRecord& record) {
  std::ostringstream line;
  bool first = true;
  for (VertexId v : record.f) {
    if (v == kInvalidVertex) continue;
    line << (first ? "" : " ") << map(v);
    first = false;
  }
  for (const auto& set : record.sets) {
    if (set.empty()) continue;
    line << " [";
    for (size_t i = 0; i < set.size(); ++i) line << (i ? " " : "") << map(set[i]);
    line << "]";
  }
  line << '\n';
  std::lock_guard lock(mu_);
  out_ << line.str();
}

CompiledPlan::CompiledPlan(ExecutionPlan plan, const PatternGraph& p) : plan_(std::move(plan)) {
  n_ = plan_.numPatternVertices();
  slice_vertex_ = n_ >= 2 ? plan_.order[1] : -1;
  auto slot = [&](const Var& v) {
    for (const auto& [var, idx] : slots_) {
      if (var == v) return idx;
    }
    slots_.emplace_back(v, num_slots_);
    return num_slots_++;
  };
  for (const auto& in : plan_.instructions) {
    Op op;
    op.kind = in.kind;
    op.op = in.op;
    switch (in.kind) {
      case InstrKind::kIni:
        op.target = in.target.index - 1;
        start_ = op.target;
        break;
      case InstrKind::kDbq:
        op.target = slot(in.target);
        op.f1 = in.operands.at(0).index - 1;
        op.type = in.target.type;
        op.dir = in.target.dir;
        break;
      case InstrKind::kInt:
        op.target = slot(in.target);
        for (const auto& v : in.operands) {
          if (v.kind == VarKind::kUniverse) {
            op.universe = true;
          } else {
            op.sets.push_back(slot(v));
          }
        }
        for (const auto& flt : in.filters) op.filters.emplace_back(flt.kind, flt.subject - 1);
        break;
      case InstrKind::kEnu:
      case InstrKind::kDeltaEnu:
        op.target = in.target.index - 1;
        if (in.operands.at(0).kind == VarKind::kUniverse) throw ValidationError("Foreach over V(G) is not supported");
        op.sets.push_back(slot(in.operands[0]));
        break;
      case InstrKind::kTrc:
        op.target = slot(in.target);
        op.f1 = in.operands.at(0).index - 1;
        op.f2 = in.operands.at(1).index - 1;
        op.sets = {slot(in.operands.at(2)), slot(in.operands.at(3))};
        break;
      case InstrKind::kIns:
        op.f1 = in.operands.at(0).index - 1;
        op.sets.push_back(slot(in.operands.at(1)));
        break;
      case InstrKind::kRes:
        for (const auto& v : in.operands) {
          if (v.kind == VarKind::kMapped) {
            op.report.push_back({false, v.index - 1});
          } else {
            op.report.push_back({true, slot(v)});
          }
        }
        break;
    }
    ops_.push_back(std::move(op));
  }
  if (compressed()) {
    const auto& res = ops_.back();
    std::vector<int> outside;
    for (size_t u = 0; u < res.report.size(); ++u) {
      if (res.report[u].is_set) outside.push_back(static_cast<int>(u));
    }
    const PartialOrder& po = p.partialOrder();
    for (int a : outside) {
      for (int b : outside) {
        if (a != b && po.before(a, b)) expansion_constraints_.emplace_back(a, b);
      }
    }
  }
}

int CompiledPlan::slotOf(const Var& v) const {
  for (const auto& [var, idx] : slots_) {
    if (var == v) return idx;
  }
  return -1;
}

Interpreter::Interpreter(const CompiledPlan& plan, const ExecContext& ctx, int plan_index)
    : plan_(plan), ctx_(ctx), plan_index_(plan_index) {
  f_.assign(plan_.numVertices(), kInvalidVertex);
  slots_.resize(plan_.numSlots());
}

std::span<const VertexId> Interpreter::setValue(const Var& v) const {
  int s = plan_.slotOf(v);
  if (s < 0) throw CapabilityError("plan has no variable " + v.name());
  return slots_[s].ids;
}

void Interpreter::run(const Task& task, ExecCounters& counters) {
  task_ = task;
  counters_ = &counters;
  std::fill(f_.begin(), f_.end(), kInvalidVertex);
  trc_.clear();
  trc_bytes_ = 0;
  cur_op_ = DbqOp::kPlus;
  exec(0);
  for (auto& s : slots_) {
    s.keep.reset();
    s.ids = {};
    s.flags = {};
  }
  trc_.clear();
}

bool Interpreter::accepts(const CompiledPlan::Op& op, VertexId x) const {
  for (const auto& [kind, s] : op.filters) {
    const VertexId y = f_[s];
    switch (kind) {
      case FilterKind::kGreater:
        if (!before(y, x)) return false;
        break;
      case FilterKind::kLess:
        if (!before(x, y)) return false;
        break;
      case FilterKind::kNotEqual:
        if (x == y) return false;
        break;
    }
  }
  return true;
}

void Interpreter::evalDbq(const CompiledPlan::Op& op, Slot& dst) {
  ++counters_->dbq;
  const VertexId key = f_[op.f1];
  dst.flags = {};
  if (!ctx_.streaming) {
    auto list = cachedGet(key, ctx_.cache, *ctx_.store, *ctx_.metrics);
    dst.ids = *list;
    dst.keep = std::move(list);
    return;
  }
  const DbqOp eff = op.op == DbqOp::kRuntime ? cur_op_ : op.op;
  auto r = cachedGet(key, op.type, op.dir, eff, ctx_.step, ctx_.cache, *ctx_.store, *ctx_.metrics);
  dst.ids = *r.ids;
  // Raw delta sets alias ids and flags into the same cache entry, so one keepalive covers both.
  if (r.inserted) dst.flags = *r.inserted;
  dst.keep = std::move(r.ids);
}

void Interpreter::evalInt(const CompiledPlan::Op& op, Slot& dst) {
  ++counters_->int_execs;
  dst.keep.reset();
  dst.flags = {};
  if (op.sets.empty()) {
    dst.buf.clear();
    for (VertexId x : ctx_.universe) {
      if (accepts(op, x)) dst.buf.push_back(x);
    }
    dst.ids = dst.buf;
    return;
  }
  if (op.sets.size() == 1) {
    const Slot& src = slots_[op.sets[0]];
    if (op.filters.empty()) {
      dst.ids = src.ids;
      dst.flags = src.flags;
      return;
    }
    dst.buf.clear();
    dst.flag_buf.clear();
    const bool flagged = !src.flags.empty();
    for (size_t i = 0; i < src.ids.size(); ++i) {
      if (!accepts(op, src.ids[i])) continue;
      dst.buf.push_back(src.ids[i]);
      if (flagged) dst.flag_buf.push_back(src.flags[i]);
    }
    dst.ids = dst.buf;
    if (flagged) dst.flags = dst.flag_buf;
    return;
  }
  std::vector<std::span<const VertexId>> in;
  in.reserve(op.sets.size());
  for (int s : op.sets) in.push_back(slots_[s].ids);
  std::sort(in.begin(), in.end(), [](auto a, auto b) { return a.size() < b.size(); });
  counters_->intersections += in.size() - 1;
  intersectSorted(in[0], in[1], dst.buf);
  for (size_t k = 2; k < in.size() && !dst.buf.empty(); ++k) {
    intersectSorted(dst.buf, in[k], scratch_);
    std::swap(dst.buf, scratch_);
  }
  if (!op.filters.empty()) std::erase_if(dst.buf, [&](VertexId x) { return !accepts(op, x); });
  dst.ids = dst.buf;
}

void Interpreter::evalTrc(const CompiledPlan::Op& op, Slot& dst) {
  const bool first_is_start = op.f1 == plan_.startVertex();
  const VertexId key = f_[first_is_start ? op.f2 : op.f1];
  const auto a = slots_[op.sets[0]].ids, b = slots_[op.sets[1]].ids;
  dst.flags = {};
  if (auto it = trc_.find(key); it != trc_.end()) {
    ++counters_->trc_hits;
    if (ctx_.options.shadow_check_trc) {
      intersectSorted(a, b, scratch_);
      if (!std::equal(scratch_.begin(), scratch_.end(), it->second->begin(), it->second->end())) {
        throw ConsistencyError("triangle cache answer differs from direct intersection for key " +
                               std::to_string(key));
      }
    }
    dst.ids = *it->second;
    dst.keep = it->second;
    return;
  }
  ++counters_->trc_misses;
  ++counters_->intersections;
  auto result = std::make_shared<std::vector<VertexId>>();
  intersectSorted(a, b, *result);
  const size_t bytes = batchEntryBytes(result->size());
  if (trc_bytes_ + bytes <= ctx_.options.trc_cap_bytes) {
    trc_bytes_ += bytes;
    trc_.emplace(key, result);
  }
  dst.ids = *result;
  dst.keep = std::move(result);
}

void Interpreter::exec(size_t pc) {
  const auto& ops = plan_.ops();
  const bool early_exit = ctx_.options.early_exit;
  for (; pc < ops.size(); ++pc) {
    const auto& op = ops[pc];
    switch (op.kind) {
      case InstrKind::kIni:
        f_[op.target] = task_.start;
        break;
      case InstrKind::kDbq:
        evalDbq(op, slots_[op.target]);
        break;
      case InstrKind::kInt:
        evalInt(op, slots_[op.target]);
        if (early_exit && slots_[op.target].ids.empty()) return;
        break;
      case InstrKind::kTrc:
        evalTrc(op, slots_[op.target]);
        if (early_exit && slots_[op.target].ids.empty()) return;
        break;
      case InstrKind::kIns:
        ++counters_->ins_tests;
        if (!containsSorted(slots_[op.sets[0]].ids, f_[op.f1])) return;
        break;
      case InstrKind::kEnu:
      case InstrKind::kDeltaEnu: {
        if (trace) trace(*this, pc);
        const Slot& src = slots_[op.sets[0]];
        const auto ids = src.ids;
        const auto flags = src.flags;
        if (op.kind == InstrKind::kDeltaEnu && flags.size() != ids.size()) {
          throw ConsistencyError("Delta-Foreach operand carries no insertion flags");
        }
        size_t lo = 0, hi = ids.size();
        if (op.target == plan_.sliceVertex() && task_.isSplit()) {
          lo = static_cast<size_t>(std::lower_bound(ids.begin(), ids.end(), task_.slice_lo) - ids.begin());
          hi = static_cast<size_t>(std::lower_bound(ids.begin(), ids.end(), task_.slice_hi) - ids.begin());
        }
        for (size_t i = lo; i < hi; ++i) {
          ++counters_->enu_iterations;
          if (op.kind == InstrKind::kDeltaEnu) cur_op_ = flags[i] ? DbqOp::kPlus : DbqOp::kMinus;
          f_[op.target] = ids[i];
          exec(pc + 1);
        }
        f_[op.target] = kInvalidVertex;
        return;
      }
      case InstrKind::kRes:
        report(op);
        return;
    }
  }
}

void Interpreter::report(const CompiledPlan::Op& op) {
  const int sign = ctx_.streaming ? (cur_op_ == DbqOp::kPlus ? 1 : -1) : 0;
  if (!plan_.compressed()) {
    ++counters_->res_firings;
    ++counters_->results;
    if (ctx_.sink) ctx_.sink->accept({f_, plan_index_, sign});
    return;
  }
  expand_sets_.assign(f_.size(), {});
  expand_vertices_.clear();
  for (size_t u = 0; u < op.report.size(); ++u) {
    if (!op.report[u].is_set) continue;
    auto set = slots_[op.report[u].index].ids;
    if (static_cast<int>(u) == plan_.sliceVertex() && task_.isSplit()) {
      auto lo = std::lower_bound(set.begin(), set.end(), task_.slice_lo);
      auto hi = std::lower_bound(set.begin(), set.end(), task_.slice_hi);
      set = set.subspan(static_cast<size_t>(lo - set.begin()), static_cast<size_t>(hi - lo));
    }
    if (set.empty()) return;
    expand_sets_[u] = set;
    expand_vertices_.push_back(static_cast<int>(u));
  }
  ++counters_->res_firings;
  if (!ctx_.options.expand_compressed) {
    ++counters_->results;
    if (ctx_.sink) ctx_.sink->acceptCompressed({f_, expand_sets_, plan_index_});
    return;
  }
  expand(0);
}

void Interpreter::expand(size_t depth) {
  if (depth == expand_vertices_.size()) {
    ++counters_->results;
    if (ctx_.sink) ctx_.sink->accept({f_, plan_index_, 0});
    return;
  }
  const int u = expand_vertices_[depth];
  for (VertexId x : expand_sets_[u]) {
    bool ok = true;
    for (size_t d = 0; d < depth && ok; ++d) ok = f_[expand_vertices_[d]] != x;
    for (const auto& [a, b] : plan_.expansionConstraints()) {
      if (!ok) break;
      if (a == u && f_[b] != kInvalidVertex) ok = before(x, f_[b]);
      if (b == u && f_[a] != kInvalidVertex) ok = ok && before(f_[a], x);
    }
    if (!ok) continue;
    f_[u] = x;
    expand(depth + 1);
  }
  f_[u] = kInvalidVertex;
}

namespace {

double threadCpuSeconds() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + static_cast<double>(ts.tv_nsec) * 1e-9;
}

}  // namespace

std::vector<WorkerStats> runParallel(size_t num_tasks, int workers, const std::function<void(int, size_t)>& fn) {
  if (workers < 1) throw ValidationError("worker count must be at least 1");
  struct Queue {
    std::mutex mu;
    std::deque<size_t> items;
  };
  std::vector<Queue> queues(static_cast<size_t>(workers));
  for (size_t i = 0; i < num_tasks; ++i) queues[i % workers].items.push_back(i);

  std::vector<WorkerStats> stats(static_cast<size_t>(workers));
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;

  auto body = [&](int w) {
    const double cpu0 = threadCpuSeconds();
    while (!failed.load(std::memory_order_relaxed)) {
      std::optional<size_t> next;
      {
        std::lock_guard lock(queues[w].mu);
        if (!queues[w].items.empty()) {
          next = queues[w].items.front();
          queues[w].items.pop_front();
        }
      }
      for (int k = 1; !next && k < workers; ++k) {
        auto& victim = queues[(w + k) % workers];
        std::lock_guard lock(victim.mu);
        if (!victim.items.empty()) {
          next = victim.items.back();
          victim.items.pop_back();
        }
      }
      if (!next) break;
      try {
        fn(w, *next);
        ++stats[w].tasks;
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
    stats[w].cpu_seconds = threadCpuSeconds() - cpu0;
  };

  if (workers == 1) {
    body(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) threads.emplace_back(body, w);
    for (auto& t : threads) t.join();
  }
  if (error) std::rethrow_exception(error);
  return stats;
}

double imbalanceRatio(const std::vector<WorkerStats>& stats) {
  if (stats.empty()) return 1.0;
  double sum = 0, mx = 0;
  for (const auto& s : stats) {
    sum += s.cpu_seconds;
    mx = std::max(mx, s.cpu_seconds);
  }
  const double mean = sum / static_cast<double>(stats.size());
  return mean > 0 ? mx / mean : 1.0;
}

}  // namespace kvmatch
