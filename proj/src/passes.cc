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

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "kvmatch/compiler.h"

namespace kvmatch {

namespace {

using VarSet = std::vector<Var>;  // sorted, unique

VarSet operandSet(const Instruction& in) {
  VarSet s;
  for (auto& v : in.operands) {
    if (v.kind != VarKind::kUniverse) s.push_back(v);
  }
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

bool contains(const VarSet& super, const VarSet& sub) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

struct Candidate {
  VarSet items;
  int support = 0;
  size_t first = 0;               // first instruction containing the set
  std::vector<size_t> positions;  // operand positions inside that instruction
};

// Level-wise (Apriori) mining of operand subsets shared by at least two INTs.
std::vector<Candidate> mineCommonSubsets(const ExecutionPlan& plan, size_t cap) {
  std::vector<std::pair<size_t, VarSet>> ints;
  for (size_t k = 0; k < plan.instructions.size(); ++k) {
    const auto& in = plan.instructions[k];
    if (in.kind != InstrKind::kInt) continue;
    VarSet s = operandSet(in);
    if (s.size() >= 2) ints.emplace_back(k, std::move(s));
  }
  std::vector<Candidate> frequent;
  std::set<VarSet> level;
  for (auto& [_, s] : ints) {
    for (size_t a = 0; a < s.size(); ++a) {
      for (size_t b = a + 1; b < s.size(); ++b) level.insert({s[a], s[b]});
    }
  }
  for (size_t size = 2; size <= cap && !level.empty(); ++size) {
    std::set<VarSet> next;
    for (const VarSet& cand : level) {
      Candidate c{cand, 0, 0, {}};
      for (auto& [k, s] : ints) {
        if (!contains(s, cand)) continue;
        if (c.support++ == 0) c.first = k;
      }
      if (c.support < 2) continue;
      const auto& ops = plan.instructions[c.first].operands;
      for (auto& v : cand) c.positions.push_back(std::find(ops.begin(), ops.end(), v) - ops.begin());
      std::sort(c.positions.begin(), c.positions.end());
      frequent.push_back(c);
      for (auto& [_, s] : ints) {
        if (!contains(s, cand)) continue;
        for (auto& v : s) {
          if (v <= cand.back()) continue;
          VarSet grown = cand;
          grown.push_back(v);
          next.insert(std::move(grown));
        }
      }
    }
    level = std::move(next);
  }
  return frequent;
}

std::vector<Var> replaceSubset(const std::vector<Var>& operands, const VarSet& subset, Var replacement) {
  std::vector<Var> out;
  bool inserted = false;
  for (auto& v : operands) {
    if (std::binary_search(subset.begin(), subset.end(), v)) {
      if (!inserted) out.push_back(replacement);
      inserted = true;
    } else {
      out.push_back(v);
    }
  }
  return out;
}

int kindRank(InstrKind kind) {
  switch (kind) {
    case InstrKind::kIni:
      return 0;
    case InstrKind::kInt:
    case InstrKind::kIns:
      return 1;
    case InstrKind::kTrc:
      return 2;
    case InstrKind::kDbq:
      return 3;
    case InstrKind::kEnu:
    case InstrKind::kDeltaEnu:
      return 4;
    case InstrKind::kRes:
      break;
  }
  return 5;
}

bool definesTarget(const Instruction& in) { return in.kind != InstrKind::kIns && in.kind != InstrKind::kRes; }

}  // namespace

ExecutionPlan eliminateCommonSubexpressions(ExecutionPlan plan, int max_subset_size) {
  const size_t cap = max_subset_size > 0 ? static_cast<size_t>(max_subset_size)
                                         : static_cast<size_t>(std::max(2, plan.numPatternVertices() - 1));
  for (int guard = 0;; ++guard) {
    if (guard > 10000) throw Error("common subexpression elimination did not converge");
    auto frequent = mineCommonSubsets(plan, cap);
    if (frequent.empty()) break;
    auto better = [](const Candidate& a, const Candidate& b) {
      if (a.items.size() != b.items.size()) return a.items.size() > b.items.size();
      if (a.support != b.support) return a.support > b.support;
      if (a.first != b.first) return a.first < b.first;
      return a.positions < b.positions;
    };
    const Candidate best = *std::min_element(frequent.begin(), frequent.end(), better);
    const Var hoisted = Var::temp(plan.nextFreeIndex());
    Instruction def;
    def.kind = InstrKind::kInt;
    def.target = hoisted;
    const auto& first_ops = plan.instructions[best.first].operands;
    for (size_t pos : best.positions) def.operands.push_back(first_ops[pos]);
    for (auto& in : plan.instructions) {
      if (in.kind == InstrKind::kInt && contains(operandSet(in), best.items)) {
        in.operands = replaceSubset(in.operands, best.items, hoisted);
      }
    }
    plan.instructions.insert(plan.instructions.begin() + static_cast<std::ptrdiff_t>(best.first), std::move(def));
  }
  return eliminateUniOperand(std::move(plan));
}

ExecutionPlan reorderInstructions(ExecutionPlan plan) {
  // flatten n-ary INTs into binary chains, operands by definition position
  std::map<Var, size_t> def_pos;
  for (size_t k = 0; k < plan.instructions.size(); ++k) {
    if (definesTarget(plan.instructions[k])) def_pos[plan.instructions[k].target] = k;
  }
  int fresh = plan.nextFreeIndex();
  std::vector<Instruction> flat;
  for (auto& in : plan.instructions) {
    if (in.kind != InstrKind::kInt || in.operands.size() <= 2) {
      flat.push_back(in);
      continue;
    }
    std::vector<Var> ops = in.operands;
    std::stable_sort(ops.begin(), ops.end(), [&](const Var& a, const Var& b) {
      auto pa = def_pos.count(a) ? static_cast<long>(def_pos[a]) : -1L;
      auto pb = def_pos.count(b) ? static_cast<long>(def_pos[b]) : -1L;
      return pa < pb;
    });
    Var acc = ops[0];
    for (size_t j = 1; j + 1 < ops.size(); ++j) {
      Instruction step;
      step.kind = InstrKind::kInt;
      step.target = Var::temp(fresh++);
      step.operands = {acc, ops[j]};
      flat.push_back(step);
      acc = step.target;
    }
    Instruction last = in;
    last.operands = {acc, ops.back()};
    flat.push_back(std::move(last));
  }

  const size_t n = flat.size();
  std::map<Var, size_t> defined_at;
  for (size_t k = 0; k < n; ++k) {
    if (definesTarget(flat[k])) defined_at[flat[k].target] = k;
  }
  std::vector<std::vector<size_t>> succ(n);
  std::vector<int> indegree(n, 0);
  auto addEdge = [&](size_t a, size_t b) {
    succ[a].push_back(b);
    ++indegree[b];
  };
  std::optional<size_t> prev_chain, delta_enu;
  for (size_t k = 0; k < n; ++k) {
    const auto& in = flat[k];
    for (auto& v : in.uses()) {
      auto it = defined_at.find(v);
      if (it != defined_at.end() && it->second != k) addEdge(it->second, k);
    }
    if (in.kind == InstrKind::kDbq && in.op == DbqOp::kRuntime && delta_enu) addEdge(*delta_enu, k);
    if (in.kind == InstrKind::kDeltaEnu) delta_enu = k;
    if (in.kind == InstrKind::kDbq || in.kind == InstrKind::kEnu || in.kind == InstrKind::kDeltaEnu) {
      if (prev_chain) addEdge(*prev_chain, k);
      prev_chain = k;
    }
    if (in.kind == InstrKind::kRes) {
      for (size_t j = 0; j < n; ++j) {
        if (j != k) addEdge(j, k);
      }
    }
  }
  using Key = std::pair<int, size_t>;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> ready;
  for (size_t k = 0; k < n; ++k) {
    if (indegree[k] == 0) ready.emplace(kindRank(flat[k].kind), k);
  }
  std::vector<Instruction> sorted;
  while (!ready.empty()) {
    size_t k = ready.top().second;
    ready.pop();
    sorted.push_back(flat[k]);
    for (size_t s : succ[k]) {
      if (--indegree[s] == 0) ready.emplace(kindRank(flat[s].kind), s);
    }
  }
  if (sorted.size() != n) throw Error("dependency cycle in execution plan");
  plan.instructions = std::move(sorted);
  return plan;
}

ExecutionPlan applyTriangleCache(ExecutionPlan plan, const PatternGraph& p) {
  if (plan.variant == PlanVariant::kIncremental) return plan;
  std::optional<Var> start;
  std::map<Var, Var> fetched_for;  // A_x -> f_x
  for (auto& in : plan.instructions) {
    if (in.kind == InstrKind::kIni) start = in.target;
    if (in.kind == InstrKind::kDbq && in.target.kind == VarKind::kAdj) fetched_for[in.target] = in.operands[0];
  }
  if (!start) return plan;
  for (auto& in : plan.instructions) {
    if (in.kind != InstrKind::kInt || in.operands.size() != 2 || !in.filters.empty()) continue;
    auto a = fetched_for.find(in.operands[0]);
    auto b = fetched_for.find(in.operands[1]);
    if (a == fetched_for.end() || b == fetched_for.end()) continue;
    const Var fi = a->second, fj = b->second;
    if (fi != *start && fj != *start) continue;
    if (!p.adjacent(fi.index - 1, fj.index - 1)) continue;
    in.kind = InstrKind::kTrc;
    in.operands = {fi, fj, in.operands[0], in.operands[1]};
  }
  return plan;
}

ExecutionPlan applyVcbc(ExecutionPlan plan, const PatternGraph& p) {
  const int k = vertexCoverPrefix(p, plan.order);
  auto& ins = plan.instructions;
  auto res = std::find_if(ins.begin(), ins.end(), [](const Instruction& in) { return in.kind == InstrKind::kRes; });
  if (res == ins.end()) throw ValidationError("plan has no RES instruction");
  std::vector<Var> report = res->operands;
  for (size_t pos = static_cast<size_t>(k); pos < plan.order.size(); ++pos) {
    const Var f = Var::mapped(plan.order[pos] + 1);
    auto enu = std::find_if(ins.begin(), ins.end(),
                            [&](const Instruction& in) { return in.kind == InstrKind::kEnu && in.target == f; });
    if (enu == ins.end()) continue;
    const Var source = enu->operands[0];
    ins.erase(enu);
    for (auto& v : report) {
      if (v == f) v = source;
    }
    for (auto& in : ins) {
      std::erase_if(in.filters, [&](const Filter& flt) { return flt.subject == f.index; });
    }
  }
  for (auto& in : ins) {
    if (in.kind == InstrKind::kRes) in.operands = report;
  }
  plan.variant = PlanVariant::kVcbc;
  plan.cover_size = k;
  return plan;
}

ExecutionPlan optimizePlan(const PatternGraph& p, const std::vector<PatternVertex>& order,
                           const PipelineOptions& options) {
  ExecutionPlan plan = generateRawPlan(p, order, p.partialOrder(), options.vcbc);
  if (options.cse) plan = eliminateCommonSubexpressions(std::move(plan));
  if (options.reorder) plan = reorderInstructions(std::move(plan));
  if (options.triangle_cache) plan = applyTriangleCache(std::move(plan), p);
  if (options.vcbc) plan = applyVcbc(std::move(plan), p);
  return plan;
}

ExecutionPlan optimizeIncrementalPlan(const IncrementalPatternGraph& dp, const std::vector<PatternVertex>& order,
                                      const PipelineOptions& options) {
  ExecutionPlan plan = generateIncrementalRawPlan(dp, order);
  if (options.cse) plan = eliminateCommonSubexpressions(std::move(plan));
  if (options.reorder) plan = reorderInstructions(std::move(plan));
  return plan;
}

}  // namespace kvmatch
