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

#include "kvmatch/compiler.h"

namespace kvmatch {

namespace {

std::vector<Filter> candidateFilters(const PatternGraph& p, const PartialOrder& po,
                                     const std::vector<PatternVertex>& order, size_t pos) {
  const PatternVertex u = order[pos];
  std::vector<Filter> filters;
  for (size_t j = 0; j < pos; ++j) {
    const PatternVertex w = order[j];
    if (po.before(w, u)) filters.push_back({FilterKind::kGreater, w + 1});
    if (po.before(u, w)) filters.push_back({FilterKind::kLess, w + 1});
    if (!p.adjacent(w, u)) filters.push_back({FilterKind::kNotEqual, w + 1});
  }
  return filters;
}

bool hasLaterNeighbor(const PatternGraph& p, const std::vector<PatternVertex>& order, size_t pos) {
  for (size_t j = pos + 1; j < order.size(); ++j) {
    if (p.adjacent(order[pos], order[j])) return true;
  }
  return false;
}

Instruction makeInt(Var target, std::vector<Var> operands, std::vector<Filter> filters = {}) {
  Instruction in;
  in.kind = InstrKind::kInt;
  in.target = target;
  in.operands = std::move(operands);
  in.filters = std::move(filters);
  return in;
}

Instruction makeSimple(InstrKind kind, Var target, std::vector<Var> operands) {
  Instruction in;
  in.kind = kind;
  in.target = target;
  in.operands = std::move(operands);
  return in;
}

Instruction makeRes(int n) {
  Instruction res;
  res.kind = InstrKind::kRes;
  for (int u = 0; u < n; ++u) res.operands.push_back(Var::mapped(u + 1));
  return res;
}

}  // namespace

IncrementalPatternGraph incrementalPatternGraph(const PatternGraph& p, int i) {
  if (!p.directed()) throw ValidationError("incremental pattern graphs need a directed pattern");
  if (i < 1 || i > p.numEdges()) throw ValidationError("edge id " + std::to_string(i) + " out of range");
  IncrementalPatternGraph dp{p, i, {}};
  for (int k = 1; k <= p.numEdges(); ++k) {
    dp.tau.push_back(k < i ? EdgeType::kEither : k == i ? EdgeType::kDelta : EdgeType::kUnaltered);
  }
  return dp;
}

std::vector<IncrementalPatternGraph> incrementalPatternGraphs(const PatternGraph& p) {
  std::vector<IncrementalPatternGraph> graphs;
  for (int i = 1; i <= p.numEdges(); ++i) graphs.push_back(incrementalPatternGraph(p, i));
  return graphs;
}

int vertexCoverPrefix(const PatternGraph& p, const std::vector<PatternVertex>& order) {
  uint32_t covered = 0;
  for (size_t k = 0; k <= order.size(); ++k) {
    bool all = true;
    for (auto& e : p.edges()) {
      if (!(covered >> e.src & 1u) && !(covered >> e.dst & 1u)) {
        all = false;
        break;
      }
    }
    if (all) return static_cast<int>(k);
    covered |= 1u << order[k];
  }
  return static_cast<int>(order.size());
}

ExecutionPlan generateRawPlan(const PatternGraph& p, const std::vector<PatternVertex>& order,
                              const PartialOrder& po, bool pin_compressed_outputs) {
  checkMatchingOrder(p, order);
  ExecutionPlan plan;
  plan.order = order;
  auto& out = plan.instructions;
  const PatternVertex first = order[0];
  out.push_back(makeSimple(InstrKind::kIni, Var::mapped(first + 1), {}));
  if (hasLaterNeighbor(p, order, 0)) out.push_back(makeSimple(InstrKind::kDbq, Var::adj(first + 1), {Var::mapped(first + 1)}));
  const int cover = pin_compressed_outputs ? vertexCoverPrefix(p, order) : static_cast<int>(order.size());
  for (size_t pos = 1; pos < order.size(); ++pos) {
    const PatternVertex u = order[pos];
    std::vector<Var> operands;
    for (size_t j = 0; j < pos; ++j) {
      if (p.adjacent(order[j], u)) operands.push_back(Var::adj(order[j] + 1));
    }
    if (operands.empty()) operands.push_back(Var::universe());
    out.push_back(makeInt(Var::temp(u + 1), std::move(operands)));
    out.push_back(makeInt(Var::cand(u + 1), {Var::temp(u + 1)}, candidateFilters(p, po, order, pos)));
    out.push_back(makeSimple(InstrKind::kEnu, Var::mapped(u + 1), {Var::cand(u + 1)}));
    if (hasLaterNeighbor(p, order, pos)) out.push_back(makeSimple(InstrKind::kDbq, Var::adj(u + 1), {Var::mapped(u + 1)}));
    if (static_cast<int>(pos) >= cover) plan.pinned.push_back(Var::cand(u + 1));
  }
  out.push_back(makeRes(p.numVertices()));
  return eliminateUniOperand(std::move(plan));
}

ExecutionPlan generateRawPlan(const PatternGraph& p, const std::vector<PatternVertex>& order) {
  return generateRawPlan(p, order, p.partialOrder());
}

ExecutionPlan generateIncrementalRawPlan(const IncrementalPatternGraph& dp, const std::vector<PatternVertex>& order,
                                         const PartialOrder& po) {
  const PatternGraph& p = dp.base;
  checkMatchingOrder(p, order);
  const PatternEdge delta = dp.deltaEdge();
  if (order.size() < 2 || order[0] != delta.src || order[1] != delta.dst) {
    throw ValidationError("incremental order must start with " + vertexName(delta.src) + "," + vertexName(delta.dst));
  }
  ExecutionPlan plan;
  plan.order = order;
  plan.variant = PlanVariant::kIncremental;
  plan.delta_edge = dp.i;
  auto& out = plan.instructions;
  const int s = delta.src + 1, t = delta.dst + 1;
  auto emitTypedDbqs = [&](int idx) {
    for (EdgeType type : {EdgeType::kEither, EdgeType::kUnaltered}) {
      for (Direction dir : {Direction::kIn, Direction::kOut}) {
        Instruction in = makeSimple(InstrKind::kDbq, Var::streamAdj(idx, type, dir), {Var::mapped(idx)});
        in.op = DbqOp::kRuntime;
        out.push_back(in);
      }
    }
  };

  out.push_back(makeSimple(InstrKind::kIni, Var::mapped(s), {}));
  Instruction ado = makeSimple(InstrKind::kDbq, Var::streamAdj(s, EdgeType::kDelta, Direction::kOut), {Var::mapped(s)});
  ado.op = DbqOp::kStar;
  out.push_back(ado);
  out.push_back(makeInt(Var::cand(t), {ado.target}, candidateFilters(p, po, order, 1)));
  out.push_back(makeSimple(InstrKind::kDeltaEnu, Var::mapped(t), {Var::cand(t)}));
  emitTypedDbqs(s);
  emitTypedDbqs(t);
  if (p.hasArc(delta.dst, delta.src)) {
    EdgeType type = dp.type(p.edgeId(delta.dst, delta.src));
    out.push_back(makeSimple(InstrKind::kIns, Var{}, {Var::mapped(s), Var::streamAdj(t, type, Direction::kOut)}));
  }
  for (size_t pos = 2; pos < order.size(); ++pos) {
    const PatternVertex u = order[pos];
    std::vector<Var> operands;
    for (size_t j = 0; j < pos; ++j) {
      const PatternVertex x = order[j];
      if (p.hasArc(x, u)) operands.push_back(Var::streamAdj(x + 1, dp.type(p.edgeId(x, u)), Direction::kOut));
      if (p.hasArc(u, x)) operands.push_back(Var::streamAdj(x + 1, dp.type(p.edgeId(u, x)), Direction::kIn));
    }
    if (operands.empty()) operands.push_back(Var::universe());
    out.push_back(makeInt(Var::temp(u + 1), std::move(operands)));
    out.push_back(makeInt(Var::cand(u + 1), {Var::temp(u + 1)}, candidateFilters(p, po, order, pos)));
    out.push_back(makeSimple(InstrKind::kEnu, Var::mapped(u + 1), {Var::cand(u + 1)}));
    emitTypedDbqs(u + 1);
  }
  out.push_back(makeRes(p.numVertices()));

  // drop DBQs nobody reads
  std::erase_if(out, [&](const Instruction& in) {
    if (in.kind != InstrKind::kDbq) return false;
    for (auto& other : out) {
      if (other.kind != InstrKind::kInt && other.kind != InstrKind::kIns) continue;
      if (std::find(other.operands.begin(), other.operands.end(), in.target) != other.operands.end()) return false;
    }
    return true;
  });
  return eliminateUniOperand(std::move(plan));
}

ExecutionPlan generateIncrementalRawPlan(const IncrementalPatternGraph& dp, const std::vector<PatternVertex>& order) {
  return generateIncrementalRawPlan(dp, order, dp.base.partialOrder());
}

ExecutionPlan eliminateUniOperand(ExecutionPlan plan) {
  auto& ins = plan.instructions;
  for (bool changed = true; changed;) {
    changed = false;
    for (size_t k = 0; k < ins.size(); ++k) {
      const Instruction& in = ins[k];
      if (in.kind != InstrKind::kInt || in.operands.size() != 1 || !in.filters.empty()) continue;
      if (std::find(plan.pinned.begin(), plan.pinned.end(), in.target) != plan.pinned.end()) continue;
      const Var from = in.target, to = in.operands[0];
      ins.erase(ins.begin() + static_cast<std::ptrdiff_t>(k));
      for (auto& other : ins) std::replace(other.operands.begin(), other.operands.end(), from, to);
      changed = true;
      break;
    }
  }
  return plan;
}

}  // namespace kvmatch
