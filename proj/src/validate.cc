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
#include <set>

#include "kvmatch/compiler.h"

namespace kvmatch {

std::vector<std::string> validatePlan(const ExecutionPlan& plan, const PatternGraph* p) {
  std::vector<std::string> diags;
  const auto& ins = plan.instructions;
  const int n = plan.numPatternVertices();
  size_t ini_count = 0, res_count = 0;
  std::set<Var> defined;
  std::map<Var, Var> fetched_for;
  std::optional<Var> start;
  bool op_bound = false;

  if (p) {
    try {
      checkMatchingOrder(*p, plan.order);
    } catch (const ValidationError& e) {
      diags.push_back(e.what());
    }
  }
  for (size_t k = 0; k < ins.size(); ++k) {
    const Instruction& in = ins[k];
    const std::string where = "instruction " + std::to_string(k + 1) + " (" + in.toString() + "): ";
    for (const Var& v : in.uses()) {
      if (!defined.count(v)) diags.push_back(where + "use before def " + v.name());
    }
    for (size_t j = 0; j < in.operands.size(); ++j) {
      if (in.operands[j].kind == VarKind::kUniverse && in.kind != InstrKind::kInt) {
        diags.push_back(where + "V(G) is only valid as an Intersect operand");
      }
    }
    switch (in.kind) {
      case InstrKind::kIni:
        ++ini_count;
        if (k != 0) diags.push_back(where + "INI must be the first instruction");
        start = in.target;
        break;
      case InstrKind::kRes:
        ++res_count;
        if (k + 1 != ins.size()) diags.push_back(where + "RES must be the last instruction");
        if (n > 0 && static_cast<int>(in.operands.size()) != n) diags.push_back(where + "RES arity differs from n");
        break;
      case InstrKind::kDbq:
        if (in.operands.size() != 1 || in.operands[0].kind != VarKind::kMapped) {
          diags.push_back(where + "GetAdj takes one mapped vertex");
        } else if (in.target.index != in.operands[0].index) {
          diags.push_back(where + "adjacency set subscript differs from its vertex");
        }
        if (in.op == DbqOp::kRuntime && !op_bound) diags.push_back(where + "use before def op");
        if (in.target.kind == VarKind::kAdj) fetched_for[in.target] = in.operands.empty() ? Var{} : in.operands[0];
        break;
      case InstrKind::kInt:
        if (in.operands.empty()) diags.push_back(where + "Intersect without operands");
        break;
      case InstrKind::kEnu:
      case InstrKind::kDeltaEnu:
        if (in.operands.size() != 1) diags.push_back(where + "Foreach takes one set");
        if (in.kind == InstrKind::kDeltaEnu) op_bound = true;
        break;
      case InstrKind::kTrc: {
        if (plan.variant == PlanVariant::kIncremental) diags.push_back(where + "TCache in an incremental plan");
        if (in.operands.size() != 4) {
          diags.push_back(where + "TCache takes four operands");
          break;
        }
        const Var fi = in.operands[0], fj = in.operands[1];
        auto ai = fetched_for.find(in.operands[2]);
        auto aj = fetched_for.find(in.operands[3]);
        if (ai == fetched_for.end() || ai->second != fi || aj == fetched_for.end() || aj->second != fj) {
          diags.push_back(where + "TCache operands must be the adjacency sets of its two vertices");
        }
        if (!start || (fi != *start && fj != *start)) diags.push_back(where + "TCache must be anchored at the start vertex");
        if (p && fi.index >= 1 && fj.index >= 1 && fi.index <= p->numVertices() && fj.index <= p->numVertices() &&
            !p->adjacent(fi.index - 1, fj.index - 1)) {
          diags.push_back(where + "TCache vertices are not adjacent in the pattern");
        }
        break;
      }
      case InstrKind::kIns:
        if (in.operands.size() != 2 || in.operands[0].kind != VarKind::kMapped) {
          diags.push_back(where + "InSetTest takes a mapped vertex and a set");
        }
        break;
    }
    if (in.kind != InstrKind::kIns && in.kind != InstrKind::kRes) {
      if (!defined.insert(in.target).second) diags.push_back(where + "redefinition of " + in.target.name());
    }
  }
  if (ini_count != 1) diags.push_back("plan needs exactly one INI, found " + std::to_string(ini_count));
  if (res_count != 1) diags.push_back("plan needs exactly one RES, found " + std::to_string(res_count));

  if (plan.variant == PlanVariant::kIncremental) {
    auto first_delta = std::find_if(ins.begin(), ins.end(),
                                    [](const Instruction& in) { return in.kind == InstrKind::kDeltaEnu; });
    if (first_delta == ins.end()) diags.push_back("incremental plan has no Delta-Foreach");
    if (plan.order.size() >= 2) {
      if (start && start->index != plan.order[0] + 1) diags.push_back("INI does not bind the first order vertex");
      if (first_delta != ins.end() && first_delta->target.index != plan.order[1] + 1) {
        diags.push_back("Delta-Foreach does not bind the second order vertex");
      }
    }
    if (p) {
      if (plan.delta_edge < 1 || plan.delta_edge > p->numEdges()) {
        diags.push_back("incremental plan names an unknown delta edge");
      } else if (plan.order.size() < 2 || plan.order[0] != p->edge(plan.delta_edge).src ||
                 plan.order[1] != p->edge(plan.delta_edge).dst) {
        diags.push_back("incremental order must start with the delta edge endpoints");
      }
    }
  }
  return diags;
}

void requireValidPlan(const ExecutionPlan& plan, const PatternGraph* p) {
  auto diags = validatePlan(plan, p);
  if (diags.empty()) return;
  std::string msg = "invalid execution plan: " + diags.front();
  throw ValidationError(msg, std::move(diags));
}

}  // namespace kvmatch
