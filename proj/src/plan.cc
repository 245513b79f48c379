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

#include "kvmatch/plan.h"

#include <algorithm>
#include <sstream>

namespace kvmatch {

namespace {

const char* kNotEqual = "≠";

char typeLetter(EdgeType t) { return t == EdgeType::kEither ? 'E' : t == EdgeType::kDelta ? 'D' : 'U'; }

const char* typeWord(EdgeType t) {
  return t == EdgeType::kEither ? "either" : t == EdgeType::kDelta ? "delta" : "unaltered";
}

const char* opWord(DbqOp op) {
  switch (op) {
    case DbqOp::kStar:
      return "*";
    case DbqOp::kRuntime:
      return "op";
    case DbqOp::kPlus:
      return "+";
    case DbqOp::kMinus:
      return "-";
    case DbqOp::kNone:
      break;
  }
  return "";
}

std::string joinVars(const std::vector<Var>& vars) {
  std::string s;
  for (auto& v : vars) {
    if (!s.empty()) s += ',';
    s += v.name();
  }
  return s;
}

int parseIndex(const std::string& s, size_t pos, size_t line) {
  if (pos >= s.size()) throw ParseError("missing subscript in '" + s + "'", line);
  int value = 0;
  for (size_t i = pos; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw ParseError("bad subscript in '" + s + "'", line);
    value = value * 10 + (s[i] - '0');
  }
  return value;
}

Var parseVar(const std::string& s, size_t line) {
  if (s == "V(G)") return Var::universe();
  if (s.empty()) throw ParseError("empty variable name", line);
  switch (s[0]) {
    case 'f':
      return Var::mapped(parseIndex(s, 1, line));
    case 'T':
      return Var::temp(parseIndex(s, 1, line));
    case 'C':
      return Var::cand(parseIndex(s, 1, line));
    case 'A': {
      if (s.size() > 2 && std::string("EDU").find(s[1]) != std::string::npos && (s[2] == 'I' || s[2] == 'O')) {
        EdgeType t = s[1] == 'E' ? EdgeType::kEither : s[1] == 'D' ? EdgeType::kDelta : EdgeType::kUnaltered;
        return Var::streamAdj(parseIndex(s, 3, line), t, s[2] == 'I' ? Direction::kIn : Direction::kOut);
      }
      return Var::adj(parseIndex(s, 1, line));
    }
    default:
      throw ParseError("unknown variable '" + s + "'", line);
  }
}

std::vector<std::string> splitArgs(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

Filter parseFilter(const std::string& s, size_t line) {
  if (s.rfind(">f", 0) == 0) return {FilterKind::kGreater, parseIndex(s, 2, line)};
  if (s.rfind("<f", 0) == 0) return {FilterKind::kLess, parseIndex(s, 2, line)};
  if (s.rfind("!=f", 0) == 0) return {FilterKind::kNotEqual, parseIndex(s, 3, line)};
  if (s.rfind(std::string(kNotEqual) + "f", 0) == 0) {
    return {FilterKind::kNotEqual, parseIndex(s, std::string(kNotEqual).size() + 1, line)};
  }
  throw ParseError("bad filter '" + s + "'", line);
}

Instruction parseInstructionAt(std::string text, size_t line) {
  text.erase(std::remove(text.begin(), text.end(), ' '), text.end());
  Instruction in;
  std::string lhs, rhs = text;
  if (auto def = text.find(":="); def != std::string::npos) {
    lhs = text.substr(0, def);
    rhs = text.substr(def + 2);
  }
  std::string filters;
  if (auto bar = rhs.find("|{"); bar != std::string::npos) {
    if (rhs.back() != '}') throw ParseError("unterminated filter list", line);
    filters = rhs.substr(bar + 2, rhs.size() - bar - 3);
    rhs.erase(bar);
  }
  auto open = rhs.find('(');
  if (open == std::string::npos || rhs.back() != ')') throw ParseError("expected Name(args)", line);
  const std::string fn = rhs.substr(0, open);
  const auto args = splitArgs(rhs.substr(open + 1, rhs.size() - open - 2));
  auto vars = [&](size_t from, size_t to) {
    std::vector<Var> vs;
    for (size_t i = from; i < to; ++i) vs.push_back(parseVar(args[i], line));
    return vs;
  };
  if (fn == "Init") {
    in.kind = InstrKind::kIni;
    in.target = parseVar(lhs, line);
  } else if (fn == "GetAdj") {
    in.kind = InstrKind::kDbq;
    in.target = parseVar(lhs, line);
    if (args.size() != 1 && args.size() != 4) throw ParseError("GetAdj takes 1 or 4 arguments", line);
    in.operands = vars(0, 1);
    if (args.size() == 4) {
      if (in.target.kind != VarKind::kStreamAdj) throw ParseError("typed GetAdj needs a typed target", line);
      if (args[1] != typeWord(in.target.type) || args[2] != (in.target.dir == Direction::kIn ? "in" : "out")) {
        throw ParseError("GetAdj type/direction disagree with target name", line);
      }
      const std::string& op = args[3];
      in.op = op == "*" ? DbqOp::kStar : op == "op" ? DbqOp::kRuntime : op == "+" ? DbqOp::kPlus
              : op == "-" ? DbqOp::kMinus : DbqOp::kNone;
      if (in.op == DbqOp::kNone) throw ParseError("bad GetAdj op '" + op + "'", line);
    }
  } else if (fn == "Intersect") {
    in.kind = InstrKind::kInt;
    in.target = parseVar(lhs, line);
    in.operands = vars(0, args.size());
  } else if (fn == "Foreach") {
    if (lhs.rfind("op,", 0) == 0) {
      in.kind = InstrKind::kDeltaEnu;
      lhs.erase(0, 3);
    } else {
      in.kind = InstrKind::kEnu;
    }
    in.target = parseVar(lhs, line);
    in.operands = vars(0, args.size());
  } else if (fn == "TCache") {
    in.kind = InstrKind::kTrc;
    in.target = parseVar(lhs, line);
    if (args.size() != 4) throw ParseError("TCache takes 4 arguments", line);
    in.operands = vars(0, 4);
  } else if (fn == "InSetTest") {
    in.kind = InstrKind::kIns;
    if (args.size() != 2) throw ParseError("InSetTest takes 2 arguments", line);
    in.operands = vars(0, 2);
  } else if (fn == "ReportMatch") {
    in.kind = InstrKind::kRes;
    in.operands = vars(0, args.size());
  } else {
    throw ParseError("unknown instruction '" + fn + "'", line);
  }
  if (!filters.empty()) {
    if (in.kind != InstrKind::kInt) throw ParseError("only Intersect takes filters", line);
    for (auto& f : splitArgs(filters)) in.filters.push_back(parseFilter(f, line));
  }
  return in;
}

}  // namespace

std::string Var::name() const {
  switch (kind) {
    case VarKind::kMapped:
      return "f" + std::to_string(index);
    case VarKind::kAdj:
      return "A" + std::to_string(index);
    case VarKind::kTemp:
      return "T" + std::to_string(index);
    case VarKind::kCand:
      return "C" + std::to_string(index);
    case VarKind::kStreamAdj:
      return std::string("A") + typeLetter(type) + (dir == Direction::kIn ? 'I' : 'O') + std::to_string(index);
    case VarKind::kUniverse:
      return "V(G)";
    case VarKind::kNone:
      break;
  }
  return "?";
}

std::string Filter::toString() const {
  switch (kind) {
    case FilterKind::kGreater:
      return ">f" + std::to_string(subject);
    case FilterKind::kLess:
      return "<f" + std::to_string(subject);
    case FilterKind::kNotEqual:
      break;
  }
  return std::string(kNotEqual) + "f" + std::to_string(subject);
}

std::string toString(InstrKind kind) {
  switch (kind) {
    case InstrKind::kIni:
      return "INI";
    case InstrKind::kDbq:
      return "DBQ";
    case InstrKind::kInt:
      return "INT";
    case InstrKind::kEnu:
      return "ENU";
    case InstrKind::kDeltaEnu:
      return "DeltaENU";
    case InstrKind::kTrc:
      return "TRC";
    case InstrKind::kIns:
      return "INS";
    case InstrKind::kRes:
      break;
  }
  return "RES";
}

std::string Instruction::toString() const {
  std::string s;
  switch (kind) {
    case InstrKind::kIni:
      return target.name() + ":=Init(start)";
    case InstrKind::kDbq:
      s = target.name() + ":=GetAdj(" + operands.at(0).name();
      if (target.kind == VarKind::kStreamAdj) {
        s += std::string(",") + typeWord(target.type) + (target.dir == Direction::kIn ? ",in," : ",out,") + opWord(op);
      }
      return s + ")";
    case InstrKind::kInt:
      s = target.name() + ":=Intersect(" + joinVars(operands) + ")";
      if (!filters.empty()) {
        s += "|{";
        for (size_t i = 0; i < filters.size(); ++i) s += (i ? "," : "") + filters[i].toString();
        s += "}";
      }
      return s;
    case InstrKind::kEnu:
      return target.name() + ":=Foreach(" + joinVars(operands) + ")";
    case InstrKind::kDeltaEnu:
      return "op," + target.name() + ":=Foreach(" + joinVars(operands) + ")";
    case InstrKind::kTrc:
      return target.name() + ":=TCache(" + joinVars(operands) + ")";
    case InstrKind::kIns:
      return "InSetTest(" + joinVars(operands) + ")";
    case InstrKind::kRes:
      break;
  }
  return "ReportMatch(" + joinVars(operands) + ")";
}

std::vector<Var> Instruction::uses() const {
  std::vector<Var> vs;
  for (auto& v : operands) {
    if (v.kind != VarKind::kUniverse) vs.push_back(v);
  }
  for (auto& f : filters) vs.push_back(Var::mapped(f.subject));
  return vs;
}

int ExecutionPlan::nextFreeIndex() const {
  int max_index = static_cast<int>(order.size());
  for (auto& in : instructions) {
    max_index = std::max(max_index, in.target.index);
    for (auto& v : in.operands) max_index = std::max(max_index, v.index);
  }
  return max_index + 1;
}

std::string dumpPlan(const ExecutionPlan& plan) {
  std::ostringstream out;
  out << "order: " << orderToString(plan.order) << '\n';
  out << "variant: ";
  switch (plan.variant) {
    case PlanVariant::kBatch:
      out << "batch";
      break;
    case PlanVariant::kIncremental:
      out << "incremental " << plan.delta_edge;
      break;
    case PlanVariant::kVcbc:
      out << "vcbc " << plan.cover_size;
      break;
  }
  out << '\n';
  if (!plan.pinned.empty()) out << "pinned: " << joinVars(plan.pinned) << '\n';
  for (auto& in : plan.instructions) out << in.toString() << '\n';
  return out.str();
}

Instruction parseInstruction(const std::string& line) { return parseInstructionAt(line, 0); }

ExecutionPlan parsePlan(const std::string& text) {
  ExecutionPlan plan;
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("order:", 0) == 0) {
      plan.order = parseOrder(line.substr(6));
    } else if (line.rfind("variant:", 0) == 0) {
      std::istringstream v(line.substr(8));
      std::string word;
      v >> word;
      if (word == "batch") {
        plan.variant = PlanVariant::kBatch;
      } else if (word == "incremental") {
        plan.variant = PlanVariant::kIncremental;
        v >> plan.delta_edge;
      } else if (word == "vcbc") {
        plan.variant = PlanVariant::kVcbc;
        v >> plan.cover_size;
      } else {
        throw ParseError("unknown plan variant '" + word + "'", line_no);
      }
    } else if (line.rfind("pinned:", 0) == 0) {
      for (auto& name : splitArgs(line.substr(7))) plan.pinned.push_back(parseVar(name, line_no));
    } else {
      plan.instructions.push_back(parseInstructionAt(line, line_no));
    }
  }
  return plan;
}

}  // namespace kvmatch
