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

#include <compare>
#include <string>
#include <vector>

#include "kvmatch/pattern.h"

namespace kvmatch {

enum class InstrKind : uint8_t { kIni, kDbq, kInt, kEnu, kDeltaEnu, kTrc, kIns, kRes };
enum class VarKind : uint8_t { kNone, kMapped, kAdj, kTemp, kCand, kStreamAdj, kUniverse };
enum class EdgeType : uint8_t { kEither, kDelta, kUnaltered };
enum class Direction : uint8_t { kIn, kOut };
/** Snapshot selector of a streaming DBQ: raw delta set (*), runtime op bound by Delta-Foreach, or fixed. */
enum class DbqOp : uint8_t { kNone, kStar, kRuntime, kPlus, kMinus };
enum class FilterKind : uint8_t { kGreater, kLess, kNotEqual };

/**
 * Plan variable. Subscripts are 1-based as printed: f3 binds u3, A3 is its adjacency set, T/C are intersections.
 * Streaming adjacency sets carry their edge type and direction (AEO1, ADO1, AUI3, ...). kUniverse is V(G).
 */
struct Var {
  VarKind kind = VarKind::kNone;
  int index = 0;
  EdgeType type = EdgeType::kEither;
  Direction dir = Direction::kOut;

  static Var mapped(int index) { return {VarKind::kMapped, index}; }
  static Var adj(int index) { return {VarKind::kAdj, index}; }
  static Var temp(int index) { return {VarKind::kTemp, index}; }
  static Var cand(int index) { return {VarKind::kCand, index}; }
  static Var universe() { return {VarKind::kUniverse, 0}; }
  static Var streamAdj(int index, EdgeType type, Direction dir) { return {VarKind::kStreamAdj, index, type, dir}; }

  bool isSet() const { return kind != VarKind::kNone && kind != VarKind::kMapped; }
  std::string name() const;
  bool operator==(const Var& o) const {
    return kind == o.kind && index == o.index && (kind != VarKind::kStreamAdj || (type == o.type && dir == o.dir));
  }
  auto operator<=>(const Var& o) const {
    if (auto c = kind <=> o.kind; c != 0) return c;
    if (auto c = index <=> o.index; c != 0) return c;
    if (kind != VarKind::kStreamAdj) return std::strong_ordering::equal;
    if (auto c = type <=> o.type; c != 0) return c;
    return dir <=> o.dir;
  }
};

struct Filter {
  FilterKind kind;
  int subject;  // f subscript
  bool operator==(const Filter&) const = default;
  std::string toString() const;
};

/**
 * One plan instruction.
 *   INI       target f, no operands
 *   DBQ       target A (or typed streaming set), operand f; streaming adds op
 *   INT       target T/C, operands = sets, optional filters
 *   ENU       target f, operand = set
 *   DeltaENU  target f, operand = flagged delta set; also binds op
 *   TRC       target T, operands f_i, f_j, A_i, A_j
 *   INS       no target, operands f, set
 *   RES       no target, operands = one f (or C for compressed output) per pattern vertex in index order
 */
struct Instruction {
  InstrKind kind = InstrKind::kRes;
  Var target;
  std::vector<Var> operands;
  std::vector<Filter> filters;
  DbqOp op = DbqOp::kNone;

  bool operator==(const Instruction&) const = default;
  std::string toString() const;
  /** Variables read by this instruction, including filter subjects. */
  std::vector<Var> uses() const;
};

enum class PlanVariant : uint8_t { kBatch, kIncremental, kVcbc };

struct ExecutionPlan {
  std::vector<Instruction> instructions;
  std::vector<PatternVertex> order;
  PlanVariant variant = PlanVariant::kBatch;
  int delta_edge = 0;  // i of incremental(i)
  int cover_size = 0;  // k of vcbc(k)
  /** C sets that uni-operand elimination must keep (compressed-output candidates). */
  std::vector<Var> pinned;

  bool operator==(const ExecutionPlan&) const = default;
  int numPatternVertices() const { return static_cast<int>(order.size()); }
  /** Next unused subscript across every variable of the plan. */
  int nextFreeIndex() const;
};

std::string toString(InstrKind kind);
std::string dumpPlan(const ExecutionPlan& plan);
Instruction parseInstruction(const std::string& line);
/** Inverse of dumpPlan. Throws ParseError with the offending line number. */
ExecutionPlan parsePlan(const std::string& text);

}  // namespace kvmatch
