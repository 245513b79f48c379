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
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "kvmatch/common.h"

namespace kvmatch {

/** Pattern vertices are 0-based internally; u_i in text and plan names is index i-1. */
using PatternVertex = int;
constexpr int kMaxPatternVertices = 32;

struct PatternEdge {
  PatternVertex src;
  PatternVertex dst;
  bool operator==(const PatternEdge&) const = default;
};

/** u_lo < u_hi */
struct OrderConstraint {
  PatternVertex lo;
  PatternVertex hi;
  bool operator==(const OrderConstraint&) const = default;
  auto operator<=>(const OrderConstraint&) const = default;
};

/** Acyclic set of constraints over pattern vertices, with its transitive closure precomputed. */
class PartialOrder {
 public:
  PartialOrder() = default;
  /** Throws ValidationError on a cycle or an out-of-range vertex. */
  PartialOrder(int n, std::vector<OrderConstraint> constraints);

  const std::vector<OrderConstraint>& constraints() const { return constraints_; }
  bool empty() const { return constraints_.empty(); }
  /** u_a < u_b holds in the transitive closure. */
  bool before(PatternVertex a, PatternVertex b) const {
    return a < static_cast<int>(closure_.size()) && (closure_[a] >> b & 1u);
  }
  bool related(PatternVertex a, PatternVertex b) const { return before(a, b) || before(b, a); }
  /** Same order with redundant (transitively implied) constraints removed. */
  PartialOrder reduced() const;
  std::string toString() const;

 private:
  int n_ = 0;
  std::vector<OrderConstraint> constraints_;
  std::vector<uint32_t> closure_;
};

/**
 * Small connected pattern graph with stable edge ids e_1..e_m (edge id k is edges()[k-1]). Unless an explicit
 * partial order is given, symmetry-breaking constraints are derived from the automorphism group.
 */
class PatternGraph {
 public:
  PatternGraph() = default;
  PatternGraph(int n, std::vector<PatternEdge> edges, bool directed);

  int numVertices() const { return n_; }
  int numEdges() const { return static_cast<int>(edges_.size()); }
  bool directed() const { return directed_; }
  const std::vector<PatternEdge>& edges() const { return edges_; }
  /** 1-based edge id. */
  const PatternEdge& edge(int id) const { return edges_.at(id - 1); }

  /** Adjacent ignoring direction. */
  bool adjacent(PatternVertex u, PatternVertex v) const { return nbr_[u] >> v & 1u; }
  bool hasArc(PatternVertex u, PatternVertex v) const { return out_[u] >> v & 1u; }
  uint32_t neighborMask(PatternVertex u) const { return nbr_[u]; }
  uint32_t outMask(PatternVertex u) const { return out_[u]; }
  uint32_t inMask(PatternVertex u) const { return in_[u]; }
  int degree(PatternVertex u) const;
  /** Edge id of the arc (u, v), or 0. For undirected patterns the direction is ignored. */
  int edgeId(PatternVertex u, PatternVertex v) const;
  bool isConnected(uint32_t mask) const;

  const PartialOrder& partialOrder() const;
  bool hasExplicitPartialOrder() const { return explicit_order_; }
  void setPartialOrder(PartialOrder order);
  const std::optional<std::vector<PatternVertex>>& orderOverride() const { return order_override_; }
  void setOrderOverride(std::vector<PatternVertex> order);

 private:
  int n_ = 0;
  bool directed_ = false;
  std::vector<PatternEdge> edges_;
  std::vector<uint32_t> nbr_, out_, in_;
  std::optional<PartialOrder> partial_order_;
  bool explicit_order_ = false;
  std::optional<std::vector<PatternVertex>> order_override_;
};

/** Checks that `order` is a permutation of the pattern's vertices. */
void checkMatchingOrder(const PatternGraph& p, const std::vector<PatternVertex>& order);

/**
 * Pattern text format:
 *   n m [directed|undirected]
 *   u v [edge-id]            (m lines, 1-based vertices; ids default to line order)
 *   order: 1 3 5 2 6 4       (optional)
 *   partial: 3<5 2<6         (optional)
 */
PatternGraph parsePattern(std::istream& in);
PatternGraph parsePattern(const std::string& text);
std::string dumpPattern(const PatternGraph& p);
std::string vertexName(PatternVertex u);
std::string orderToString(const std::vector<PatternVertex>& order);
/** Parses "u1,u3,u5" or "1 3 5"; returns 0-based vertices. */
std::vector<PatternVertex> parseOrder(const std::string& text);

}  // namespace kvmatch
