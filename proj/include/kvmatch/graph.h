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

#include <istream>
#include <map>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "kvmatch/common.h"

namespace kvmatch {

/**
 * Immutable simple undirected graph in CSR form. Vertices are dense ids 0..N-1; the original (external) id of each
 * vertex is retained and the dense numbering preserves the order of original ids.
 */
class UndirectedGraph {
 public:
  UndirectedGraph() : offsets_(1, 0) {}

  /** Builds from edges over dense ids in [0, n). Self-loops and duplicates are dropped. */
  static UndirectedGraph fromEdges(size_t n, std::vector<std::pair<VertexId, VertexId>> edges,
                                   std::vector<VertexId> original_ids = {});

  size_t numVertices() const { return offsets_.size() - 1; }
  size_t numEdges() const { return adj_.size() / 2; }
  std::span<const VertexId> neighbors(VertexId v) const {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }
  bool hasEdge(VertexId u, VertexId v) const;
  VertexId originalId(VertexId v) const { return original_ids_[v]; }
  const std::vector<VertexId>& originalIds() const { return original_ids_; }
  std::vector<std::pair<VertexId, VertexId>> edgeList() const;

 private:
  std::vector<size_t> offsets_;
  std::vector<VertexId> adj_;
  std::vector<VertexId> original_ids_;
};

/** Simple directed graph keyed by external vertex id; supports in-place updates for snapshot maintenance. */
class DirectedGraph {
 public:
  struct Adjacency {
    std::vector<VertexId> in;
    std::vector<VertexId> out;
  };

  void addVertex(VertexId v) { adj_.try_emplace(v); }
  /** Returns false when the arc already exists. Self-loops are rejected with ValidationError. */
  bool addEdge(VertexId src, VertexId dst);
  /** Returns false when the arc is absent. */
  bool removeEdge(VertexId src, VertexId dst);
  bool hasEdge(VertexId src, VertexId dst) const;

  std::span<const VertexId> out(VertexId v) const;
  std::span<const VertexId> in(VertexId v) const;
  bool hasVertex(VertexId v) const { return adj_.count(v) != 0; }
  size_t numVertices() const { return adj_.size(); }
  size_t numEdges() const { return num_edges_; }
  std::vector<VertexId> vertices() const;
  std::vector<std::pair<VertexId, VertexId>> edgeList() const;
  const std::map<VertexId, Adjacency>& adjacency() const { return adj_; }

 private:
  std::map<VertexId, Adjacency> adj_;
  size_t num_edges_ = 0;
};

/** Strict total order over data vertices: degree-based (d(v), id(v)) for batch, natural id order for streaming. */
class TotalOrder {
 public:
  enum class Kind { kDegree, kId };

  /** Natural id order. */
  TotalOrder() = default;
  static TotalOrder degreeBased(const UndirectedGraph& g);

  Kind kind() const { return kind_; }
  bool less(VertexId a, VertexId b) const { return rank_.empty() ? a < b : rank_[a] < rank_[b]; }
  uint32_t rank(VertexId v) const { return rank_.empty() ? v : rank_[v]; }

 private:
  Kind kind_ = Kind::kId;
  std::vector<uint32_t> rank_;
};

UndirectedGraph loadUndirectedEdgeList(std::istream& in);
DirectedGraph loadDirectedEdgeList(std::istream& in);
std::variant<UndirectedGraph, DirectedGraph> loadEdgeList(std::istream& in, bool directed);

/** Induced subgraph on the given dense ids of g; unknown ids are ignored. Original ids are carried over. */
UndirectedGraph inducedSubgraph(const UndirectedGraph& g, const std::vector<VertexId>& vertices);
DirectedGraph inducedSubgraph(const DirectedGraph& g, const std::vector<VertexId>& vertices);

}  // namespace kvmatch
