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

#include "kvmatch/graph.h"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <string>
#include <unordered_map>

namespace kvmatch {

namespace {

bool isBlank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// Parses "src dst" lines. Comment and blank lines are skipped.
template <typename Fn>
void forEachEdgeLine(std::istream& in, Fn&& fn) {
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end && isBlank(*p)) ++p;
    if (p == end || *p == '#') continue;
    uint64_t ids[2];
    for (auto& id : ids) {
      while (p < end && isBlank(*p)) ++p;
      auto [next, ec] = std::from_chars(p, end, id);
      if (ec != std::errc() || next == p) throw ParseError("expected two nonnegative integer ids", line_no);
      if (id >= kInvalidVertex) throw ParseError("vertex id out of range", line_no);
      p = next;
    }
    while (p < end && isBlank(*p)) ++p;
    if (p != end) throw ParseError("unexpected trailing token", line_no);
    fn(static_cast<VertexId>(ids[0]), static_cast<VertexId>(ids[1]));
  }
}

}  // namespace

UndirectedGraph UndirectedGraph::fromEdges(size_t n, std::vector<std::pair<VertexId, VertexId>> edges,
                                           std::vector<VertexId> original_ids) {
  UndirectedGraph g;
  if (original_ids.empty()) {
    original_ids.resize(n);
    std::iota(original_ids.begin(), original_ids.end(), 0);
  }
  g.original_ids_ = std::move(original_ids);
  std::vector<std::pair<VertexId, VertexId>> arcs;
  arcs.reserve(edges.size() * 2);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw ValidationError("edge endpoint outside [0, n)");
    if (u == v) continue;
    arcs.emplace_back(u, v);
    arcs.emplace_back(v, u);
  }
  edges.clear();
  edges.shrink_to_fit();
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
  g.offsets_.assign(n + 1, 0);
  for (auto& a : arcs) ++g.offsets_[a.first + 1];
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  g.adj_.resize(arcs.size());
  for (size_t i = 0; i < arcs.size(); ++i) g.adj_[i] = arcs[i].second;
  return g;
}

bool UndirectedGraph::hasEdge(VertexId u, VertexId v) const {
  if (u >= numVertices() || v >= numVertices()) return false;
  auto nbrs = neighbors(degree(u) <= degree(v) ? u : v);
  return std::binary_search(nbrs.begin(), nbrs.end(), degree(u) <= degree(v) ? v : u);
}

std::vector<std::pair<VertexId, VertexId>> UndirectedGraph::edgeList() const {
  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(numEdges());
  for (VertexId u = 0; u < numVertices(); ++u) {
    for (VertexId v : neighbors(u)) {
      if (u < v) edges.emplace_back(u, v);
    }
  }
  return edges;
}

bool DirectedGraph::addEdge(VertexId src, VertexId dst) {
  if (src == dst) throw ValidationError("self-loop " + std::to_string(src) + " -> " + std::to_string(dst));
  auto& out = adj_[src].out;
  auto it = std::lower_bound(out.begin(), out.end(), dst);
  if (it != out.end() && *it == dst) return false;
  out.insert(it, dst);
  auto& in = adj_[dst].in;
  in.insert(std::lower_bound(in.begin(), in.end(), src), src);
  ++num_edges_;
  return true;
}

bool DirectedGraph::removeEdge(VertexId src, VertexId dst) {
  auto s = adj_.find(src);
  if (s == adj_.end()) return false;
  auto& out = s->second.out;
  auto it = std::lower_bound(out.begin(), out.end(), dst);
  if (it == out.end() || *it != dst) return false;
  out.erase(it);
  auto& in = adj_[dst].in;
  in.erase(std::lower_bound(in.begin(), in.end(), src));
  --num_edges_;
  return true;
}

bool DirectedGraph::hasEdge(VertexId src, VertexId dst) const {
  auto nbrs = out(src);
  return std::binary_search(nbrs.begin(), nbrs.end(), dst);
}

std::span<const VertexId> DirectedGraph::out(VertexId v) const {
  auto it = adj_.find(v);
  if (it == adj_.end()) return {};
  return it->second.out;
}

std::span<const VertexId> DirectedGraph::in(VertexId v) const {
  auto it = adj_.find(v);
  if (it == adj_.end()) return {};
  return it->second.in;
}

std::vector<VertexId> DirectedGraph::vertices() const {
  std::vector<VertexId> vs;
  vs.reserve(adj_.size());
  for (auto& [v, _] : adj_) vs.push_back(v);
  return vs;
}

std::vector<std::pair<VertexId, VertexId>> DirectedGraph::edgeList() const {
  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(num_edges_);
  for (auto& [v, a] : adj_) {
    for (VertexId w : a.out) edges.emplace_back(v, w);
  }
  return edges;
}

TotalOrder TotalOrder::degreeBased(const UndirectedGraph& g) {
  TotalOrder order;
  order.kind_ = Kind::kDegree;
  const size_t n = g.numVertices();
  std::vector<VertexId> by_rank(n);
  std::iota(by_rank.begin(), by_rank.end(), 0);
  // dense ids preserve original-id order, so ties on degree fall back to the id
  std::stable_sort(by_rank.begin(), by_rank.end(),
                   [&](VertexId a, VertexId b) { return g.degree(a) < g.degree(b); });
  order.rank_.resize(n);
  for (uint32_t r = 0; r < n; ++r) order.rank_[by_rank[r]] = r;
  return order;
}

UndirectedGraph loadUndirectedEdgeList(std::istream& in) {
  std::vector<std::pair<VertexId, VertexId>> raw;
  forEachEdgeLine(in, [&](VertexId u, VertexId v) { raw.emplace_back(u, v); });
  std::vector<VertexId> ids;
  ids.reserve(raw.size() * 2);
  for (auto [u, v] : raw) {
    ids.push_back(u);
    ids.push_back(v);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  auto dense = [&](VertexId v) { return static_cast<VertexId>(std::lower_bound(ids.begin(), ids.end(), v) - ids.begin()); };
  for (auto& [u, v] : raw) {
    u = dense(u);
    v = dense(v);
  }
  const size_t n = ids.size();
  return UndirectedGraph::fromEdges(n, std::move(raw), std::move(ids));
}

DirectedGraph loadDirectedEdgeList(std::istream& in) {
  DirectedGraph g;
  forEachEdgeLine(in, [&](VertexId u, VertexId v) {
    g.addVertex(u);
    g.addVertex(v);
    if (u != v) g.addEdge(u, v);
  });
  return g;
}

std::variant<UndirectedGraph, DirectedGraph> loadEdgeList(std::istream& in, bool directed) {
  if (directed) return loadDirectedEdgeList(in);
  return loadUndirectedEdgeList(in);
}

UndirectedGraph inducedSubgraph(const UndirectedGraph& g, const std::vector<VertexId>& vertices) {
  std::vector<VertexId> keep;
  for (VertexId v : vertices) {
    if (v < g.numVertices()) keep.push_back(v);
  }
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  std::unordered_map<VertexId, VertexId> local;
  std::vector<VertexId> original;
  for (VertexId v : keep) {
    local.emplace(v, static_cast<VertexId>(local.size()));
    original.push_back(g.originalId(v));
  }
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (VertexId v : keep) {
    for (VertexId w : g.neighbors(v)) {
      auto it = local.find(w);
      if (v < w && it != local.end()) edges.emplace_back(local[v], it->second);
    }
  }
  return UndirectedGraph::fromEdges(keep.size(), std::move(edges), std::move(original));
}

DirectedGraph inducedSubgraph(const DirectedGraph& g, const std::vector<VertexId>& vertices) {
  DirectedGraph sub;
  for (VertexId v : vertices) {
    if (g.hasVertex(v)) sub.addVertex(v);
  }
  for (VertexId v : sub.vertices()) {
    for (VertexId w : g.out(v)) {
      if (sub.hasVertex(w)) sub.addEdge(v, w);
    }
  }
  return sub;
}

}  // namespace kvmatch
