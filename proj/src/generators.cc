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

#include "kvmatch/generators.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace kvmatch {

namespace {

std::vector<std::pair<VertexId, VertexId>> sampleEdges(size_t n, size_t m, std::mt19937_64& rng,
                                                       std::set<std::pair<VertexId, VertexId>>& seen) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n - 1));
  while (edges.size() < m) {
    VertexId a = pick(rng), b = pick(rng);
    if (a == b) continue;
    if (b < a) std::swap(a, b);
    if (seen.emplace(a, b).second) edges.emplace_back(a, b);
  }
  return edges;
}

}  // namespace

UndirectedGraph erdosRenyiGraph(size_t num_vertices, double mean_degree, uint64_t seed) {
  const size_t n = num_vertices;
  const size_t max_edges = n < 2 ? 0 : n * (n - 1) / 2;
  const size_t m = std::min(max_edges, static_cast<size_t>(std::llround(static_cast<double>(n) * mean_degree / 2)));
  std::mt19937_64 rng(seed);
  std::set<std::pair<VertexId, VertexId>> seen;
  return UndirectedGraph::fromEdges(n, sampleEdges(n, m, rng, seen));
}

UndirectedGraph hubGraph(size_t num_vertices, double mean_degree, size_t hub_degree, uint64_t seed) {
  const size_t n = num_vertices;
  if (hub_degree + 1 > n) throw ValidationError("hub degree exceeds the vertex count");
  std::mt19937_64 rng(seed);
  std::set<std::pair<VertexId, VertexId>> seen;
  const size_t m = static_cast<size_t>(std::llround(static_cast<double>(n) * mean_degree / 2));
  auto edges = sampleEdges(n, std::min(m, n * (n - 1) / 2), rng, seen);
  std::vector<VertexId> others(n - 1);
  std::iota(others.begin(), others.end(), 1);
  std::shuffle(others.begin(), others.end(), rng);
  for (size_t i = 0; i < hub_degree; ++i) {
    if (seen.emplace(0, others[i]).second) edges.emplace_back(0, others[i]);
  }
  return UndirectedGraph::fromEdges(n, edges);
}

DirectedGraph randomDirectedGraph(size_t num_vertices, size_t num_arcs, uint64_t seed) {
  const size_t n = num_vertices;
  if (n < 2 && num_arcs > 0) throw ValidationError("need two vertices for an arc");
  num_arcs = std::min(num_arcs, n * (n - 1));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n - 1));
  DirectedGraph g;
  for (VertexId v = 0; v < n; ++v) g.addVertex(v);
  while (g.numEdges() < num_arcs) {
    VertexId a = pick(rng), b = pick(rng);
    if (a != b) g.addEdge(a, b);
  }
  return g;
}

UpdateBatch randomUpdateBatch(const DirectedGraph& g, size_t num_vertices, size_t size, double insert_fraction,
                              std::mt19937_64& rng) {
  const size_t n = num_vertices;
  auto present = g.edgeList();
  std::shuffle(present.begin(), present.end(), rng);
  const size_t absent_total = n * (n - 1) - g.numEdges();
  std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n - 1));
  std::bernoulli_distribution coin(insert_fraction);
  std::set<std::pair<VertexId, VertexId>> used;
  UpdateBatch batch;
  size_t next_delete = 0, inserts = 0;
  while (batch.size() < size) {
    const bool can_delete = next_delete < present.size();
    const bool can_insert = inserts < absent_total;
    if (!can_delete && !can_insert) break;
    const bool insert = can_insert && (!can_delete || coin(rng));
    if (!insert) {
      auto [a, b] = present[next_delete++];
      used.emplace(a, b);
      batch.push_back({false, a, b});
      continue;
    }
    VertexId a = pick(rng), b = pick(rng);
    if (a == b || g.hasEdge(a, b) || !used.emplace(a, b).second) continue;
    ++inserts;
    batch.push_back({true, a, b});
  }
  return batch;
}

std::vector<PatternGraph> allConnectedPatterns(int n) {
  if (n < 1 || n > 6) throw CapabilityError("pattern catalogue covers 1..6 vertices");
  std::vector<std::pair<int, int>> slots;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) slots.emplace_back(a, b);
  }
  std::vector<int> perm(n);
  std::set<uint32_t> seen;
  std::vector<PatternGraph> out;
  for (uint32_t mask = 0; mask < (1u << slots.size()); ++mask) {
    // canonical code: smallest edge mask over all relabelings
    uint32_t best = ~0u;
    std::iota(perm.begin(), perm.end(), 0);
    do {
      uint32_t code = 0;
      for (size_t k = 0; k < slots.size(); ++k) {
        if (!(mask >> k & 1u)) continue;
        int a = perm[slots[k].first], b = perm[slots[k].second];
        if (a > b) std::swap(a, b);
        size_t idx = std::find(slots.begin(), slots.end(), std::make_pair(a, b)) - slots.begin();
        code |= 1u << idx;
      }
      best = std::min(best, code);
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (!seen.insert(best).second) continue;
    std::vector<PatternEdge> edges;
    for (size_t k = 0; k < slots.size(); ++k) {
      if (mask >> k & 1u) edges.push_back({slots[k].first, slots[k].second});
    }
    try {
      out.emplace_back(n, std::move(edges), false);
    } catch (const ValidationError&) {
      // disconnected
    }
  }
  return out;
}

}  // namespace kvmatch
