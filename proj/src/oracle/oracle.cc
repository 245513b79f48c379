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

#include "kvmatch/oracle.h"

#include <algorithm>
#include <functional>
#include <iterator>
#include <sstream>

namespace kvmatch::oracle {

std::string CanonicalSubgraph::toString() const {
  std::ostringstream os;
  os << "{";
  for (size_t i = 0; i < vertices.size(); ++i) os << (i ? "," : "") << vertices[i];
  os << "} [";
  for (size_t i = 0; i < edges.size(); ++i) os << (i ? " " : "") << edges[i].first << "-" << edges[i].second;
  os << "]";
  return os.str();
}

CanonicalSubgraph canonicalize(const PatternGraph& p, std::span<const VertexId> f) {
  CanonicalSubgraph c;
  c.vertices.assign(f.begin(), f.end());
  std::sort(c.vertices.begin(), c.vertices.end());
  for (const auto& e : p.edges()) {
    VertexId a = f[e.src], b = f[e.dst];
    if (!p.directed() && b < a) std::swap(a, b);
    c.edges.emplace_back(a, b);
  }
  std::sort(c.edges.begin(), c.edges.end());
  return c;
}

namespace {

/** First earlier pattern neighbor of u, or -1. */
int anchorOf(const PatternGraph& p, int u) {
  for (int w = 0; w < u; ++w) {
    if (p.adjacent(w, u)) return w;
  }
  return -1;
}

}  // namespace

SubgraphSet bruteForceEnumerate(const PatternGraph& p, const UndirectedGraph& g, size_t guard) {
  if (p.directed()) throw CapabilityError("undirected data graph needs an undirected pattern");
  if (g.numVertices() > guard) {
    throw CapabilityError("oracle refuses graphs with more than " + std::to_string(guard) + " vertices");
  }
  std::vector<VertexId> all(g.numVertices());
  for (VertexId v = 0; v < all.size(); ++v) all[v] = v;
  const int n = p.numVertices();
  SubgraphSet out;
  std::vector<VertexId> f(n, kInvalidVertex);
  std::function<void(int)> rec = [&](int u) {
    if (u == n) {
      out.insert(canonicalize(p, f));
      return;
    }
    const int anchor = anchorOf(p, u);
    std::span<const VertexId> cands = anchor < 0 ? std::span<const VertexId>(all) : g.neighbors(f[anchor]);
    for (VertexId x : cands) {
      bool ok = true;
      for (int w = 0; w < u && ok; ++w) {
        if (f[w] == x) ok = false;
        else if (p.adjacent(w, u) && !g.hasEdge(f[w], x)) ok = false;
      }
      if (!ok) continue;
      f[u] = x;
      rec(u + 1);
    }
    f[u] = kInvalidVertex;
  };
  rec(0);
  return out;
}

SubgraphSet bruteForceEnumerate(const PatternGraph& p, const DirectedGraph& g, size_t guard) {
  if (!p.directed()) throw CapabilityError("directed data graph needs a directed pattern");
  if (g.numVertices() > guard) {
    throw CapabilityError("oracle refuses graphs with more than " + std::to_string(guard) + " vertices");
  }
  const std::vector<VertexId> all = g.vertices();
  const int n = p.numVertices();
  SubgraphSet out;
  std::vector<VertexId> f(n, kInvalidVertex);
  std::function<void(int)> rec = [&](int u) {
    if (u == n) {
      out.insert(canonicalize(p, f));
      return;
    }
    std::span<const VertexId> cands = all;
    for (int w = 0; w < u; ++w) {
      if (p.hasArc(w, u)) {
        cands = g.out(f[w]);
        break;
      }
      if (p.hasArc(u, w)) {
        cands = g.in(f[w]);
        break;
      }
    }
    for (VertexId x : cands) {
      bool ok = true;
      for (int w = 0; w < u && ok; ++w) {
        if (f[w] == x) ok = false;
        else if (p.hasArc(w, u) && !g.hasEdge(f[w], x)) ok = false;
        else if (p.hasArc(u, w) && !g.hasEdge(x, f[w])) ok = false;
      }
      if (!ok) continue;
      f[u] = x;
      rec(u + 1);
    }
    f[u] = kInvalidVertex;
  };
  rec(0);
  return out;
}

IncrementalDiff bruteForceIncremental(const PatternGraph& p, const DirectedGraph& prev, const DirectedGraph& cur,
                                      size_t guard) {
  const SubgraphSet before = bruteForceEnumerate(p, prev, guard);
  const SubgraphSet after = bruteForceEnumerate(p, cur, guard);
  IncrementalDiff diff;
  std::set_difference(after.begin(), after.end(), before.begin(), before.end(),
                      std::inserter(diff.appearing, diff.appearing.end()));
  std::set_difference(before.begin(), before.end(), after.begin(), after.end(),
                      std::inserter(diff.disappearing, diff.disappearing.end()));
  return diff;
}

}  // namespace kvmatch::oracle
