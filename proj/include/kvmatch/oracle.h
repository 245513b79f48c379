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
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kvmatch/graph.h"
#include "kvmatch/pattern.h"

namespace kvmatch::oracle {

/** Data subgraph as sorted vertices plus sorted edges ((min,max) pairs when undirected). */
struct CanonicalSubgraph {
  std::vector<VertexId> vertices;
  std::vector<std::pair<VertexId, VertexId>> edges;

  auto operator<=>(const CanonicalSubgraph&) const = default;
  bool operator==(const CanonicalSubgraph&) const = default;
  std::string toString() const;
};

using SubgraphSet = std::set<CanonicalSubgraph>;

constexpr size_t kDefaultGuard = 1000;

/** Image of the mapping f (indexed by pattern vertex). */
CanonicalSubgraph canonicalize(const PatternGraph& p, std::span<const VertexId> f);

/** Every subgraph of g isomorphic to p, by plain injective backtracking. Throws CapabilityError above the guard. */
SubgraphSet bruteForceEnumerate(const PatternGraph& p, const UndirectedGraph& g, size_t guard = kDefaultGuard);
SubgraphSet bruteForceEnumerate(const PatternGraph& p, const DirectedGraph& g, size_t guard = kDefaultGuard);

struct IncrementalDiff {
  SubgraphSet appearing;
  SubgraphSet disappearing;
};
IncrementalDiff bruteForceIncremental(const PatternGraph& p, const DirectedGraph& prev, const DirectedGraph& cur,
                                      size_t guard = kDefaultGuard);

}  // namespace kvmatch::oracle
