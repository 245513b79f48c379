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

#include <fstream>
#include <sstream>
#include <string>

#include "kvmatch/graph.h"
#include "kvmatch/pattern.h"

namespace kvmatch::testing {

inline std::string fixturePath(const std::string& name) { return std::string(KVMATCH_FIXTURES) + "/" + name; }

inline PatternGraph loadPatternFixture(const std::string& name) {
  std::ifstream in(fixturePath(name));
  return parsePattern(in);
}

/** Fig. 2b toy graph; original ids 1..8 map to dense ids 0..7. */
inline UndirectedGraph toyGraph() {
  std::ifstream in(fixturePath("toy_graph.txt"));
  return loadUndirectedEdgeList(in);
}

inline UndirectedGraph undirectedFromText(const std::string& text) {
  std::istringstream in(text);
  return loadUndirectedEdgeList(in);
}

inline DirectedGraph directedFromText(const std::string& text) {
  std::istringstream in(text);
  return loadDirectedEdgeList(in);
}

inline UndirectedGraph completeGraph(size_t n) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (VertexId a = 0; a < n; ++a) {
    for (VertexId b = a + 1; b < n; ++b) edges.emplace_back(a, b);
  }
  return UndirectedGraph::fromEdges(n, std::move(edges));
}

}  // namespace kvmatch::testing
