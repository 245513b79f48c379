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

#include <vector>

#include "kvmatch/pattern.h"
#include "kvmatch/plan.h"

namespace kvmatch {

/** Pattern graph whose i-th edge must map to a delta edge, earlier edges to any edge, later ones to unaltered. */
struct IncrementalPatternGraph {
  PatternGraph base;
  int i = 0;
  std::vector<EdgeType> tau;  // tau[k-1] types edge e_k

  EdgeType type(int edge_id) const { return tau.at(edge_id - 1); }
  const PatternEdge& deltaEdge() const { return base.edge(i); }
};

/** Requires a directed pattern; 1 <= i <= m. */
IncrementalPatternGraph incrementalPatternGraph(const PatternGraph& p, int i);
std::vector<IncrementalPatternGraph> incrementalPatternGraphs(const PatternGraph& p);

}  // namespace kvmatch
