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
#include <random>
#include <vector>

#include "kvmatch/graph.h"
#include "kvmatch/pattern.h"
#include "kvmatch/streaming.h"

namespace kvmatch {

/** G(N, M) with M = round(N * mean_degree / 2) distinct edges drawn uniformly. */
UndirectedGraph erdosRenyiGraph(size_t num_vertices, double mean_degree, uint64_t seed);
/** Erdos-Renyi graph plus vertex 0 joined to `hub_degree` distinct random vertices. */
UndirectedGraph hubGraph(size_t num_vertices, double mean_degree, size_t hub_degree, uint64_t seed);
/** Vertices 0..N-1 with `num_arcs` distinct random arcs (no self-loops). */
DirectedGraph randomDirectedGraph(size_t num_vertices, size_t num_arcs, uint64_t seed);
/**
 * Valid batch of `size` distinct edge updates over vertices 0..N-1: deletions of present arcs and insertions of
 * absent ones, each op an insertion with probability `insert_fraction` when both kinds are available.
 */
UpdateBatch randomUpdateBatch(const DirectedGraph& g, size_t num_vertices, size_t size, double insert_fraction,
                              std::mt19937_64& rng);
/** One representative per isomorphism class of connected undirected graphs on n vertices (n <= 6). */
std::vector<PatternGraph> allConnectedPatterns(int n);

}  // namespace kvmatch
