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

namespace kvmatch {

/** perm[u] is the image of u. */
using Permutation = std::vector<PatternVertex>;

constexpr int kMaxAutomorphismVertices = 12;

/** All automorphisms of the pattern (arc-preserving when directed). Throws CapabilityError when n > 12. */
std::vector<Permutation> computeAutomorphisms(const PatternGraph& p);

/**
 * Orbit-fixing symmetry breaking: repeatedly anchor the vertex with the largest orbit (ties: higher degree, then
 * lower index), add anchor < w for every other orbit member and restrict to the anchor's stabilizer. The result is
 * transitively reduced and empty for asymmetric patterns.
 */
PartialOrder symmetryBreakingConditions(const PatternGraph& p);

}  // namespace kvmatch
