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

#include "kvmatch/symmetry.h"

#include <algorithm>
#include <bit>

namespace kvmatch {

namespace {

bool consistent(const PatternGraph& p, const Permutation& perm, PatternVertex u) {
  for (PatternVertex v = 0; v <= u; ++v) {
    if (p.hasArc(u, v) != p.hasArc(perm[u], perm[v])) return false;
    if (p.hasArc(v, u) != p.hasArc(perm[v], perm[u])) return false;
  }
  return true;
}

void extend(const PatternGraph& p, Permutation& perm, uint32_t used, PatternVertex u,
            std::vector<Permutation>& out) {
  const int n = p.numVertices();
  if (u == n) {
    out.push_back(perm);
    return;
  }
  for (PatternVertex image = 0; image < n; ++image) {
    if (used >> image & 1u) continue;
    if (p.degree(image) != p.degree(u)) continue;
    perm[u] = image;
    if (consistent(p, perm, u)) extend(p, perm, used | 1u << image, u + 1, out);
  }
}

}  // namespace

std::vector<Permutation> computeAutomorphisms(const PatternGraph& p) {
  if (p.numVertices() > kMaxAutomorphismVertices) {
    throw CapabilityError("automorphism search supports at most " + std::to_string(kMaxAutomorphismVertices) +
                          " pattern vertices");
  }
  std::vector<Permutation> result;
  Permutation perm(p.numVertices());
  extend(p, perm, 0, 0, result);
  return result;
}

PartialOrder symmetryBreakingConditions(const PatternGraph& p) {
  const int n = p.numVertices();
  std::vector<Permutation> group = computeAutomorphisms(p);
  std::vector<OrderConstraint> constraints;
  while (group.size() > 1) {
    std::vector<uint32_t> orbit(n, 0);
    for (auto& perm : group) {
      for (PatternVertex u = 0; u < n; ++u) orbit[u] |= 1u << perm[u];
    }
    PatternVertex anchor = -1;
    for (PatternVertex u = 0; u < n; ++u) {
      if (std::popcount(orbit[u]) < 2) continue;
      if (anchor < 0 || std::popcount(orbit[u]) > std::popcount(orbit[anchor]) ||
          (std::popcount(orbit[u]) == std::popcount(orbit[anchor]) && p.degree(u) > p.degree(anchor))) {
        anchor = u;
      }
    }
    for (PatternVertex w = 0; w < n; ++w) {
      if (w != anchor && (orbit[anchor] >> w & 1u)) constraints.push_back({anchor, w});
    }
    std::erase_if(group, [&](const Permutation& perm) { return perm[anchor] != anchor; });
  }
  return PartialOrder(n, std::move(constraints)).reduced();
}

}  // namespace kvmatch
