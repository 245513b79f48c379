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

#include "kvmatch/set_ops.h"

#include <algorithm>

namespace kvmatch {

namespace {

/** First index in [lo, a.size()) with a[idx] >= v, probing 1, 2, 4, ... ahead of lo. */
size_t gallop(std::span<const VertexId> a, size_t lo, VertexId v) {
  size_t step = 1, hi = lo;
  while (hi < a.size() && a[hi] < v) {
    lo = hi + 1;
    hi += step;
    step <<= 1;
  }
  hi = std::min(hi, a.size());
  return static_cast<size_t>(std::lower_bound(a.begin() + lo, a.begin() + hi, v) - a.begin());
}

}  // namespace

void intersectSorted(std::span<const VertexId> a, std::span<const VertexId> b, std::vector<VertexId>& out) {
  out.clear();
  if (a.empty() || b.empty()) return;
  if (a.size() > b.size()) std::swap(a, b);
  if (a.size() * kGallopRatio <= b.size()) {
    size_t pos = 0;
    for (VertexId v : a) {
      pos = gallop(b, pos, v);
      if (pos == b.size()) break;
      if (b[pos] == v) out.push_back(v);
    }
    return;
  }
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      out.push_back(a[i]);
      ++i;
      ++j;
    }
  }
}

bool containsSorted(std::span<const VertexId> a, VertexId v) { return std::binary_search(a.begin(), a.end(), v); }

}  // namespace kvmatch
