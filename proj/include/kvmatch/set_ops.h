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

#include <span>
#include <vector>

#include "kvmatch/common.h"

namespace kvmatch {

/** Size ratio above which intersection switches from a linear merge to galloping search. */
constexpr size_t kGallopRatio = 32;

/** out = a ∩ b for sorted, duplicate-free inputs. `out` is cleared first and must not alias an input. */
void intersectSorted(std::span<const VertexId> a, std::span<const VertexId> b, std::vector<VertexId>& out);
bool containsSorted(std::span<const VertexId> a, VertexId v);

}  // namespace kvmatch
