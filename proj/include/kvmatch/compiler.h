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

#include <string>
#include <vector>

#include "kvmatch/incremental.h"
#include "kvmatch/pattern.h"
#include "kvmatch/plan.h"

namespace kvmatch {

/** Smallest k such that the first k vertices of the order cover every pattern edge. */
int vertexCoverPrefix(const PatternGraph& p, const std::vector<PatternVertex>& order);

/**
 * Raw batch plan for (P, O) under the given partial order. With `pin_compressed_outputs`, the C sets of vertices
 * outside the cover prefix survive uni-operand elimination so a later VCBC pass can report them.
 */
ExecutionPlan generateRawPlan(const PatternGraph& p, const std::vector<PatternVertex>& order,
                              const PartialOrder& partial_order, bool pin_compressed_outputs = false);
ExecutionPlan generateRawPlan(const PatternGraph& p, const std::vector<PatternVertex>& order);

/** Raw incremental plan; the order must start with the endpoints of the delta edge. */
ExecutionPlan generateIncrementalRawPlan(const IncrementalPatternGraph& dp, const std::vector<PatternVertex>& order,
                                         const PartialOrder& partial_order);
ExecutionPlan generateIncrementalRawPlan(const IncrementalPatternGraph& dp, const std::vector<PatternVertex>& order);

/** Removes filterless single-operand INTs (except pinned targets) and substitutes their operand. */
ExecutionPlan eliminateUniOperand(ExecutionPlan plan);
ExecutionPlan eliminateCommonSubexpressions(ExecutionPlan plan, int max_subset_size = 0);
ExecutionPlan reorderInstructions(ExecutionPlan plan);
/**
 * Rewrites filterless Intersect(A_i, A_j) to TCache when one of f_i, f_j is the start vertex and u_i, u_j are
 * adjacent in P. Batch plans only; incremental plans are returned unchanged.
 */
ExecutionPlan applyTriangleCache(ExecutionPlan plan, const PatternGraph& p);
ExecutionPlan applyVcbc(ExecutionPlan plan, const PatternGraph& p);

struct PipelineOptions {
  bool cse = true;
  bool reorder = true;
  bool triangle_cache = true;
  bool vcbc = false;
};

/** raw -> CSE -> reorder -> TRC (batch) -> VCBC, each stage switchable. */
ExecutionPlan optimizePlan(const PatternGraph& p, const std::vector<PatternVertex>& order,
                           const PipelineOptions& options = {});
ExecutionPlan optimizeIncrementalPlan(const IncrementalPatternGraph& dp, const std::vector<PatternVertex>& order,
                                      const PipelineOptions& options = {});

/** Empty when the plan is well formed. `p` enables the checks that need the pattern. */
std::vector<std::string> validatePlan(const ExecutionPlan& plan, const PatternGraph* p = nullptr);
/** Throws ValidationError carrying the diagnostics. */
void requireValidPlan(const ExecutionPlan& plan, const PatternGraph* p = nullptr);

}  // namespace kvmatch
