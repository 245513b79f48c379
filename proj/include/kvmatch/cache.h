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

#include <atomic>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "kvmatch/plan.h"
#include "kvmatch/store.h"

namespace kvmatch {

/** Plain snapshot of CommMetrics. */
struct CommCounters {
  uint64_t dbq_issued = 0;
  uint64_t backend_queries = 0;
  uint64_t cache_hits = 0;
  uint64_t bytes_fetched = 0;
  double hitRate() const { return dbq_issued == 0 ? 0.0 : static_cast<double>(cache_hits) / dbq_issued; }
  std::string toString() const;
};

class CommMetrics {
 public:
  void recordHit() {
    dbq_issued_.fetch_add(1, std::memory_order_relaxed);
    cache_hits_.fetch_add(1, std::memory_order_relaxed);
  }
  void recordMiss(size_t bytes) {
    dbq_issued_.fetch_add(1, std::memory_order_relaxed);
    backend_queries_.fetch_add(1, std::memory_order_relaxed);
    bytes_fetched_.fetch_add(bytes, std::memory_order_relaxed);
  }
  CommCounters snapshot() const;
  void reset();

 private:
  std::atomic<uint64_t> dbq_issued_{0};
  std::atomic<uint64_t> backend_queries_{0};
  std::atomic<uint64_t> cache_hits_{0};
  std::atomic<uint64_t> bytes_fetched_{0};
};

/** Adjacency list with a per-neighbor delta flag. */
struct FlaggedList {
  AdjacencyList ids;
  std::vector<uint8_t> flags;
};

/** Streaming cache entry for one vertex at step `step`. */
struct StreamEntry {
  uint64_t step = 0;
  FlaggedList in_prev, out_prev, in_cur, out_cur;
  /** Raw delta sets; flag 1 marks an insertion. */
  FlaggedList delta_in, delta_out;

  static StreamEntry build(VertexId key, const SnapshotQuad& quad, uint64_t step);
  size_t bytes() const;
};

/** Bounded LRU cache shared by all workers. */
class AdjacencyCache {
 public:
  explicit AdjacencyCache(size_t capacity_bytes) : capacity_(capacity_bytes) {}

  std::shared_ptr<const AdjacencyList> lookupBatch(VertexId key);
  void insertBatch(VertexId key, std::shared_ptr<const AdjacencyList> value);
  /** Hit only when the cached entry belongs to `step`. */
  std::shared_ptr<const StreamEntry> lookupStream(VertexId key, uint64_t step);
  void insertStream(VertexId key, std::shared_ptr<const StreamEntry> value);

  size_t capacity() const { return capacity_; }
  size_t retainedBytes() const;
  size_t size() const;
  uint64_t evictions() const;
  void clear();

 private:
  using Value = std::variant<std::shared_ptr<const AdjacencyList>, std::shared_ptr<const StreamEntry>>;
  struct Slot {
    Value value;
    size_t bytes;
    std::list<VertexId>::iterator lru;
  };
  const Slot* touch(VertexId key);
  void insert(VertexId key, Value value, size_t bytes);

  size_t capacity_;
  mutable std::mutex mu_;
  std::list<VertexId> lru_;  // front = most recent
  std::unordered_map<VertexId, Slot> slots_;
  size_t retained_ = 0;
  uint64_t evictions_ = 0;
};

size_t batchEntryBytes(size_t degree);
/** Bytes needed to cache every vertex of g. */
size_t graphCacheBytes(const UndirectedGraph& g);
size_t graphCacheBytes(const DirectedGraph& g);

/** Batch DBQ. `cache` may be null. */
std::shared_ptr<const AdjacencyList> cachedGet(VertexId v, AdjacencyCache* cache, const GraphStore& store,
                                               CommMetrics& metrics);

/** Result of a streaming DBQ: ids plus, for (delta, *), the insertion flags. */
struct StreamAdjacency {
  std::shared_ptr<const AdjacencyList> ids;
  std::shared_ptr<const std::vector<uint8_t>> inserted;
};

/** Streaming DBQ; `op` is kPlus (G'_t) or kMinus (G'_{t-1}), or kStar with type kDelta for the raw delta set. */
StreamAdjacency cachedGet(VertexId v, EdgeType type, Direction dir, DbqOp op, uint64_t step, AdjacencyCache* cache,
                          const GraphStore& store, CommMetrics& metrics);

}  // namespace kvmatch
