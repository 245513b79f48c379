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
#include <chrono>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <shared_mutex>
#include <span>
#include <variant>
#include <vector>

#include "kvmatch/common.h"
#include "kvmatch/graph.h"

namespace kvmatch {

using AdjacencyList = std::vector<VertexId>;

/** (op, w) entry of a delta adjacency set. */
struct DeltaEntry {
  bool insert;
  VertexId vertex;
  bool operator==(const DeltaEntry&) const = default;
};
/** Sorted by vertex; a vertex appears at most once. */
using DeltaList = std::vector<DeltaEntry>;

struct BatchValue {
  AdjacencyList adjacency;
  bool operator==(const BatchValue&) const = default;
};

/** Form 1: current adjacency pair with empty deltas. Form 2: previous pair plus the step's deltas. */
struct SnapshotQuad {
  AdjacencyList in_prev;
  AdjacencyList out_prev;
  DeltaList delta_in;
  DeltaList delta_out;
  bool isForm1() const { return delta_in.empty() && delta_out.empty(); }
  bool operator==(const SnapshotQuad&) const = default;
};

using StoredValue = std::variant<BatchValue, SnapshotQuad>;

constexpr size_t kBytesPerId = 8;
constexpr size_t kEntryOverheadBytes = 64;
size_t storedBytes(const StoredValue& value);

/** Keyed adjacency storage. Reads may run concurrently; writes happen only between enumeration phases. */
class GraphStore {
 public:
  virtual ~GraphStore() = default;
  virtual std::optional<StoredValue> get(VertexId key) const = 0;
  virtual void put(VertexId key, StoredValue value) = 0;
  virtual std::vector<VertexId> keys() const = 0;
  virtual size_t size() const = 0;
  virtual void clear() = 0;

  virtual std::vector<std::optional<StoredValue>> multiGet(std::span<const VertexId> keys) const;
  virtual void multiPut(std::vector<std::pair<VertexId, StoredValue>> entries);
};

/** Reference backend: ordered map behind a reader/writer lock, with optional per-query latency. */
class MemoryStore : public GraphStore {
 public:
  explicit MemoryStore(std::chrono::microseconds latency = std::chrono::microseconds(0)) : latency_(latency) {}

  std::optional<StoredValue> get(VertexId key) const override;
  void put(VertexId key, StoredValue value) override;
  std::vector<VertexId> keys() const override;
  size_t size() const override;
  void clear() override;

  uint64_t reads() const { return reads_.load(); }
  uint64_t writes() const { return writes_.load(); }
  /** Test hook: writes to `key` fail with StoreError. */
  void failWritesFor(VertexId key);

 private:
  void delay() const;

  std::chrono::microseconds latency_;
  mutable std::shared_mutex mu_;
  std::map<VertexId, StoredValue> data_;
  std::set<VertexId> failing_;
  mutable std::atomic<uint64_t> reads_{0};
  std::atomic<uint64_t> writes_{0};
};

struct DeltaSets {
  DeltaList in;
  DeltaList out;
  bool operator==(const DeltaSets&) const = default;
};
using DeltaMap = std::map<VertexId, DeltaSets>;

/** One key per vertex (dense ids), value = sorted neighbor list. */
void storeBatchGraph(const UndirectedGraph& g, GraphStore& store);
/** One form-1 quad per vertex of g, keyed by vertex id. */
void storeSnapshot(const DirectedGraph& g, GraphStore& store);
/** Rewrites exactly the keys of `deltas` to form 2. Returns the number of writes. */
size_t applyDeltaSets(GraphStore& store, const DeltaMap& deltas);
/** Folds the deltas of the touched keys back into form 1. Returns the number of writes. */
size_t mergePostStep(GraphStore& store, const DeltaMap& deltas);

/** Sorted prev list with `delta` applied; throws ConsistencyError naming the offending edge. */
AdjacencyList applyDelta(const AdjacencyList& prev, const DeltaList& delta, VertexId key, bool outgoing);

/** Text dump: "B key : ids" or "Q key | in_prev | out_prev | delta_in | delta_out" per key, ascending. */
void dumpStore(const GraphStore& store, std::ostream& out);
void loadStore(std::istream& in, GraphStore& store);

}  // namespace kvmatch
