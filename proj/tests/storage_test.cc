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

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "kvmatch/cache.h"
#include "kvmatch/engine.h"
#include "kvmatch/generators.h"
#include "kvmatch/set_ops.h"
#include "kvmatch/store.h"
#include "kvmatch/streaming.h"
#include "test_util.h"

namespace kvmatch {
namespace {

DeltaEntry plus(VertexId v) { return {true, v}; }
DeltaEntry minus(VertexId v) { return {false, v}; }

AdjacencyList batchValue(const GraphStore& store, VertexId key) {
  auto value = store.get(key);
  EXPECT_TRUE(value.has_value());
  return std::get<BatchValue>(*value).adjacency;
}

UpdateStream fig6Stream() {
  std::ifstream in(testing::fixturePath("ffl_stream.txt"));
  return parseUpdateStream(in);
}

TEST(BatchStoreTest, TriangleHasThreeKeys) {
  MemoryStore store;
  storeBatchGraph(testing::undirectedFromText("0 1\n1 2\n2 0\n"), store);
  EXPECT_EQ(store.size(), 3u);
  for (VertexId v = 0; v < 3; ++v) EXPECT_EQ(batchValue(store, v).size(), 2u);
}

TEST(BatchStoreTest, EmptyGraphHasNoKeys) {
  MemoryStore store;
  storeBatchGraph(UndirectedGraph(), store);
  EXPECT_EQ(store.size(), 0u);
}

TEST(BatchStoreTest, ToyGraphV1) {
  UndirectedGraph g = testing::toyGraph();
  MemoryStore store;
  storeBatchGraph(g, store);
  std::vector<VertexId> original;
  for (VertexId v : batchValue(store, 0)) original.push_back(g.originalId(v));
  EXPECT_EQ(original, (std::vector<VertexId>{2, 3, 4, 5, 7, 8}));
}

TEST(BatchStoreTest, WriteFailureNamesKey) {
  MemoryStore store;
  store.failWritesFor(1);
  try {
    storeBatchGraph(testing::undirectedFromText("0 1\n1 2\n"), store);
    FAIL() << "expected StoreError";
  } catch (const StoreError& e) {
    EXPECT_EQ(e.key(), 1u);
    EXPECT_NE(std::string(e.what()).find("key 1"), std::string::npos);
  }
}

TEST(SnapshotStoreTest, StoreSnapshotIsForm1) {
  MemoryStore store;
  storeSnapshot(testing::directedFromText("1 2\n2 3\n3 1\n1 3\n"), store);
  ASSERT_EQ(store.size(), 3u);
  auto q = std::get<SnapshotQuad>(*store.get(1));
  EXPECT_TRUE(q.isForm1());
  EXPECT_EQ(q.out_prev, (AdjacencyList{2, 3}));
  EXPECT_EQ(q.in_prev, (AdjacencyList{3}));
}

TEST(DeltaSetsTest, TwoOfThousandWrites) {
  DirectedGraph g = randomDirectedGraph(1000, 3000, 4);
  MemoryStore store;
  storeSnapshot(g, store);
  VertexId a = 0, b = 1;
  while (g.hasEdge(a, b)) ++b;
  UpdateBatch batch = {{true, a, b}};
  const uint64_t before = store.writes();
  EXPECT_EQ(applyDeltaSets(store, deltaAdjacencySets(batch)), 2u);
  EXPECT_EQ(store.writes() - before, 2u);
  EXPECT_FALSE(std::get<SnapshotQuad>(*store.get(a)).isForm1());
  EXPECT_TRUE(std::get<SnapshotQuad>(*store.get(b + 1)).isForm1());
}

TEST(DeltaSetsTest, EmptyDeltaNoWrites) {
  MemoryStore store;
  storeSnapshot(testing::directedFromText("1 2\n"), store);
  EXPECT_EQ(applyDeltaSets(store, {}), 0u);
  EXPECT_EQ(mergePostStep(store, {}), 0u);
}

TEST(DeltaSetsTest, Fig6StepTwoOutDeltaOfV1) {
  UpdateStream s = fig6Stream();
  ASSERT_EQ(s.steps.size(), 2u);
  DirectedGraph g = s.initial;
  applyUpdateBatch(g, s.steps[0]);
  MemoryStore store;
  storeSnapshot(g, store);
  applyDeltaSets(store, deltaAdjacencySets(s.steps[1]));
  auto q = std::get<SnapshotQuad>(*store.get(1));
  EXPECT_EQ(q.delta_out, (DeltaList{minus(2), minus(3), plus(4)}));
  EXPECT_EQ(q.out_prev, (AdjacencyList{2, 3, 5, 6, 7, 8}));
}

TEST(DeltaSetsTest, ConsistencyErrors) {
  MemoryStore store;
  storeSnapshot(testing::directedFromText("1 2\n2 3\n"), store);
  DeltaMap absent;
  absent[1].out = {minus(3)};
  absent[3].in = {minus(1)};
  try {
    applyDeltaSets(store, absent);
    FAIL() << "expected ConsistencyError";
  } catch (const ConsistencyError& e) {
    EXPECT_NE(std::string(e.what()).find("1"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("3"), std::string::npos);
  }
  DeltaMap existing;
  existing[1].out = {plus(2)};
  EXPECT_THROW(applyDeltaSets(store, existing), ConsistencyError);
  DeltaMap ok;
  ok[1].out = {plus(3)};
  ok[3].in = {plus(1)};
  applyDeltaSets(store, ok);
  EXPECT_THROW(applyDeltaSets(store, ok), ConsistencyError);  // already form 2
}

TEST(MergeTest, SetAlgebra) {
  EXPECT_EQ(applyDelta({2, 3}, {minus(2), plus(4)}, 1, true), (AdjacencyList{3, 4}));
  EXPECT_EQ(applyDelta({}, {plus(9), plus(4), plus(6)}, 1, true), (AdjacencyList{4, 6, 9}));
  EXPECT_THROW(applyDelta({2}, {minus(5)}, 1, true), ConsistencyError);
}

TEST(MergeTest, Fig6SnapshotsEvolve) {
  UpdateStream s = fig6Stream();
  DirectedGraph g = s.initial;
  MemoryStore store;
  storeSnapshot(g, store);
  for (const auto& batch : s.steps) {
    const DeltaMap deltas = deltaAdjacencySets(batch);
    applyDeltaSets(store, deltas);
    EXPECT_EQ(mergePostStep(store, deltas), deltas.size());
    applyUpdateBatch(g, batch);
    MemoryStore direct;
    storeSnapshot(g, direct);
    std::ostringstream a, b;
    dumpStore(store, a);
    dumpStore(direct, b);
    EXPECT_EQ(a.str(), b.str());
    for (VertexId key : store.keys()) EXPECT_TRUE(std::get<SnapshotQuad>(*store.get(key)).isForm1());
  }
  EXPECT_TRUE(g.hasEdge(1, 4));
  EXPECT_FALSE(g.hasEdge(1, 2));
  EXPECT_EQ(g.numEdges(), 14u);
}

TEST(DumpLoadTest, RoundTrip) {
  UpdateStream s = fig6Stream();
  MemoryStore store;
  storeSnapshot(s.initial, store);
  applyDeltaSets(store, deltaAdjacencySets(s.steps[0]));
  std::ostringstream dumped;
  dumpStore(store, dumped);
  MemoryStore loaded;
  std::istringstream in(dumped.str());
  loadStore(in, loaded);
  std::ostringstream again;
  dumpStore(loaded, again);
  EXPECT_EQ(dumped.str(), again.str());

  MemoryStore batch;
  storeBatchGraph(testing::toyGraph(), batch);
  std::ostringstream b1;
  dumpStore(batch, b1);
  MemoryStore batch2;
  std::istringstream bin(b1.str());
  loadStore(bin, batch2);
  EXPECT_EQ(batchValue(batch2, 0), batchValue(batch, 0));

  std::istringstream bad("X 1 : 2\n");
  EXPECT_THROW(loadStore(bad, loaded), ParseError);
}

TEST(CacheTest, SecondGetIsHit) {
  MemoryStore store;
  storeBatchGraph(testing::undirectedFromText("0 1\n1 2\n2 0\n"), store);
  AdjacencyCache cache(kUnboundedCache);
  CommMetrics metrics;
  auto a = cachedGet(1, &cache, store, metrics);
  auto b = cachedGet(1, &cache, store, metrics);
  EXPECT_EQ(*a, *b);
  CommCounters c = metrics.snapshot();
  EXPECT_EQ(c.backend_queries, 1u);
  EXPECT_EQ(c.cache_hits, 1u);
  EXPECT_EQ(c.dbq_issued, 2u);
  EXPECT_EQ(c.bytes_fetched, kEntryOverheadBytes + 2 * kBytesPerId);
}

TEST(CacheTest, MissingKeyIsEmpty) {
  MemoryStore store;
  CommMetrics metrics;
  EXPECT_TRUE(cachedGet(42, nullptr, store, metrics)->empty());
  EXPECT_EQ(metrics.snapshot().backend_queries, 1u);
}

TEST(CacheTest, StaleStepMisses) {
  MemoryStore store;
  storeSnapshot(testing::directedFromText("1 2\n"), store);
  AdjacencyCache cache(kUnboundedCache);
  CommMetrics metrics;
  cachedGet(1, EdgeType::kEither, Direction::kOut, DbqOp::kPlus, 1, &cache, store, metrics);
  cachedGet(1, EdgeType::kEither, Direction::kOut, DbqOp::kPlus, 1, &cache, store, metrics);
  EXPECT_EQ(metrics.snapshot().backend_queries, 1u);
  cachedGet(1, EdgeType::kEither, Direction::kOut, DbqOp::kPlus, 2, &cache, store, metrics);
  EXPECT_EQ(metrics.snapshot().backend_queries, 2u);
  EXPECT_EQ(metrics.snapshot().cache_hits, 1u);
}

TEST(CacheTest, Fig6CandidateIsV6) {
  UpdateStream s = fig6Stream();
  DirectedGraph g = s.initial;
  applyUpdateBatch(g, s.steps[0]);
  MemoryStore store;
  storeSnapshot(g, store);
  applyDeltaSets(store, deltaAdjacencySets(s.steps[1]));
  AdjacencyCache cache(kUnboundedCache);
  CommMetrics metrics;
  auto out1 = cachedGet(1, EdgeType::kEither, Direction::kOut, DbqOp::kPlus, 2, &cache, store, metrics);
  auto in4 = cachedGet(4, EdgeType::kUnaltered, Direction::kIn, DbqOp::kPlus, 2, &cache, store, metrics);
  AdjacencyList result;
  intersectSorted(*out1.ids, *in4.ids, result);
  EXPECT_EQ(result, (AdjacencyList{6}));
}

TEST(CacheTest, TypeAndOpSelection) {
  UpdateStream s = fig6Stream();
  DirectedGraph g = s.initial;
  applyUpdateBatch(g, s.steps[0]);
  MemoryStore store;
  storeSnapshot(g, store);
  applyDeltaSets(store, deltaAdjacencySets(s.steps[1]));
  CommMetrics metrics;
  auto get = [&](EdgeType type, DbqOp op) {
    return *cachedGet(1, type, Direction::kOut, op, 2, nullptr, store, metrics).ids;
  };
  EXPECT_EQ(get(EdgeType::kEither, DbqOp::kMinus), (AdjacencyList{2, 3, 5, 6, 7, 8}));
  EXPECT_EQ(get(EdgeType::kEither, DbqOp::kPlus), (AdjacencyList{4, 5, 6, 7, 8}));
  EXPECT_EQ(get(EdgeType::kDelta, DbqOp::kMinus), (AdjacencyList{2, 3}));
  EXPECT_EQ(get(EdgeType::kDelta, DbqOp::kPlus), (AdjacencyList{4}));
  EXPECT_EQ(get(EdgeType::kUnaltered, DbqOp::kPlus), (AdjacencyList{5, 6, 7, 8}));
  auto raw = cachedGet(1, EdgeType::kDelta, Direction::kOut, DbqOp::kStar, 2, nullptr, store, metrics);
  EXPECT_EQ(*raw.ids, (AdjacencyList{2, 3, 4}));
  EXPECT_EQ(*raw.inserted, (std::vector<uint8_t>{0, 0, 1}));
}

TEST(CacheTest, LruRespectsCapacity) {
  const size_t entry = batchEntryBytes(2);
  AdjacencyCache cache(3 * entry);
  auto list = std::make_shared<const AdjacencyList>(AdjacencyList{1, 2});
  for (VertexId k = 0; k < 3; ++k) cache.insertBatch(k, list);
  EXPECT_TRUE(cache.lookupBatch(0));  // 0 becomes most recent
  cache.insertBatch(3, list);
  EXPECT_LE(cache.retainedBytes(), cache.capacity());
  EXPECT_FALSE(cache.lookupBatch(1));
  EXPECT_TRUE(cache.lookupBatch(0));
  EXPECT_TRUE(cache.lookupBatch(2));
  EXPECT_TRUE(cache.lookupBatch(3));
  EXPECT_EQ(cache.evictions(), 1u);
  // Larger than the whole budget: not retained.
  cache.insertBatch(9, std::make_shared<const AdjacencyList>(AdjacencyList(100, 1)));
  EXPECT_FALSE(cache.lookupBatch(9));
  EXPECT_LE(cache.retainedBytes(), cache.capacity());
}

TEST(CacheTest, BoundHoldsUnderRandomAccess) {
  UndirectedGraph g = erdosRenyiGraph(200, 6, 2);
  MemoryStore store;
  storeBatchGraph(g, store);
  AdjacencyCache cache(graphCacheBytes(g) / 5);
  CommMetrics metrics;
  std::mt19937_64 rng(3);
  for (int k = 0; k < 5000; ++k) {
    cachedGet(static_cast<VertexId>(rng() % 200), &cache, store, metrics);
    ASSERT_LE(cache.retainedBytes(), cache.capacity());
  }
  CommCounters c = metrics.snapshot();
  EXPECT_EQ(c.backend_queries + c.cache_hits, c.dbq_issued);
  EXPECT_GT(c.cache_hits, 0u);
}

TEST(SetOpsTest, IntersectionPaths) {
  AdjacencyList big;
  for (VertexId v = 0; v < 1000; v += 2) big.push_back(v);
  AdjacencyList out;
  intersectSorted(AdjacencyList{4, 5, 998, 1001}, big, out);
  EXPECT_EQ(out, (AdjacencyList{4, 998}));
  intersectSorted(big, AdjacencyList{0, 3, 500}, out);
  EXPECT_EQ(out, (AdjacencyList{0, 500}));
  intersectSorted(AdjacencyList{1, 2, 3}, AdjacencyList{2, 3, 4}, out);
  EXPECT_EQ(out, (AdjacencyList{2, 3}));
  EXPECT_TRUE(containsSorted(big, 42));
  EXPECT_FALSE(containsSorted(big, 43));
}

}  // namespace
}  // namespace kvmatch
