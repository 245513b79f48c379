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

#include "kvmatch/cache.h"

#include <sstream>

namespace kvmatch {

std::string CommCounters::toString() const {
  std::ostringstream os;
  os << "dbq_issued=" << dbq_issued << "\nbackend_queries=" << backend_queries << "\ncache_hits=" << cache_hits
     << "\nbytes_fetched=" << bytes_fetched << "\n";
  return os.str();
}

CommCounters CommMetrics::snapshot() const {
  CommCounters c;
  // Read hits and misses before the total so concurrent increments never show hits + misses > issued.
  c.cache_hits = cache_hits_.load();
  c.backend_queries = backend_queries_.load();
  c.bytes_fetched = bytes_fetched_.load();
  c.dbq_issued = c.cache_hits + c.backend_queries;
  return c;
}

void CommMetrics::reset() {
  dbq_issued_ = 0;
  backend_queries_ = 0;
  cache_hits_ = 0;
  bytes_fetched_ = 0;
}

namespace {

FlaggedList flagPrev(const AdjacencyList& prev, const DeltaList& delta) {
  FlaggedList out{prev, std::vector<uint8_t>(prev.size(), 0)};
  size_t j = 0;
  for (size_t i = 0; i < prev.size(); ++i) {
    while (j < delta.size() && delta[j].vertex < prev[i]) ++j;
    if (j < delta.size() && delta[j].vertex == prev[i] && !delta[j].insert) out.flags[i] = 1;
  }
  return out;
}

FlaggedList flagCur(const AdjacencyList& prev, const DeltaList& delta, VertexId key, bool outgoing) {
  FlaggedList out;
  out.ids = applyDelta(prev, delta, key, outgoing);
  out.flags.assign(out.ids.size(), 0);
  size_t j = 0;
  for (size_t i = 0; i < out.ids.size(); ++i) {
    while (j < delta.size() && delta[j].vertex < out.ids[i]) ++j;
    if (j < delta.size() && delta[j].vertex == out.ids[i] && delta[j].insert) out.flags[i] = 1;
  }
  return out;
}

FlaggedList rawDelta(const DeltaList& delta) {
  FlaggedList out;
  for (const auto& d : delta) {
    out.ids.push_back(d.vertex);
    out.flags.push_back(d.insert ? 1 : 0);
  }
  return out;
}

}  // namespace

StreamEntry StreamEntry::build(VertexId key, const SnapshotQuad& quad, uint64_t step) {
  StreamEntry e;
  e.step = step;
  e.in_prev = flagPrev(quad.in_prev, quad.delta_in);
  e.out_prev = flagPrev(quad.out_prev, quad.delta_out);
  e.in_cur = flagCur(quad.in_prev, quad.delta_in, key, false);
  e.out_cur = flagCur(quad.out_prev, quad.delta_out, key, true);
  e.delta_in = rawDelta(quad.delta_in);
  e.delta_out = rawDelta(quad.delta_out);
  return e;
}

size_t StreamEntry::bytes() const {
  size_t ids = in_prev.ids.size() + out_prev.ids.size() + in_cur.ids.size() + out_cur.ids.size() +
               delta_in.ids.size() + delta_out.ids.size();
  return kEntryOverheadBytes + kBytesPerId * ids;
}

size_t batchEntryBytes(size_t degree) { return kEntryOverheadBytes + kBytesPerId * degree; }

size_t graphCacheBytes(const UndirectedGraph& g) {
  size_t total = 0;
  for (VertexId v = 0; v < g.numVertices(); ++v) total += batchEntryBytes(g.degree(v));
  return total;
}

size_t graphCacheBytes(const DirectedGraph& g) {
  size_t total = 0;
  for (const auto& [v, adj] : g.adjacency()) total += kEntryOverheadBytes + 2 * kBytesPerId * (adj.in.size() + adj.out.size());
  return total;
}

const AdjacencyCache::Slot* AdjacencyCache::touch(VertexId key) {
  auto it = slots_.find(key);
  if (it == slots_.end()) return nullptr;
  lru_.splice(lru_.begin(), lru_, it->second.lru);
  return &it->second;
}

void AdjacencyCache::insert(VertexId key, Value value, size_t bytes) {
  std::lock_guard lock(mu_);
  auto it = slots_.find(key);
  if (it != slots_.end()) {
    retained_ -= it->second.bytes;
    lru_.erase(it->second.lru);
    slots_.erase(it);
  }
  if (bytes > capacity_) return;
  while (retained_ + bytes > capacity_) {
    VertexId victim = lru_.back();
    lru_.pop_back();
    auto vit = slots_.find(victim);
    retained_ -= vit->second.bytes;
    slots_.erase(vit);
    ++evictions_;
  }
  lru_.push_front(key);
  slots_.emplace(key, Slot{std::move(value), bytes, lru_.begin()});
  retained_ += bytes;
}

std::shared_ptr<const AdjacencyList> AdjacencyCache::lookupBatch(VertexId key) {
  std::lock_guard lock(mu_);
  const Slot* s = touch(key);
  if (s == nullptr) return nullptr;
  const auto* p = std::get_if<std::shared_ptr<const AdjacencyList>>(&s->value);
  return p ? *p : nullptr;
}

void AdjacencyCache::insertBatch(VertexId key, std::shared_ptr<const AdjacencyList> value) {
  size_t bytes = batchEntryBytes(value->size());
  insert(key, std::move(value), bytes);
}

std::shared_ptr<const StreamEntry> AdjacencyCache::lookupStream(VertexId key, uint64_t step) {
  std::lock_guard lock(mu_);
  const Slot* s = touch(key);
  if (s == nullptr) return nullptr;
  const auto* p = std::get_if<std::shared_ptr<const StreamEntry>>(&s->value);
  if (p == nullptr || (*p)->step != step) return nullptr;
  return *p;
}

void AdjacencyCache::insertStream(VertexId key, std::shared_ptr<const StreamEntry> value) {
  size_t bytes = value->bytes();
  insert(key, std::move(value), bytes);
}

size_t AdjacencyCache::retainedBytes() const {
  std::lock_guard lock(mu_);
  return retained_;
}

size_t AdjacencyCache::size() const {
  std::lock_guard lock(mu_);
  return slots_.size();
}

uint64_t AdjacencyCache::evictions() const {
  std::lock_guard lock(mu_);
  return evictions_;
}

void AdjacencyCache::clear() {
  std::lock_guard lock(mu_);
  slots_.clear();
  lru_.clear();
  retained_ = 0;
}

std::shared_ptr<const AdjacencyList> cachedGet(VertexId v, AdjacencyCache* cache, const GraphStore& store,
                                               CommMetrics& metrics) {
  if (cache != nullptr) {
    if (auto hit = cache->lookupBatch(v)) {
      metrics.recordHit();
      return hit;
    }
  }
  auto value = store.get(v);
  std::shared_ptr<const AdjacencyList> list;
  if (!value) {
    list = std::make_shared<const AdjacencyList>();
    metrics.recordMiss(0);
  } else {
    const auto* b = std::get_if<BatchValue>(&*value);
    if (b == nullptr) throw StoreError("value is not a batch adjacency list", v);
    metrics.recordMiss(storedBytes(*value));
    list = std::make_shared<const AdjacencyList>(std::move(std::get<BatchValue>(*value).adjacency));
  }
  if (cache != nullptr) cache->insertBatch(v, list);
  return list;
}

StreamAdjacency cachedGet(VertexId v, EdgeType type, Direction dir, DbqOp op, uint64_t step, AdjacencyCache* cache,
                          const GraphStore& store, CommMetrics& metrics) {
  std::shared_ptr<const StreamEntry> entry;
  if (cache != nullptr) entry = cache->lookupStream(v, step);
  if (entry) {
    metrics.recordHit();
  } else {
    auto value = store.get(v);
    SnapshotQuad quad;
    if (value) {
      const auto* q = std::get_if<SnapshotQuad>(&*value);
      if (q == nullptr) throw StoreError("value is not a snapshot quad", v);
      quad = std::move(*q);
      metrics.recordMiss(storedBytes(*value));
    } else {
      metrics.recordMiss(0);
    }
    entry = std::make_shared<const StreamEntry>(StreamEntry::build(v, quad, step));
    if (cache != nullptr) cache->insertStream(v, entry);
  }

  bool out = dir == Direction::kOut;
  if (op == DbqOp::kStar) {
    if (type != EdgeType::kDelta) throw CapabilityError("'*' requires the delta edge type");
    const FlaggedList& raw = out ? entry->delta_out : entry->delta_in;
    return {std::shared_ptr<const AdjacencyList>(entry, &raw.ids),
            std::shared_ptr<const std::vector<uint8_t>>(entry, &raw.flags)};
  }
  if (op != DbqOp::kPlus && op != DbqOp::kMinus) throw CapabilityError("streaming DBQ needs op +, - or *");
  bool cur = op == DbqOp::kPlus;
  const FlaggedList& side = cur ? (out ? entry->out_cur : entry->in_cur) : (out ? entry->out_prev : entry->in_prev);
  if (type == EdgeType::kEither) return {std::shared_ptr<const AdjacencyList>(entry, &side.ids), nullptr};
  auto filtered = std::make_shared<AdjacencyList>();
  uint8_t want = type == EdgeType::kDelta ? 1 : 0;
  for (size_t i = 0; i < side.ids.size(); ++i) {
    if (side.flags[i] == want) filtered->push_back(side.ids[i]);
  }
  return {std::move(filtered), nullptr};
}

}  // namespace kvmatch
