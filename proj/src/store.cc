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

#include "kvmatch/store.h"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>

namespace kvmatch {

size_t storedBytes(const StoredValue& value) {
  if (const auto* b = std::get_if<BatchValue>(&value)) {
    return kEntryOverheadBytes + kBytesPerId * b->adjacency.size();
  }
  const auto& q = std::get<SnapshotQuad>(value);
  size_t ids = q.in_prev.size() + q.out_prev.size() + q.delta_in.size() + q.delta_out.size();
  return kEntryOverheadBytes + kBytesPerId * ids;
}

std::vector<std::optional<StoredValue>> GraphStore::multiGet(std::span<const VertexId> keys) const {
  std::vector<std::optional<StoredValue>> out;
  out.reserve(keys.size());
  for (VertexId k : keys) out.push_back(get(k));
  return out;
}

void GraphStore::multiPut(std::vector<std::pair<VertexId, StoredValue>> entries) {
  for (auto& [k, v] : entries) put(k, std::move(v));
}

void MemoryStore::delay() const {
  if (latency_.count() > 0) std::this_thread::sleep_for(latency_);
}

std::optional<StoredValue> MemoryStore::get(VertexId key) const {
  delay();
  reads_.fetch_add(1, std::memory_order_relaxed);
  std::shared_lock lock(mu_);
  auto it = data_.find(key);
  if (it == data_.end()) return std::nullopt;
  return it->second;
}

void MemoryStore::put(VertexId key, StoredValue value) {
  delay();
  std::unique_lock lock(mu_);
  if (failing_.count(key)) throw StoreError("write failed", key);
  data_[key] = std::move(value);
  writes_.fetch_add(1, std::memory_order_relaxed);
}

std::vector<VertexId> MemoryStore::keys() const {
  std::shared_lock lock(mu_);
  std::vector<VertexId> out;
  out.reserve(data_.size());
  for (const auto& [k, v] : data_) out.push_back(k);
  return out;
}

size_t MemoryStore::size() const {
  std::shared_lock lock(mu_);
  return data_.size();
}

void MemoryStore::clear() {
  std::unique_lock lock(mu_);
  data_.clear();
}

void MemoryStore::failWritesFor(VertexId key) {
  std::unique_lock lock(mu_);
  failing_.insert(key);
}

void storeBatchGraph(const UndirectedGraph& g, GraphStore& store) {
  for (VertexId v = 0; v < g.numVertices(); ++v) {
    auto nb = g.neighbors(v);
    store.put(v, BatchValue{AdjacencyList(nb.begin(), nb.end())});
  }
}

void storeSnapshot(const DirectedGraph& g, GraphStore& store) {
  for (const auto& [v, adj] : g.adjacency()) {
    SnapshotQuad q;
    q.in_prev.assign(adj.in.begin(), adj.in.end());
    q.out_prev.assign(adj.out.begin(), adj.out.end());
    store.put(v, std::move(q));
  }
}

namespace {

std::string arcName(VertexId key, VertexId w, bool outgoing) {
  return outgoing ? "(" + std::to_string(key) + "," + std::to_string(w) + ")"
                  : "(" + std::to_string(w) + "," + std::to_string(key) + ")";
}

SnapshotQuad loadQuad(const GraphStore& store, VertexId key) {
  auto value = store.get(key);
  if (!value) return {};
  if (!std::holds_alternative<SnapshotQuad>(*value)) {
    throw StoreError("value is not a snapshot quad", key);
  }
  return std::get<SnapshotQuad>(std::move(*value));
}

DeltaList sortedDelta(DeltaList delta) {
  std::stable_sort(delta.begin(), delta.end(),
                   [](const DeltaEntry& a, const DeltaEntry& b) { return a.vertex < b.vertex; });
  return delta;
}

// Expects delta sorted by vertex.
void checkDelta(const AdjacencyList& prev, const DeltaList& delta, VertexId key, bool outgoing) {
  for (size_t i = 0; i < delta.size(); ++i) {
    const auto& d = delta[i];
    if (i > 0 && delta[i - 1].vertex == d.vertex) {
      throw ConsistencyError("delta list of key " + std::to_string(key) + " repeats an edge");
    }
    bool present = std::binary_search(prev.begin(), prev.end(), d.vertex);
    if (!d.insert && !present) {
      throw ConsistencyError("deletion of absent edge " + arcName(key, d.vertex, outgoing));
    }
    if (d.insert && present) {
      throw ConsistencyError("insertion of existing edge " + arcName(key, d.vertex, outgoing));
    }
  }
}

}  // namespace

AdjacencyList applyDelta(const AdjacencyList& prev, const DeltaList& unsorted, VertexId key, bool outgoing) {
  const DeltaList delta = sortedDelta(unsorted);
  checkDelta(prev, delta, key, outgoing);
  AdjacencyList out;
  out.reserve(prev.size() + delta.size());
  size_t i = 0, j = 0;
  while (i < prev.size() || j < delta.size()) {
    if (j == delta.size() || (i < prev.size() && prev[i] < delta[j].vertex)) {
      out.push_back(prev[i++]);
    } else if (i == prev.size() || delta[j].vertex < prev[i]) {
      out.push_back(delta[j++].vertex);  // insertion
    } else {
      ++i;  // deletion
      ++j;
    }
  }
  return out;
}

size_t applyDeltaSets(GraphStore& store, const DeltaMap& deltas) {
  std::vector<std::pair<VertexId, StoredValue>> writes;
  writes.reserve(deltas.size());
  for (const auto& [key, d] : deltas) {
    SnapshotQuad q = loadQuad(store, key);
    if (!q.isForm1()) throw ConsistencyError("key " + std::to_string(key) + " is already in form 2");
    q.delta_in = sortedDelta(d.in);
    q.delta_out = sortedDelta(d.out);
    checkDelta(q.in_prev, q.delta_in, key, false);
    checkDelta(q.out_prev, q.delta_out, key, true);
    writes.emplace_back(key, std::move(q));
  }
  size_t n = writes.size();
  store.multiPut(std::move(writes));
  return n;
}

size_t mergePostStep(GraphStore& store, const DeltaMap& deltas) {
  std::vector<std::pair<VertexId, StoredValue>> writes;
  writes.reserve(deltas.size());
  for (const auto& [key, d] : deltas) {
    SnapshotQuad q = loadQuad(store, key);
    if (q.delta_in != sortedDelta(d.in) || q.delta_out != sortedDelta(d.out)) {
      throw ConsistencyError("stored deltas of key " + std::to_string(key) + " differ from the step's deltas");
    }
    SnapshotQuad merged;
    merged.in_prev = applyDelta(q.in_prev, q.delta_in, key, false);
    merged.out_prev = applyDelta(q.out_prev, q.delta_out, key, true);
    writes.emplace_back(key, std::move(merged));
  }
  size_t n = writes.size();
  store.multiPut(std::move(writes));
  return n;
}

namespace {

void writeIds(std::ostream& out, const AdjacencyList& ids) {
  for (VertexId v : ids) out << ' ' << v;
}

void writeDelta(std::ostream& out, const DeltaList& ds) {
  for (const auto& d : ds) out << ' ' << (d.insert ? '+' : '-') << d.vertex;
}

VertexId parseId(const std::string& tok, size_t line) {
  try {
    size_t pos = 0;
    unsigned long v = std::stoul(tok, &pos);
    if (pos != tok.size() || v > kInvalidVertex - 1) throw std::invalid_argument(tok);
    return static_cast<VertexId>(v);
  } catch (const std::logic_error&) {
    throw ParseError("bad vertex id '" + tok + "'", line);
  }
}

std::vector<std::string> splitSegment(const std::string& seg) {
  std::istringstream ss(seg);
  std::vector<std::string> toks;
  std::string t;
  while (ss >> t) toks.push_back(t);
  return toks;
}

}  // namespace

void dumpStore(const GraphStore& store, std::ostream& out) {
  for (VertexId key : store.keys()) {
    auto value = store.get(key);
    if (!value) continue;
    if (const auto* b = std::get_if<BatchValue>(&*value)) {
      out << "B " << key << " :";
      writeIds(out, b->adjacency);
    } else {
      const auto& q = std::get<SnapshotQuad>(*value);
      out << "Q " << key << " |";
      writeIds(out, q.in_prev);
      out << " |";
      writeIds(out, q.out_prev);
      out << " |";
      writeDelta(out, q.delta_in);
      out << " |";
      writeDelta(out, q.delta_out);
    }
    out << '\n';
  }
}

void loadStore(std::istream& in, GraphStore& store) {
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string tag, key_tok;
    ss >> tag >> key_tok;
    VertexId key = parseId(key_tok, lineno);
    std::string rest;
    std::getline(ss, rest);
    if (tag == "B") {
      auto colon = rest.find(':');
      if (colon == std::string::npos) throw ParseError("missing ':' in batch entry", lineno);
      BatchValue b;
      for (const auto& t : splitSegment(rest.substr(colon + 1))) b.adjacency.push_back(parseId(t, lineno));
      store.put(key, std::move(b));
    } else if (tag == "Q") {
      std::vector<std::string> segs;
      for (size_t from = 0;;) {
        size_t bar = rest.find('|', from);
        segs.push_back(rest.substr(from, bar == std::string::npos ? std::string::npos : bar - from));
        if (bar == std::string::npos) break;
        from = bar + 1;
      }
      if (segs.size() != 5) throw ParseError("quad entry needs four '|'-separated lists", lineno);
      SnapshotQuad q;
      for (const auto& t : splitSegment(segs[1])) q.in_prev.push_back(parseId(t, lineno));
      for (const auto& t : splitSegment(segs[2])) q.out_prev.push_back(parseId(t, lineno));
      for (int s = 3; s <= 4; ++s) {
        auto& dl = s == 3 ? q.delta_in : q.delta_out;
        for (const auto& t : splitSegment(segs[s])) {
          if (t.size() < 2 || (t[0] != '+' && t[0] != '-')) throw ParseError("bad delta entry '" + t + "'", lineno);
          dl.push_back({t[0] == '+', parseId(t.substr(1), lineno)});
        }
      }
      store.put(key, std::move(q));
    } else {
      throw ParseError("unknown entry tag '" + tag + "'", lineno);
    }
  }
}

}  // namespace kvmatch
