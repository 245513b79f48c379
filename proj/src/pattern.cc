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

#include "kvmatch/pattern.h"

#include <algorithm>
#include <bit>
#include <sstream>

#include "kvmatch/symmetry.h"

namespace kvmatch {

PartialOrder::PartialOrder(int n, std::vector<OrderConstraint> constraints)
    : n_(n), constraints_(std::move(constraints)), closure_(n, 0) {
  for (auto& c : constraints_) {
    if (c.lo < 0 || c.hi < 0 || c.lo >= n || c.hi >= n) throw ValidationError("partial order vertex out of range");
    if (c.lo == c.hi) throw ValidationError("partial order constraint " + vertexName(c.lo) + "<" + vertexName(c.hi));
    closure_[c.lo] |= 1u << c.hi;
  }
  std::sort(constraints_.begin(), constraints_.end());
  constraints_.erase(std::unique(constraints_.begin(), constraints_.end()), constraints_.end());
  // Warshall over bitmasks
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      if (closure_[i] >> k & 1u) closure_[i] |= closure_[k];
    }
  }
  for (int i = 0; i < n; ++i) {
    if (closure_[i] >> i & 1u) throw ValidationError("partial order is cyclic");
  }
}

PartialOrder PartialOrder::reduced() const {
  std::vector<OrderConstraint> kept;
  for (auto& c : constraints_) {
    bool implied = false;
    for (int mid = 0; mid < n_ && !implied; ++mid) {
      implied = mid != c.lo && mid != c.hi && before(c.lo, mid) && before(mid, c.hi);
    }
    if (!implied) kept.push_back(c);
  }
  return PartialOrder(n_, std::move(kept));
}

std::string PartialOrder::toString() const {
  std::string s;
  for (auto& c : constraints_) {
    if (!s.empty()) s += ' ';
    s += vertexName(c.lo) + "<" + vertexName(c.hi);
  }
  return s;
}

PatternGraph::PatternGraph(int n, std::vector<PatternEdge> edges, bool directed)
    : n_(n), directed_(directed), edges_(std::move(edges)), nbr_(n, 0), out_(n, 0), in_(n, 0) {
  if (n < 1 || n > kMaxPatternVertices) {
    throw ValidationError("pattern must have between 1 and " + std::to_string(kMaxPatternVertices) + " vertices");
  }
  for (auto& e : edges_) {
    if (e.src < 0 || e.dst < 0 || e.src >= n || e.dst >= n) throw ValidationError("pattern edge out of range");
    if (e.src == e.dst) throw ValidationError("pattern self-loop at " + vertexName(e.src));
    if (hasArc(e.src, e.dst) || (!directed && hasArc(e.dst, e.src))) {
      throw ValidationError("duplicate pattern edge " + vertexName(e.src) + "-" + vertexName(e.dst));
    }
    out_[e.src] |= 1u << e.dst;
    in_[e.dst] |= 1u << e.src;
    if (!directed) {
      out_[e.dst] |= 1u << e.src;
      in_[e.src] |= 1u << e.dst;
    }
    nbr_[e.src] |= 1u << e.dst;
    nbr_[e.dst] |= 1u << e.src;
  }
  const uint32_t all = n == 32 ? ~0u : (1u << n) - 1;
  if (!isConnected(all)) throw ValidationError("pattern graph is not connected");
  if (n <= kMaxAutomorphismVertices) partial_order_ = symmetryBreakingConditions(*this);
}

int PatternGraph::degree(PatternVertex u) const {
  return directed_ ? std::popcount(out_[u]) + std::popcount(in_[u]) : std::popcount(nbr_[u]);
}

int PatternGraph::edgeId(PatternVertex u, PatternVertex v) const {
  for (size_t k = 0; k < edges_.size(); ++k) {
    const auto& e = edges_[k];
    if ((e.src == u && e.dst == v) || (!directed_ && e.src == v && e.dst == u)) return static_cast<int>(k) + 1;
  }
  return 0;
}

bool PatternGraph::isConnected(uint32_t mask) const {
  if (mask == 0) return true;
  uint32_t seen = mask & (~mask + 1);
  uint32_t frontier = seen;
  while (frontier) {
    uint32_t next = 0;
    for (uint32_t f = frontier; f; f &= f - 1) next |= nbr_[std::countr_zero(f)];
    next &= mask & ~seen;
    seen |= next;
    frontier = next;
  }
  return seen == mask;
}

const PartialOrder& PatternGraph::partialOrder() const {
  if (!partial_order_) {
    throw CapabilityError("no symmetry-breaking order for a pattern with more than " +
                          std::to_string(kMaxAutomorphismVertices) + " vertices; supply partial: explicitly");
  }
  return *partial_order_;
}

void PatternGraph::setPartialOrder(PartialOrder order) {
  partial_order_ = std::move(order);
  explicit_order_ = true;
}

void PatternGraph::setOrderOverride(std::vector<PatternVertex> order) {
  checkMatchingOrder(*this, order);
  order_override_ = std::move(order);
}

void checkMatchingOrder(const PatternGraph& p, const std::vector<PatternVertex>& order) {
  uint32_t seen = 0;
  for (PatternVertex u : order) {
    if (u < 0 || u >= p.numVertices()) throw ValidationError("matching order names unknown vertex");
    if (seen >> u & 1u) throw ValidationError("matching order repeats " + vertexName(u));
    seen |= 1u << u;
  }
  if (static_cast<int>(order.size()) != p.numVertices()) {
    throw ValidationError("matching order is not a permutation of the pattern vertices");
  }
}

std::string vertexName(PatternVertex u) { return "u" + std::to_string(u + 1); }

std::string orderToString(const std::vector<PatternVertex>& order) {
  std::string s;
  for (PatternVertex u : order) {
    if (!s.empty()) s += ',';
    s += vertexName(u);
  }
  return s;
}

namespace {

int parseVertexToken(std::string tok, size_t line) {
  if (!tok.empty() && (tok[0] == 'u' || tok[0] == 'U')) tok.erase(0, 1);
  try {
    size_t used = 0;
    int v = std::stoi(tok, &used);
    if (used != tok.size() || v < 1) throw ParseError("bad pattern vertex '" + tok + "'", line);
    return v - 1;
  } catch (const std::logic_error&) {
    throw ParseError("bad pattern vertex '" + tok + "'", line);
  }
}

std::vector<std::string> splitTokens(const std::string& s, const std::string& seps) {
  std::vector<std::string> toks;
  std::string cur;
  for (char c : s) {
    if (seps.find(c) != std::string::npos) {
      if (!cur.empty()) toks.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) toks.push_back(cur);
  return toks;
}

}  // namespace

std::vector<PatternVertex> parseOrder(const std::string& text) {
  std::vector<PatternVertex> order;
  for (auto& tok : splitTokens(text, " ,\t")) order.push_back(parseVertexToken(tok, 0));
  return order;
}

PatternGraph parsePattern(std::istream& in) {
  std::string line;
  size_t line_no = 0;
  int n = -1, m = -1;
  bool directed = false;
  std::vector<std::pair<int, PatternEdge>> edges;
  std::optional<std::vector<PatternVertex>> order;
  std::optional<std::vector<OrderConstraint>> partial;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto toks = splitTokens(line, " \t\r");
    if (toks.empty()) continue;
    if (toks[0] == "order:") {
      order = parseOrder(line.substr(line.find(':') + 1));
      continue;
    }
    if (toks[0] == "partial:") {
      partial.emplace();
      for (size_t i = 1; i < toks.size(); ++i) {
        auto lt = toks[i].find('<');
        if (lt == std::string::npos) throw ParseError("partial constraint must look like a<b", line_no);
        partial->push_back({parseVertexToken(toks[i].substr(0, lt), line_no),
                            parseVertexToken(toks[i].substr(lt + 1), line_no)});
      }
      continue;
    }
    if (n < 0) {
      if (toks.size() < 2 || toks.size() > 3) throw ParseError("header must be 'n m [directed]'", line_no);
      try {
        n = std::stoi(toks[0]);
        m = std::stoi(toks[1]);
      } catch (const std::logic_error&) {
        throw ParseError("header must be 'n m [directed]'", line_no);
      }
      if (toks.size() == 3) {
        if (toks[2] == "directed" || toks[2] == "1") {
          directed = true;
        } else if (toks[2] != "undirected" && toks[2] != "0") {
          throw ParseError("unknown direction flag '" + toks[2] + "'", line_no);
        }
      }
      continue;
    }
    if (toks.size() < 2 || toks.size() > 3) throw ParseError("edge line must be 'u v [edge-id]'", line_no);
    PatternEdge e{parseVertexToken(toks[0], line_no), parseVertexToken(toks[1], line_no)};
    int id = static_cast<int>(edges.size()) + 1;
    if (toks.size() == 3) id = parseVertexToken(toks[2], line_no) + 1;
    edges.emplace_back(id, e);
  }
  if (n < 0) throw ParseError("missing pattern header", 0);
  if (static_cast<int>(edges.size()) != m) {
    throw ParseError("header declares " + std::to_string(m) + " edges, found " + std::to_string(edges.size()), 0);
  }
  std::sort(edges.begin(), edges.end(), [](auto& a, auto& b) { return a.first < b.first; });
  std::vector<PatternEdge> ordered;
  for (size_t k = 0; k < edges.size(); ++k) {
    if (edges[k].first != static_cast<int>(k) + 1) throw ParseError("edge ids must be consecutive from 1", 0);
    ordered.push_back(edges[k].second);
  }
  PatternGraph p(n, std::move(ordered), directed);
  if (partial) p.setPartialOrder(PartialOrder(n, *partial));
  if (order) p.setOrderOverride(*order);
  return p;
}

PatternGraph parsePattern(const std::string& text) {
  std::istringstream in(text);
  return parsePattern(in);
}

std::string dumpPattern(const PatternGraph& p) {
  std::ostringstream out;
  out << p.numVertices() << ' ' << p.numEdges() << ' ' << (p.directed() ? "directed" : "undirected") << '\n';
  for (int k = 1; k <= p.numEdges(); ++k) {
    out << p.edge(k).src + 1 << ' ' << p.edge(k).dst + 1 << ' ' << k << '\n';
  }
  if (p.orderOverride()) {
    out << "order:";
    for (PatternVertex u : *p.orderOverride()) out << ' ' << u + 1;
    out << '\n';
  }
  if (p.hasExplicitPartialOrder()) {
    out << "partial:";
    for (auto& c : p.partialOrder().constraints()) out << ' ' << c.lo + 1 << '<' << c.hi + 1;
    out << '\n';
  }
  return out.str();
}

}  // namespace kvmatch
