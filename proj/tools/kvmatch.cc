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

// Command-line front end: plan, run and verify.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "kvmatch/engine.h"
#include "kvmatch/generators.h"
#include "kvmatch/oracle.h"
#include "kvmatch/streaming.h"

namespace {

using namespace kvmatch;

struct Options {
  std::string pattern;
  std::string data;
  std::string mode = "batch";
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string cache = "100%";
  std::string theta = "500";
  std::string order;
  std::string sink = "count";
  std::string dump_plan;
  std::string metrics;
  std::optional<uint64_t> seed;
};

// Generated inputs for --seed without --data.
constexpr size_t kSeedBatchVertices = 60;
constexpr double kSeedBatchDegree = 4;
constexpr size_t kSeedStreamVertices = 50;
constexpr size_t kSeedStreamArcs = 150;
constexpr size_t kSeedStreamSteps = 10;
constexpr size_t kSeedStreamBatch = 50;
// Nominal statistics for `plan` without data.
constexpr double kNominalVertices = 1e6;
constexpr double kNominalEdges = 5e6;

void addOptions(CLI::App* cmd, Options& o) {
  cmd->add_option("--pattern", o.pattern, "pattern file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--data", o.data, "edge list (batch) or update stream (stream)")->check(CLI::ExistingFile);
  cmd->add_option("--mode", o.mode, "batch | stream")->check(CLI::IsMember({"batch", "stream"}));
  cmd->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--cache", o.cache, "cache capacity in bytes or as a percentage of the graph, e.g. 10%");
  cmd->add_option("--theta", o.theta, "split threshold, or inf to disable splitting");
  cmd->add_option("--order", o.order, "matching order override, e.g. u1,u3,u2");
  cmd->add_option("--sink", o.sink, "count | emit | compressed")->check(CLI::IsMember({"count", "emit", "compressed"}));
  cmd->add_option("--dump-plan", o.dump_plan, "write the executed plan(s) to this file");
  cmd->add_option("--metrics", o.metrics, "write a key=value metrics report to this file");
  cmd->add_option("--seed", o.seed, "seed for generated data when --data is absent");
}

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFile(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

std::optional<size_t> parseTheta(const std::string& text) {
  if (text == "inf" || text == "none") return std::nullopt;
  size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || v == 0) throw ValidationError("--theta must be a positive integer or inf");
  return static_cast<size_t>(v);
}

size_t parseCache(const std::string& text, size_t graph_bytes) {
  if (text == "inf" || text == "unbounded") return kUnboundedCache;
  try {
    size_t pos = 0;
    if (!text.empty() && text.back() == '%') {
      double pct = std::stod(text.substr(0, text.size() - 1), &pos);
      if (pos + 1 != text.size() || pct < 0) throw std::invalid_argument(text);
      return static_cast<size_t>(pct / 100.0 * static_cast<double>(graph_bytes));
    }
    unsigned long long v = std::stoull(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return static_cast<size_t>(v);
  } catch (const std::exception&) {
    throw ValidationError("--cache must be a byte count or a percentage");
  }
}

PatternGraph loadPattern(const Options& o) { return parsePattern(readFile(o.pattern)); }

std::optional<std::vector<PatternVertex>> chosenOrder(const Options& o, const PatternGraph& p) {
  if (!o.order.empty()) return parseOrder(o.order);
  return p.orderOverride();
}

UndirectedGraph loadBatchData(const Options& o) {
  if (!o.data.empty()) {
    std::ifstream in(o.data);
    return loadUndirectedEdgeList(in);
  }
  if (!o.seed) throw ValidationError("batch mode needs --data or --seed");
  return erdosRenyiGraph(kSeedBatchVertices, kSeedBatchDegree, *o.seed);
}

UpdateStream loadStreamData(const Options& o) {
  if (!o.data.empty()) {
    std::ifstream in(o.data);
    return parseUpdateStream(in);
  }
  if (!o.seed) throw ValidationError("stream mode needs --data or --seed");
  UpdateStream s;
  s.initial = randomDirectedGraph(kSeedStreamVertices, kSeedStreamArcs, *o.seed);
  std::mt19937_64 rng(*o.seed);
  DirectedGraph g = s.initial;
  for (size_t t = 0; t < kSeedStreamSteps; ++t) {
    s.steps.push_back(randomUpdateBatch(g, kSeedStreamVertices, kSeedStreamBatch, 0.5, rng));
    applyUpdateBatch(g, s.steps.back());
  }
  return s;
}

/** Debug fault injection: tighten the last intersection with an extra filter so that matches go missing. */
bool corruptionRequested() {
  const char* v = std::getenv("KVMATCH_DEBUG_CORRUPT_PLAN");
  return v != nullptr && std::string(v) == "1";
}

void corruptPlan(ExecutionPlan& plan) {
  for (auto it = plan.instructions.rbegin(); it != plan.instructions.rend(); ++it) {
    if (it->kind == InstrKind::kInt) {
      it->filters.push_back({FilterKind::kLess, plan.order[0] + 1});
      std::cerr << "debug: corrupted plan instruction " << it->toString() << "\n";
      return;
    }
  }
  std::cerr << "debug: plan has no intersection to corrupt\n";
}

EngineConfig engineConfig(const Options& o, const PatternGraph& p, const UndirectedGraph& g) {
  EngineConfig cfg;
  cfg.workers = o.workers;
  cfg.cache_bytes = parseCache(o.cache, graphCacheBytes(g));
  cfg.theta = parseTheta(o.theta);
  cfg.order = chosenOrder(o, p);
  if (o.sink == "compressed") {
    cfg.pipeline.vcbc = true;
    cfg.exec.expand_compressed = false;
  }
  return cfg;
}

StreamConfig streamConfig(const Options& o, const DirectedGraph& g) {
  StreamConfig cfg;
  cfg.workers = o.workers;
  cfg.cache_bytes = parseCache(o.cache, graphCacheBytes(g));
  cfg.theta = parseTheta(o.theta);
  if (!o.order.empty()) throw ValidationError("--order is not supported in stream mode (each edge has its own plan)");
  if (o.sink == "compressed") throw ValidationError("compressed output is batch-only");
  return cfg;
}

std::vector<ExecutionPlan> streamPlans(const PatternGraph& p, const DirectedGraph& g, bool corrupt) {
  std::vector<ExecutionPlan> plans;
  for (auto& q : bestIncrementalPlans(p, GraphStats::of(g))) plans.push_back(std::move(q.plan));
  if (corrupt && !plans.empty()) corruptPlan(plans.front());
  return plans;
}

int cmdPlan(const Options& o) {
  const PatternGraph p = loadPattern(o);
  GraphStats stats{kNominalVertices, kNominalEdges, nullptr};
  if (!o.data.empty() || o.seed) {
    if (o.mode == "batch") {
      stats = GraphStats::of(loadBatchData(o));
    } else {
      stats = GraphStats::of(loadStreamData(o).initial);
    }
  }
  std::ostringstream dump;
  if (o.mode == "stream") {
    if (!p.directed()) throw ValidationError("stream mode needs a directed pattern");
    for (auto& q : bestIncrementalPlans(p, stats)) {
      std::cout << "# incremental plan " << q.plan.delta_edge << "\n" << dumpPlan(q.plan) << q.cost.toString()
                << "orders_explored=" << q.search.orders_explored << "\ntotal_orders=" << q.search.total_orders << "\n\n";
      dump << dumpPlan(q.plan) << "\n";
    }
  } else {
    std::vector<PatternVertex> order;
    SearchStats search;
    if (auto fixed = chosenOrder(o, p)) {
      order = *fixed;
    } else {
      PlannedQuery q = bestExecutionPlan(p, stats);
      order = q.cost.order;
      search = q.search;
    }
    const ExecutionPlan raw = generateRawPlan(p, order);
    const ExecutionPlan opt = optimizePlan(p, order, {});
    PipelineOptions compressed;
    compressed.vcbc = true;
    const ExecutionPlan vcbc = optimizePlan(p, order, compressed);
    const CostReport cost{estimateCommunicationCost(p, order, stats), estimateComputationCost(p, opt, stats), order};
    std::cout << "# raw plan\n" << dumpPlan(raw) << "\n# optimized plan\n" << dumpPlan(opt) << "\n# compressed plan\n"
              << dumpPlan(vcbc) << "\n# cost\n" << cost.toString() << "raw_comp_cost=" << estimateComputationCost(p, raw, stats)
              << "\n";
    if (search.total_orders) {
      std::cout << "orders_explored=" << search.orders_explored << "\ntotal_orders=" << search.total_orders << "\n";
    }
    dump << dumpPlan(o.sink == "compressed" ? vcbc : opt);
  }
  if (!o.dump_plan.empty()) writeFile(o.dump_plan, dump.str());
  return 0;
}

int runBatch(const Options& o, bool verify) {
  const PatternGraph p = loadPattern(o);
  const UndirectedGraph g = loadBatchData(o);
  EngineConfig cfg = engineConfig(o, p, g);
  MemoryStore store;
  storeBatchGraph(g, store);
  AdjacencyCache cache(cfg.cache_bytes);
  std::optional<CostReport> cost;
  ExecutionPlan plan = planBatchQuery(p, g, cfg, &cost);
  if (corruptionRequested()) corruptPlan(plan);
  if (!o.dump_plan.empty()) writeFile(o.dump_plan, dumpPlan(plan));

  if (verify) {
    cfg.exec.expand_compressed = true;
    CollectingSink sink;
    RunSummary r = executeBatchPlan(plan, p, g, store, &cache, cfg, &sink);
    const oracle::SubgraphSet truth = oracle::bruteForceEnumerate(p, g);
    std::map<oracle::CanonicalSubgraph, int> seen;
    for (const auto& e : sink.take()) ++seen[oracle::canonicalize(p, e.f)];
    auto name = [&](const oracle::CanonicalSubgraph& c) {
      oracle::CanonicalSubgraph out = c;
      for (auto& v : out.vertices) v = g.originalId(v);
      for (auto& [a, b] : out.edges) {
        a = g.originalId(a);
        b = g.originalId(b);
      }
      return out.toString();
    };
    size_t missing = 0, extra = 0, dup = 0;
    std::string first;
    for (const auto& c : truth) {
      if (!seen.count(c)) {
        if (!missing++ && first.empty()) first = "missing " + name(c);
      }
    }
    for (const auto& [c, k] : seen) {
      if (!truth.count(c)) {
        if (!extra++ && first.empty()) first = "extra " + name(c);
      }
      if (k > 1) {
        if (!dup++ && first.empty()) first = "duplicate " + name(c);
      }
    }
    const bool pass = missing == 0 && extra == 0 && dup == 0;
    std::cout << (pass ? "PASS" : "FAIL") << " mode=batch expected=" << truth.size() << " reported=" << r.matches
              << " missing=" << missing << " extra=" << extra << " duplicates=" << dup;
    if (!pass) std::cout << " first: " << first;
    std::cout << "\n";
    if (!o.metrics.empty()) writeFile(o.metrics, r.report());
    return pass ? 0 : 1;
  }

  std::unique_ptr<TextSink> sink;
  if (o.sink != "count") sink = std::make_unique<TextSink>(std::cout, [&g](VertexId v) { return g.originalId(v); });
  RunSummary r = executeBatchPlan(plan, p, g, store, &cache, cfg, sink.get());
  r.cost = cost;
  std::cout << "matches: " << r.matches << "\n"
            << "tasks: " << r.num_tasks << "\n"
            << "dbq_executed: " << r.exec.dbq << " backend_queries: " << r.comm.backend_queries
            << " cache_hit_rate: " << r.comm.hitRate() << "\n"
            << "intersections: " << r.exec.intersections << " trc_hits: " << r.exec.trc_hits << "\n"
            << "wall_seconds: " << r.wall_seconds << "\n";
  if (!o.metrics.empty()) writeFile(o.metrics, r.report());
  return 0;
}

int runStream(const Options& o, bool verify) {
  const PatternGraph p = loadPattern(o);
  const UpdateStream data = loadStreamData(o);
  StreamConfig cfg = streamConfig(o, data.initial);
  cfg.collect = verify;
  std::vector<ExecutionPlan> plans = streamPlans(p, data.initial, corruptionRequested());
  if (!o.dump_plan.empty()) {
    std::string text;
    for (const auto& plan : plans) text += dumpPlan(plan) + "\n";
    writeFile(o.dump_plan, text);
  }
  std::unique_ptr<TextSink> sink;
  if (!verify && o.sink == "emit") sink = std::make_unique<TextSink>(std::cout);
  StreamingEngine engine(p, data.initial, cfg, plans, sink.get());
  std::string metrics;
  bool all_pass = true;
  for (size_t t = 0; t < data.steps.size(); ++t) {
    if (sink) std::cout << "## step " << t + 1 << "\n" << std::flush;
    const DirectedGraph before = verify ? engine.snapshot() : DirectedGraph();
    StepResult r = engine.processTimeStep(data.steps[t]);
    metrics += r.report();
    if (!verify) {
      std::cout << "step " << r.step << ": appearing=" << r.appearing << " disappearing=" << r.disappearing;
      for (size_t i = 0; i < r.appearing_per_plan.size(); ++i) {
        std::cout << " [" << i + 1 << ":+" << r.appearing_per_plan[i] << "/-" << r.disappearing_per_plan[i] << "]";
      }
      std::cout << " dbq=" << r.exec.dbq << " hit_rate=" << r.comm.hitRate() << " violations=" << r.violations << "\n";
      continue;
    }
    const oracle::IncrementalDiff truth = oracle::bruteForceIncremental(p, before, engine.snapshot());
    std::map<oracle::CanonicalSubgraph, int> app, dis;
    for (const auto& e : r.matches) ++(e.sign > 0 ? app : dis)[oracle::canonicalize(p, e.f)];
    size_t missing = 0, extra = 0, dup = 0;
    std::string first;
    auto compare = [&](const oracle::SubgraphSet& want, const std::map<oracle::CanonicalSubgraph, int>& got,
                       const char* sign) {
      for (const auto& c : want) {
        if (!got.count(c) && !missing++ && first.empty()) first = std::string("missing ") + sign + c.toString();
      }
      for (const auto& [c, k] : got) {
        if (!want.count(c) && !extra++ && first.empty()) first = std::string("extra ") + sign + c.toString();
        if (k > 1 && !dup++ && first.empty()) first = std::string("duplicate ") + sign + c.toString();
      }
    };
    compare(truth.appearing, app, "+");
    compare(truth.disappearing, dis, "-");
    const bool pass = missing == 0 && extra == 0 && dup == 0 && r.violations == 0;
    all_pass = all_pass && pass;
    std::cout << (pass ? "PASS" : "FAIL") << " mode=stream step=" << r.step << " appearing=" << truth.appearing.size()
              << " disappearing=" << truth.disappearing.size() << " missing=" << missing << " extra=" << extra
              << " duplicates=" << dup << " violations=" << r.violations;
    if (!first.empty()) std::cout << " first: " << first;
    std::cout << "\n";
  }
  if (!o.metrics.empty()) writeFile(o.metrics, metrics);
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kvmatch: subgraph enumeration over a key-value graph store"};
  app.require_subcommand(1);
  Options plan_opts, run_opts, verify_opts;
  auto* plan = app.add_subcommand("plan", "print raw, optimized and compressed plans with cost estimates");
  auto* run = app.add_subcommand("run", "enumerate matches (batch) or per-step changes (stream)");
  auto* verify = app.add_subcommand("verify", "compare the engine against the brute-force oracle");
  addOptions(plan, plan_opts);
  addOptions(run, run_opts);
  addOptions(verify, verify_opts);
  CLI11_PARSE(app, argc, argv);
  try {
    if (*plan) return cmdPlan(plan_opts);
    if (*run) return run_opts.mode == "stream" ? runStream(run_opts, false) : runBatch(run_opts, false);
    return verify_opts.mode == "stream" ? runStream(verify_opts, true) : runBatch(verify_opts, true);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    for (const auto& d : e.diagnostics()) std::cerr << "  " << d << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
