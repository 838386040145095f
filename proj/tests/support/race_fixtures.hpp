#pragma once

// Shared helpers for unit, property and acceptance tests: seeded random
// instances and whole-run invariant checks.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "racegroups/analyzer.hpp"
#include "racegroups/io.hpp"
#include "racegroups/longterm.hpp"
#include "racegroups/oracle.hpp"
#include "racegroups/patterns.hpp"
#include "racegroups/report.hpp"

namespace fixtures {

namespace rg = racegroups;

struct Instance {
  std::vector<rg::Event> events;
  rg::Params params;
  std::uint32_t athletes = 0;
  std::uint32_t cps = 0;
};

inline rg::Mu random_mu(std::mt19937_64& rng) {
  const auto q = std::uniform_int_distribution<std::uint64_t>(1, 20)(rng);
  const auto p = std::uniform_int_distribution<std::uint64_t>(q / 2 + 1, q)(rng);
  return rg::Mu(p, q);
}

/// Athletes drift between clusters from one cp to the next, so groups split,
/// merge and reshuffle. Cluster spacing and spread are drawn around epsilon
/// to hit the gap boundary often.
inline Instance random_instance(std::uint64_t seed, std::uint32_t max_athletes = 200,
                                std::uint32_t max_cps = 20) {
  std::mt19937_64 rng(seed);
  auto uni = [&](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  Instance inst;
  inst.athletes = static_cast<std::uint32_t>(uni(1, max_athletes));
  inst.cps = static_cast<std::uint32_t>(uni(1, max_cps));
  inst.params.epsilon = uni(0, 4) == 0 ? 0 : uni(1, 3000);
  inst.params.min_group = static_cast<std::uint32_t>(uni(1, 8));
  inst.params.mu = random_mu(rng);
  const auto eps = inst.params.epsilon;
  const auto clusters = std::max<std::int64_t>(1, inst.athletes / uni(3, 12));
  const std::int64_t spacing = uni(eps / 2, 3 * eps + 5) + 1;
  const std::int64_t spread = uni(0, 4 * eps + 4);
  const double stay = std::uniform_real_distribution<double>(0.5, 0.95)(rng);
  const double absent = std::uniform_real_distribution<double>(0.0, 0.08)(rng);
  std::vector<std::int64_t> cluster(inst.athletes);
  for (auto& c : cluster) c = uni(0, clusters - 1);
  std::bernoulli_distribution keep(stay), skip(absent);
  for (rg::CpIndex cp = 0; cp < inst.cps; ++cp) {
    for (std::uint32_t a = 0; a < inst.athletes; ++a) {
      if (cp > 0 && !keep(rng)) cluster[a] = uni(0, clusters - 1);
      if (skip(rng)) continue;
      const rg::Millis t = static_cast<rg::Millis>(cp) * 100'000'000 + cluster[a] * spacing + uni(0, spread);
      inst.events.push_back(rg::Event{rg::AthleteId{a + 1ull}, cp, t});
    }
  }
  rg::sort_events(inst.events);
  return inst;
}

inline rg::RaceAnalyzer analyze(const Instance& inst, rg::DetectionMode mode = rg::DetectionMode::Finalized) {
  rg::RaceAnalyzer analyzer(inst.params, mode);
  for (const auto& e : inst.events) analyzer.ingest(e);
  analyzer.finish();
  return analyzer;
}

/// Failure messages; empty means the check passed.
using Failures = std::vector<std::string>;

inline void fail(Failures& f, const std::string& what) {
  if (f.size() < 20) f.push_back(what);
}

/// Streaming groups equal oracle_groups; evolution graphs equal the
/// set-arithmetic graphs; finalized patterns equal oracle_patterns; labels
/// equal exhaustive path enumeration.
inline Failures check_oracle_equivalence(const Instance& inst) {
  Failures f;
  const auto analyzer = analyze(inst);
  const auto& engine = analyzer.engine();
  auto truth = rg::oracle_groups(inst.events, inst.params);
  truth.resize(engine.cp_count());
  for (rg::CpIndex cp = 0; cp < engine.cp_count(); ++cp) {
    if (engine.group_count(cp) != truth[cp].size()) {
      fail(f, "cp " + std::to_string(cp) + ": " + std::to_string(engine.group_count(cp)) + " groups, oracle " +
                  std::to_string(truth[cp].size()));
      continue;
    }
    for (std::uint32_t o = 0; o < truth[cp].size(); ++o) {
      if (engine.members(rg::GroupId{cp, o}) != truth[cp][o]) {
        fail(f, "cp " + std::to_string(cp) + " group " + std::to_string(o) + " membership differs");
      }
    }
  }
  if (!f.empty()) return f;
  for (rg::CpIndex x = 0; x < analyzer.pair_count(); ++x) {
    const auto expected_graph = rg::oracle_evolution_graph(x, truth[x], truth[x + 1], inst.params.mu);
    if (analyzer.evolution(x).to_text() != expected_graph.to_text()) {
      fail(f, "pair " + std::to_string(x) + ": evolution graph differs");
    }
    const auto got = analyzer.patterns(x);
    const auto want = rg::oracle_patterns(x, truth[x], truth[x + 1], inst.params.mu);
    if (!(got == want)) fail(f, "pair " + std::to_string(x) + ": pattern set differs from oracle");
  }
  const auto graph = analyzer.global_graph();
  if (rg::compute_labels(graph) != rg::oracle_longterm(graph)) fail(f, "long-term labels differ from oracle");
  return f;
}

/// Partition conservation, gap law, out-degree bounds, weight sums on
/// the actual groups, label ordering, and coverage with crossings as the only
/// exemption.
inline Failures check_run_invariants(const Instance& inst) {
  Failures f;
  const auto analyzer = analyze(inst);
  const auto& engine = analyzer.engine();
  std::vector<std::set<std::uint64_t>> crossed(engine.cp_count());
  for (const auto& e : inst.events) crossed[e.cp].insert(e.athlete.value);
  for (rg::CpIndex cp = 0; cp < engine.cp_count(); ++cp) {
    std::multiset<std::uint64_t> seen;
    const auto comps = engine.components_at(cp);
    for (std::size_t c = 0; c < comps.size(); ++c) {
      const auto& comp = comps[c];
      if (comp.active) fail(f, "active component left after the broom wagon");
      rg::Millis prev = -1;
      for (auto a : comp.members) {
        seen.insert(engine.athlete_id(a).value);
        const auto t = *engine.crossing_time(a, cp);
        if (prev >= 0 && t - prev > inst.params.epsilon) fail(f, "gap above epsilon inside a component");
        prev = t;
      }
      if (c > 0 && comp.t_first - comps[c - 1].t_last <= inst.params.epsilon) {
        fail(f, "components closer than epsilon at cp " + std::to_string(cp));
      }
      const bool group = comp.members.size() >= inst.params.min_group;
      if (group != comp.group_ordinal.has_value()) fail(f, "group flag disagrees with size");
    }
    if (std::set<std::uint64_t>(seen.begin(), seen.end()) != crossed[cp] || seen.size() != crossed[cp].size()) {
      fail(f, "partition broken at cp " + std::to_string(cp));
    }
  }
  for (rg::CpIndex x = 0; x < analyzer.pair_count(); ++x) {
    const auto& g = analyzer.evolution(x);
    std::vector<int> f_out(g.source_count()), b_out(g.target_count());
    for (const auto& r : g.relations()) {
      if (r.forward) ++f_out[r.source];
      if (r.backward) ++b_out[r.target];
    }
    for (auto n : f_out) {
      if (n > 1) fail(f, "forward out-degree above one");
    }
    for (auto n : b_out) {
      if (n > 1) fail(f, "backward out-degree above one");
    }
    // Sum of forward weights into S' is at most |S'|; backward into S at most |S|.
    for (std::uint32_t t = 0; t < g.target_count(); ++t) {
      std::uint64_t w = 0;
      for (auto r : g.forward_in(t)) w += g.relation(r).weight;
      if (w > g.target_size(t)) fail(f, "forward weights exceed target size");
    }
    for (std::uint32_t s = 0; s < g.source_count(); ++s) {
      std::uint64_t w = 0;
      for (auto r : g.backward_in(s)) w += g.relation(r).weight;
      if (w > g.source_size(s)) fail(f, "backward weights exceed source size");
    }
    const auto set = analyzer.patterns(x);
    std::set<rg::GroupId> exempt;
    for (const auto& c : set.crossings) {
      exempt.insert(rg::GroupId{x, c.source});
      exempt.insert(rg::GroupId{x + 1, c.target});
    }
    for (const auto& v : rg::coverage_violations(g, set)) {
      if (!exempt.count(v)) {
        fail(f, "group " + std::to_string(v.cp) + ":" + std::to_string(v.ordinal) +
                    " not covered exactly once outside a crossing");
      }
    }
    for (const auto& r : set.records) {
      if (r.kind != rg::PatternKind::Merges && r.kind != rg::PatternKind::Coheres) continue;
      std::uint64_t covered = 0;
      for (auto s : r.sources) covered += *analyzer.precursor(x).weight(s, r.targets.front());
      if (r.kind == rg::PatternKind::Merges && !inst.params.mu.accepts(covered, g.target_size(r.targets.front()))) {
        fail(f, "Merges target not related to the union of its sources");
      }
      if (r.kind == rg::PatternKind::Coheres && inst.params.mu.accepts(covered, g.target_size(r.targets.front()))) {
        fail(f, "Coheres target related to the union of its sources");
      }
    }
  }
  const auto graph = analyzer.global_graph();
  const auto labels = rg::compute_labels(graph);
  std::uint32_t max_r = 0, max_b = 0;
  for (std::uint32_t v = 0; v < graph.vertex_count(); ++v) {
    if (labels.traceable_forward[v] < labels.surviving[v]) fail(f, "lpF below lpS");
    if (labels.related[v] < labels.traceable_forward[v]) fail(f, "lpR below lpF");
    if (labels.surviving[v] > graph.group(v).cp) fail(f, "lpS above cp index");
    max_r = std::max(max_r, labels.related[v]);
    max_b = std::max(max_b, labels.traceable_backward[v]);
  }
  if (max_r < max_b) fail(f, "max lpR below max lpB");
  return f;
}

/// Online mode converges to the finalized output.
inline Failures check_mode_equivalence(const Instance& inst) {
  Failures f;
  const auto finalized = analyze(inst, rg::DetectionMode::Finalized);
  const auto online = analyze(inst, rg::DetectionMode::Online);
  for (rg::CpIndex x = 0; x < finalized.pair_count(); ++x) {
    if (!(finalized.patterns(x) == online.patterns(x))) {
      fail(f, "pair " + std::to_string(x) + ": online and finalized patterns differ");
    }
  }
  if (finalized.pair_count() != online.pair_count()) fail(f, "pair counts differ between modes");
  return f;
}

inline std::string summarize(const Failures& f) {
  std::ostringstream out;
  for (const auto& s : f) out << "  " << s << '\n';
  return out.str();
}

}  // namespace fixtures
