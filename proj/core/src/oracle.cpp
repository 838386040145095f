#include "racegroups/oracle.hpp"

#include <algorithm>
#include <map>

namespace racegroups {

std::vector<std::vector<MemberList>> oracle_groups(std::span<const Event> events, const Params& params) {
  params.validate();
  std::map<CpIndex, std::vector<std::pair<Millis, AthleteId>>> by_cp;
  for (const auto& e : events) by_cp[e.cp].emplace_back(e.time, e.athlete);
  std::vector<std::vector<MemberList>> out;
  if (by_cp.empty()) return out;
  out.resize(by_cp.rbegin()->first + 1);
  for (auto& [cp, crossings] : by_cp) {
    std::sort(crossings.begin(), crossings.end());
    std::size_t begin = 0;
    for (std::size_t i = 1; i <= crossings.size(); ++i) {
      if (i < crossings.size() && crossings[i].first - crossings[i - 1].first <= params.epsilon) continue;
      if (i - begin >= params.min_group) {
        MemberList members;
        for (auto k = begin; k < i; ++k) members.push_back(crossings[k].second);
        std::sort(members.begin(), members.end());
        out[cp].push_back(std::move(members));
      }
      begin = i;
    }
  }
  return out;
}

namespace {

std::size_t overlap(const MemberList& a, const MemberList& b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n, ++i, ++j;
    }
  }
  return n;
}

MemberList union_of(std::span<const MemberList> all, const std::vector<std::uint32_t>& picks) {
  MemberList u;
  for (auto p : picks) u.insert(u.end(), all[p].begin(), all[p].end());
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  return u;
}

// I(a, b) >= mu
bool related(const MemberList& a, const MemberList& b, const Mu& mu) {
  return !a.empty() && mu.accepts(overlap(a, b), a.size());
}

PatternRecord record(PatternKind kind, CpIndex x, std::vector<std::uint32_t> sources,
                     std::vector<std::uint32_t> targets) {
  PatternRecord r;
  r.kind = kind;
  r.x = x;
  r.sources = std::move(sources);
  r.targets = std::move(targets);
  return r;
}

}  // namespace

PatternSet oracle_patterns(CpIndex x, std::span<const MemberList> at_x,
                           std::span<const MemberList> at_next, const Mu& mu) {
  const auto ns = static_cast<std::uint32_t>(at_x.size());
  const auto nt = static_cast<std::uint32_t>(at_next.size());
  // fwd[s][t]: S ~ S'.  bwd[s][t]: S' ~ S.
  std::vector<std::vector<bool>> fwd(ns, std::vector<bool>(nt));
  std::vector<std::vector<bool>> bwd(ns, std::vector<bool>(nt));
  for (std::uint32_t s = 0; s < ns; ++s) {
    for (std::uint32_t t = 0; t < nt; ++t) {
      fwd[s][t] = related(at_x[s], at_next[t], mu);
      bwd[s][t] = related(at_next[t], at_x[s], mu);
    }
  }
  auto sources_into = [&](std::uint32_t t) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t s = 0; s < ns; ++s) {
      if (fwd[s][t]) out.push_back(s);
    }
    return out;
  };
  auto targets_into = [&](std::uint32_t s) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t t = 0; t < nt; ++t) {
      if (bwd[s][t]) out.push_back(t);
    }
    return out;
  };
  auto survivor_of_target = [&](std::uint32_t t) -> std::optional<std::uint32_t> {
    for (std::uint32_t s = 0; s < ns; ++s) {
      if (fwd[s][t] && bwd[s][t]) return s;
    }
    return std::nullopt;
  };
  auto survivor_of_source = [&](std::uint32_t s) -> std::optional<std::uint32_t> {
    for (std::uint32_t t = 0; t < nt; ++t) {
      if (fwd[s][t] && bwd[s][t]) return t;
    }
    return std::nullopt;
  };

  PatternSet set;
  set.x = x;
  set.finalized = true;

  for (std::uint32_t s = 0; s < ns; ++s) {
    // Survives, with absorbs and spawns.
    if (auto t = survivor_of_source(s)) {
      auto r = record(PatternKind::Survives, x, {s}, {*t});
      for (auto other : sources_into(*t)) {
        if (other != s) r.absorbed.push_back(other);
      }
      for (auto other : targets_into(s)) {
        if (other != *t) r.spawned.push_back(other);
      }
      set.records.push_back(std::move(r));
    }
    // Disappears.
    bool isolated = true;
    for (std::uint32_t t = 0; t < nt; ++t) isolated = isolated && !fwd[s][t] && !bwd[s][t];
    if (isolated) set.records.push_back(record(PatternKind::Disappears, x, {s}, {}));
    // Splits / Disbands.
    const auto parts = targets_into(s);
    if (parts.size() >= 2 && !survivor_of_source(s)) {
      const bool any_unclaimed = std::any_of(parts.begin(), parts.end(), [&](std::uint32_t t) {
        return sources_into(t).empty();
      });
      if (any_unclaimed) {
        const bool whole = related(at_x[s], union_of(at_next, parts), mu);
        set.records.push_back(record(whole ? PatternKind::Splits : PatternKind::Disbands, x, {s}, parts));
      }
    }
    // Shrinks: S' ~ S for exactly one S', S !~ S', and no group of x is ~ S'.
    if (parts.size() == 1) {
      const auto t = parts.front();
      if (!fwd[s][t] && sources_into(t).empty()) {
        set.records.push_back(record(PatternKind::Shrinks, x, {s}, {t}));
      }
    }
  }

  for (std::uint32_t t = 0; t < nt; ++t) {
    bool isolated = true;
    for (std::uint32_t s = 0; s < ns; ++s) isolated = isolated && !fwd[s][t] && !bwd[s][t];
    if (isolated) set.records.push_back(record(PatternKind::Appears, x, {}, {t}));
    const auto feeders = sources_into(t);
    // Expands: exactly one S ~ S' and S' !~ S.
    if (feeders.size() == 1 && !bwd[feeders.front()][t]) {
      set.records.push_back(record(PatternKind::Expands, x, feeders, {t}));
    }
    // Merges / Coheres.
    if (feeders.size() >= 2 && !survivor_of_target(t)) {
      const bool whole = related(at_next[t], union_of(at_x, feeders), mu);
      set.records.push_back(record(whole ? PatternKind::Merges : PatternKind::Coheres, x, feeders, {t}));
    }
  }

  // Crossing edges: S' ~ S, S !~ S', and either some group of x is ~ S', or
  // S has a one-directional forward relation to another target.
  for (std::uint32_t s = 0; s < ns; ++s) {
    bool loose_forward = false;
    for (std::uint32_t t = 0; t < nt; ++t) loose_forward = loose_forward || (fwd[s][t] && !bwd[s][t]);
    for (std::uint32_t t = 0; t < nt; ++t) {
      if (!bwd[s][t] || fwd[s][t]) continue;
      if (!sources_into(t).empty() || loose_forward) set.crossings.push_back(CrossingEdge{s, t});
    }
  }
  set.canonicalize();
  return set;
}

EvolutionGraph oracle_evolution_graph(CpIndex x, std::span<const MemberList> at_x,
                                      std::span<const MemberList> at_next, const Mu& mu) {
  EvolutionGraph g(x);
  for (std::uint32_t s = 0; s < at_x.size(); ++s) g.add_source(s, static_cast<std::uint32_t>(at_x[s].size()));
  for (std::uint32_t t = 0; t < at_next.size(); ++t) g.add_target(t, static_cast<std::uint32_t>(at_next[t].size()));
  for (std::uint32_t s = 0; s < at_x.size(); ++s) {
    for (std::uint32_t t = 0; t < at_next.size(); ++t) {
      const auto w = static_cast<std::uint32_t>(overlap(at_x[s], at_next[t]));
      g.add_relation(s, t, w, related(at_x[s], at_next[t], mu), related(at_next[t], at_x[s], mu));
    }
  }
  g.set_complete();
  return g;
}

namespace {

struct Enumerator {
  const GlobalGraph& graph;
  LongTermKind kind;
  std::vector<std::uint32_t>& best;
  std::uint64_t budget;
  std::uint64_t steps = 0;

  bool admissible(const GlobalGraph::Edge& e) const {
    switch (kind) {
      case LongTermKind::Surviving: return e.forward && e.backward;
      case LongTermKind::TraceableForward: return e.forward;
      case LongTermKind::TraceableBackward: return e.backward;
      case LongTermKind::Related: return true;
    }
    return false;
  }

  // Backward paths run from later cps to earlier ones.
  bool descending() const { return kind == LongTermKind::TraceableBackward; }

  std::span<const std::uint32_t> ahead(std::uint32_t v) const {
    return descending() ? graph.lower_edges(v) : graph.upper_edges(v);
  }
  std::span<const std::uint32_t> behind(std::uint32_t v) const {
    return descending() ? graph.upper_edges(v) : graph.lower_edges(v);
  }
  std::uint32_t across(const GlobalGraph::Edge& e) const { return descending() ? e.lower : e.upper; }

  bool has_predecessor(std::uint32_t v) const {
    for (auto e : behind(v)) {
      if (admissible(graph.edges()[e])) return true;
    }
    return false;
  }

  void walk(std::uint32_t v, std::uint32_t depth) {
    if (++steps > budget) throw ConfigError("long-term oracle exceeded its path budget");
    best[v] = std::max(best[v], depth);
    for (auto e : ahead(v)) {
      const auto& edge = graph.edges()[e];
      if (admissible(edge)) walk(across(edge), depth + 1);
    }
  }
};

}  // namespace

LongTermLabels oracle_longterm(const GlobalGraph& graph, std::uint64_t path_budget) {
  LongTermLabels labels;
  std::uint64_t spent = 0;
  for (auto kind : kAllLongTermKinds) {
    auto& best = kind == LongTermKind::Surviving          ? labels.surviving
                 : kind == LongTermKind::TraceableForward ? labels.traceable_forward
                 : kind == LongTermKind::TraceableBackward ? labels.traceable_backward
                                                           : labels.related;
    best.assign(graph.vertex_count(), 0);
    Enumerator en{graph, kind, best, path_budget - spent};
    // A longest path can always be extended back to a vertex without an
    // admissible predecessor, so starting there loses nothing.
    for (std::uint32_t v = 0; v < graph.vertex_count(); ++v) {
      if (!en.has_predecessor(v)) en.walk(v, 0);
    }
    spent += en.steps;
  }
  return labels;
}

}  // namespace racegroups
