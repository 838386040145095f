#include "racegroups/patterns.hpp"

#include <algorithm>

namespace racegroups {

namespace {

constexpr std::uint32_t kNone = EvolutionGraph::kNone;

PatternRecord make_record(PatternKind kind, CpIndex x, std::vector<std::uint32_t> sources,
                          std::vector<std::uint32_t> targets) {
  PatternRecord record;
  record.kind = kind;
  record.x = x;
  record.sources = std::move(sources);
  record.targets = std::move(targets);
  std::sort(record.sources.begin(), record.sources.end());
  std::sort(record.targets.begin(), record.targets.end());
  return record;
}

PatternRecord survives_record(const EvolutionGraph& g, std::uint32_t source, std::uint32_t target) {
  auto record = make_record(PatternKind::Survives, g.source_cp(), {source}, {target});
  for (auto r : g.forward_in(target)) {
    if (g.relation(r).source != source) record.absorbed.push_back(g.relation(r).source);
  }
  for (auto r : g.backward_in(source)) {
    if (g.relation(r).target != target) record.spawned.push_back(g.relation(r).target);
  }
  std::sort(record.absorbed.begin(), record.absorbed.end());
  std::sort(record.spawned.begin(), record.spawned.end());
  return record;
}

}  // namespace

const char* to_string(PatternKind kind) noexcept {
  switch (kind) {
    case PatternKind::Appears: return "Appears";
    case PatternKind::Disappears: return "Disappears";
    case PatternKind::Survives: return "Survives";
    case PatternKind::Expands: return "Expands";
    case PatternKind::Shrinks: return "Shrinks";
    case PatternKind::Merges: return "Merges";
    case PatternKind::Splits: return "Splits";
    case PatternKind::Coheres: return "Coheres";
    case PatternKind::Disbands: return "Disbands";
  }
  return "Unknown";
}

std::optional<PatternKind> parse_pattern_kind(std::string_view name) noexcept {
  for (auto kind : kAllPatternKinds) {
    if (name == to_string(kind)) return kind;
  }
  return std::nullopt;
}

std::size_t PatternSet::count(PatternKind kind) const noexcept {
  return static_cast<std::size_t>(std::count_if(
      records.begin(), records.end(), [kind](const PatternRecord& r) { return r.kind == kind; }));
}

void PatternSet::canonicalize() {
  std::sort(records.begin(), records.end());
  records.erase(std::unique(records.begin(), records.end()), records.end());
  std::sort(crossings.begin(), crossings.end());
  crossings.erase(std::unique(crossings.begin(), crossings.end()), crossings.end());
}

PatternRecord classify_target(const EvolutionGraph& g, std::uint32_t target, const Mu& mu,
                              DetectionMode mode) {
  if (mode == DetectionMode::Finalized && !g.complete()) {
    throw StreamError("evolution graph B(" + std::to_string(g.source_cp()) + "," +
                      std::to_string(g.target_cp()) + ") is not complete");
  }
  const auto x = g.source_cp();
  const auto f_in = g.forward_in(target);
  const auto b_out = g.backward_out(target);

  PatternRecord record;
  if (f_in.empty()) {
    if (b_out == kNone) {
      record = make_record(PatternKind::Appears, x, {}, {target});
    } else {
      const auto source = g.relation(b_out).source;
      const auto f_out = g.forward_out(source);
      if (f_out != kNone && g.relation(f_out).strong()) {
        // S' is spawned by a surviving S; the Survives record owns it.
        record = survives_record(g, source, g.relation(f_out).target);
      } else {
        const auto b_in = g.backward_in(source);
        if (b_in.size() == 1) {
          record = make_record(PatternKind::Shrinks, x, {source}, {target});
        } else {
          std::uint64_t covered = 0;
          std::vector<std::uint32_t> targets;
          targets.reserve(b_in.size());
          for (auto r : b_in) {
            covered += g.relation(r).weight;
            targets.push_back(g.relation(r).target);
          }
          const auto kind = mu.accepts(covered, g.source_size(source)) ? PatternKind::Splits
                                                                       : PatternKind::Disbands;
          record = make_record(kind, x, {source}, std::move(targets));
        }
      }
    }
  } else if (b_out != kNone && g.relation(b_out).forward) {
    record = survives_record(g, g.relation(b_out).source, target);
  } else if (f_in.size() == 1) {
    record = make_record(PatternKind::Expands, x, {g.relation(f_in[0]).source}, {target});
  } else {
    std::uint64_t covered = 0;
    std::vector<std::uint32_t> sources;
    sources.reserve(f_in.size());
    for (auto r : f_in) {
      covered += g.relation(r).weight;
      sources.push_back(g.relation(r).source);
    }
    const auto kind =
        mu.accepts(covered, g.target_size(target)) ? PatternKind::Merges : PatternKind::Coheres;
    record = make_record(kind, x, std::move(sources), {target});
  }
  record.provisional = !g.complete();
  return record;
}

std::optional<PatternRecord> classify_source(const EvolutionGraph& g, std::uint32_t source) {
  if (g.forward_out(source) != kNone || !g.backward_in(source).empty()) return std::nullopt;
  auto record = make_record(PatternKind::Disappears, g.source_cp(), {source}, {});
  record.provisional = !g.complete();
  return record;
}

std::vector<CrossingEdge> find_crossings(const EvolutionGraph& g) {
  std::vector<CrossingEdge> out;
  for (const auto& rel : g.relations()) {
    if (!rel.backward || rel.forward) continue;
    const bool target_side = !g.forward_in(rel.target).empty();
    const auto f_out = g.forward_out(rel.source);
    const bool source_side = f_out != kNone && !g.relation(f_out).strong();
    if (target_side || source_side) out.push_back(CrossingEdge{rel.source, rel.target});
  }
  std::sort(out.begin(), out.end());
  return out;
}

PatternSet detect_patterns(const EvolutionGraph& g, const Mu& mu) {
  PatternSet set;
  set.x = g.source_cp();
  set.finalized = g.complete();
  const auto mode = g.complete() ? DetectionMode::Finalized : DetectionMode::Online;
  set.records.reserve(g.target_count() + g.source_count() / 4);
  for (std::uint32_t t = 0; t < g.target_count(); ++t) {
    set.records.push_back(classify_target(g, t, mu, mode));
  }
  for (std::uint32_t s = 0; s < g.source_count(); ++s) {
    if (auto record = classify_source(g, s)) set.records.push_back(std::move(*record));
  }
  set.crossings = find_crossings(g);
  set.canonicalize();
  return set;
}

std::vector<GroupId> coverage_violations(const EvolutionGraph& g, const PatternSet& set) {
  std::vector<std::uint32_t> source_hits(g.source_count(), 0);
  std::vector<std::uint32_t> target_hits(g.target_count(), 0);
  for (const auto& r : set.records) {
    for (auto s : r.sources) ++source_hits.at(s);
    for (auto s : r.absorbed) ++source_hits.at(s);
    for (auto t : r.targets) ++target_hits.at(t);
    for (auto t : r.spawned) ++target_hits.at(t);
  }
  std::vector<GroupId> out;
  for (std::uint32_t s = 0; s < source_hits.size(); ++s) {
    if (source_hits[s] != 1) out.push_back(GroupId{g.source_cp(), s});
  }
  for (std::uint32_t t = 0; t < target_hits.size(); ++t) {
    if (target_hits[t] != 1) out.push_back(GroupId{g.target_cp(), t});
  }
  return out;
}

void OnlinePatterns::reclassify(const EvolutionGraph& g, const Mu& mu, std::uint32_t target) {
  if (by_target_.size() <= target) by_target_.resize(target + 1);
  auto record = classify_target(g, target, mu, DetectionMode::Online);
  auto& slot = by_target_[target];
  if (slot && *slot == record) return;
  ++revisions_;
  slot = std::move(record);
  if (listener_) listener_(*slot);
}

void OnlinePatterns::update(const EvolutionGraph& g, const Mu& mu,
                            std::span<const std::uint32_t> new_relations,
                            std::optional<std::uint32_t> new_target) {
  scratch_.clear();
  if (new_target) scratch_.push_back(*new_target);
  for (auto index : new_relations) {
    const auto& rel = g.relation(index);
    scratch_.push_back(rel.target);
    if (auto f = g.forward_out(rel.source); f != kNone) scratch_.push_back(g.relation(f).target);
    for (auto r : g.backward_in(rel.source)) scratch_.push_back(g.relation(r).target);
    // Targets spawned by a survivor carry a copy of its Survives record.
    if (auto b = g.backward_out(rel.target); b != kNone) {
      for (auto r : g.backward_in(g.relation(b).source)) scratch_.push_back(g.relation(r).target);
    }
  }
  std::sort(scratch_.begin(), scratch_.end());
  scratch_.erase(std::unique(scratch_.begin(), scratch_.end()), scratch_.end());
  for (auto t : scratch_) reclassify(g, mu, t);
}

PatternSet OnlinePatterns::snapshot(const EvolutionGraph& g) const {
  PatternSet set;
  set.x = x_;
  set.finalized = g.complete();
  for (const auto& slot : by_target_) {
    if (slot) set.records.push_back(*slot);
  }
  for (std::uint32_t s = 0; s < g.source_count(); ++s) {
    if (auto record = classify_source(g, s)) set.records.push_back(std::move(*record));
  }
  for (auto& r : set.records) r.provisional = !g.complete();
  set.crossings = find_crossings(g);
  set.canonicalize();
  return set;
}

}  // namespace racegroups
