#include "racegroups/analyzer.hpp"

#include <algorithm>

namespace racegroups {

RaceAnalyzer::RaceAnalyzer(Params params, DetectionMode mode) : engine_(params), mode_(mode) {}

bool RaceAnalyzer::ingest(const Event& event) {
  if (finished_) throw StreamError("event after end of race");
  outputs_.clear();
  const bool accepted = engine_.ingest(event, outputs_);
  drain();
  return accepted;
}

void RaceAnalyzer::close_cp(CpIndex cp) {
  outputs_.clear();
  engine_.close_cp(cp, outputs_);
  drain();
  if (cp > 0) refresh_complete(cp - 1);
  refresh_complete(cp);
}

void RaceAnalyzer::finish() {
  if (finished_) return;
  outputs_.clear();
  engine_.finalize_all(outputs_);
  drain();
  if (engine_.cp_count() > 1) ensure_pairs(engine_.cp_count() - 1);
  for (auto& g : graphs_) g.set_complete();
  finished_ = true;
}

void RaceAnalyzer::drain() {
  for (const auto& output : outputs_) handle(output);
}

void RaceAnalyzer::ensure_pairs(std::size_t count) {
  while (graphs_.size() < count) {
    const auto x = static_cast<CpIndex>(graphs_.size());
    precursors_.emplace_back(x);
    graphs_.emplace_back(x);
    online_.emplace_back(x);
    if (listener_) online_.back().set_listener(listener_);
    const auto known = x < groups_seen_.size() ? groups_seen_[x] : 0;
    for (std::uint32_t s = 0; s < known; ++s) {
      graphs_.back().add_source(s, static_cast<std::uint32_t>(engine_.group(x, s).members.size()));
    }
  }
}

void RaceAnalyzer::apply(CpIndex x, std::span<const WeightedEdge> edges,
                         std::optional<std::uint32_t> target) {
  auto& g = graphs_[x];
  const auto before = static_cast<std::uint32_t>(g.relations().size());
  promote_relations(g, edges, params().mu);
  if (mode_ != DetectionMode::Online) return;
  relation_scratch_.clear();
  for (auto r = before; r < g.relations().size(); ++r) relation_scratch_.push_back(r);
  online_[x].update(g, params().mu, relation_scratch_, target);
}

void RaceAnalyzer::handle(const EngineOutput& output) {
  const auto cp = output.cp;
  if (output.kind == EngineOutput::Kind::Outliers) {
    if (cp < precursors_.size()) precursors_[cp].delete_tentative_edges();
    return;
  }
  if (groups_seen_.size() <= cp) groups_seen_.resize(cp + 1, 0);
  ++groups_seen_[cp];
  const auto ordinal = output.group_ordinal;
  const auto view = engine_.group(cp, ordinal);
  const auto size = static_cast<std::uint32_t>(view.members.size());

  // As a target of (cp-1, cp).
  if (cp > 0) {
    const auto x = cp - 1;
    ensure_pairs(cp);
    graphs_[x].add_target(ordinal, size);
    history_scratch_.clear();
    for (auto a : view.members) history_scratch_.push_back(engine_.history_at(a, x));
    const auto edges = precursors_[x].add_target(ordinal, history_scratch_);
    apply(x, edges, ordinal);
  }
  // As a source of (cp, cp+1), once that pair exists.
  if (cp < graphs_.size()) {
    graphs_[cp].add_source(ordinal, size);
    const auto edges = precursors_[cp].promote_tentative(ordinal);
    apply(cp, edges, std::nullopt);
  }
}

void RaceAnalyzer::refresh_complete(CpIndex x) {
  if (engine_.cp_count() <= x + 1) return;
  if (!engine_.cp_closed(x) || !engine_.cp_closed(x + 1)) return;
  ensure_pairs(x + 1);
  graphs_[x].set_complete();
}

PatternSet RaceAnalyzer::patterns(CpIndex x) const {
  const auto& g = graphs_.at(x);
  if (mode_ == DetectionMode::Online) return online_[x].snapshot(g);
  if (!g.complete()) {
    throw StreamError("patterns for (" + std::to_string(x) + "," + std::to_string(x + 1) +
                      ") requested before both control points closed");
  }
  return detect_patterns(g, params().mu);
}

void RaceAnalyzer::set_pattern_listener(OnlinePatterns::Listener listener) {
  listener_ = std::move(listener);
  for (auto& o : online_) o.set_listener(listener_);
}

GlobalGraph RaceAnalyzer::global_graph() const {
  if (!finished_) throw StreamError("global graph requested before the end of the race");
  if (graphs_.empty()) {
    if (engine_.cp_count() == 0) return GlobalGraph{};
    return GlobalGraph(static_cast<std::uint32_t>(engine_.group_count(0)));
  }
  return build_global(graphs_);
}

std::vector<CpStats> RaceAnalyzer::cp_stats() const {
  std::vector<CpStats> out;
  out.reserve(engine_.cp_count());
  for (CpIndex cp = 0; cp < engine_.cp_count(); ++cp) {
    CpStats stats;
    stats.cp = cp;
    for (const auto& c : engine_.components_at(cp)) {
      const auto n = static_cast<std::uint32_t>(c.members.size());
      stats.crossings += n;
      ++stats.components;
      if (c.group_ordinal) {
        ++stats.groups;
        stats.largest_group = std::max(stats.largest_group, n);
      } else if (!c.active) {
        stats.outliers += n;
      }
    }
    out.push_back(stats);
  }
  return out;
}

}  // namespace racegroups
