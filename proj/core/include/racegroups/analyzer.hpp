#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "racegroups/evolution_graph.hpp"
#include "racegroups/grouping.hpp"
#include "racegroups/longterm.hpp"
#include "racegroups/patterns.hpp"

namespace racegroups {

struct CpStats {
  CpIndex cp = 0;
  std::uint32_t crossings = 0;
  std::uint32_t components = 0;
  std::uint32_t groups = 0;
  std::uint32_t outliers = 0;
  std::uint32_t largest_group = 0;

  friend bool operator==(const CpStats&, const CpStats&) = default;
};

/// Streaming pipeline: grouping engine, precursor and evolution graphs per cp
/// pair, and (in online mode) incrementally maintained pattern records.
class RaceAnalyzer {
 public:
  explicit RaceAnalyzer(Params params, DetectionMode mode = DetectionMode::Finalized);

  const Params& params() const noexcept { return engine_.params(); }
  DetectionMode mode() const noexcept { return mode_; }

  /// Same contract as GroupingEngine::ingest.
  bool ingest(const Event& event);

  /// Declares that no more crossings will arrive at `cp`.
  void close_cp(CpIndex cp);

  /// Broom wagon. Completes every evolution graph.
  void finish();
  bool finished() const noexcept { return finished_; }

  const GroupingEngine& engine() const noexcept { return engine_; }

  /// Number of cp pairs (x, x+1) seen so far.
  std::size_t pair_count() const noexcept { return graphs_.size(); }
  const EvolutionGraph& evolution(CpIndex x) const { return graphs_.at(x); }
  const PrecursorGraph& precursor(CpIndex x) const { return precursors_.at(x); }
  const std::vector<EvolutionGraph>& evolution_graphs() const noexcept { return graphs_; }

  /// Finalized mode: detect_patterns on a complete graph, StreamError while
  /// incomplete. Online mode: current (possibly provisional) records.
  PatternSet patterns(CpIndex x) const;

  /// Called for every new or revised online record.
  void set_pattern_listener(OnlinePatterns::Listener listener);

  /// Global graph over all pairs. Requires finish().
  GlobalGraph global_graph() const;

  std::vector<CpStats> cp_stats() const;

 private:
  void handle(const EngineOutput& output);
  void ensure_pairs(std::size_t count);
  void apply(CpIndex x, std::span<const WeightedEdge> edges, std::optional<std::uint32_t> target);
  void refresh_complete(CpIndex x);
  void drain();

  GroupingEngine engine_;
  DetectionMode mode_;
  std::vector<PrecursorGraph> precursors_;
  std::vector<EvolutionGraph> graphs_;
  std::vector<OnlinePatterns> online_;
  std::vector<std::uint32_t> groups_seen_;  // processed group outputs per cp
  std::vector<EngineOutput> outputs_;
  std::vector<HistoryEntry> history_scratch_;
  std::vector<std::uint32_t> relation_scratch_;
  OnlinePatterns::Listener listener_;
  bool finished_ = false;
};

}  // namespace racegroups
