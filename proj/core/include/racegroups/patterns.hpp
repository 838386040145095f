#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "racegroups/evolution_graph.hpp"
#include "racegroups/relation.hpp"

namespace racegroups {

enum class PatternKind : std::uint8_t {
  Appears,
  Disappears,
  Survives,
  Expands,
  Shrinks,
  Merges,
  Splits,
  Coheres,
  Disbands,
};

inline constexpr std::array<PatternKind, 9> kAllPatternKinds = {
    PatternKind::Appears, PatternKind::Disappears, PatternKind::Survives,
    PatternKind::Expands, PatternKind::Shrinks,    PatternKind::Merges,
    PatternKind::Splits,  PatternKind::Coheres,    PatternKind::Disbands,
};

const char* to_string(PatternKind kind) noexcept;
std::optional<PatternKind> parse_pattern_kind(std::string_view name) noexcept;

/// One classified evolution pattern between x and x+1. Ordinals refer to
/// G(x) for sources/absorbed and to G(x+1) for targets/spawned; all lists are
/// ascending.
///
/// Shape per kind: Appears has one target, Disappears one source;
/// Survives/Expands/Shrinks one of each; Merges/Coheres >= 2 sources and one
/// target; Splits/Disbands one source and >= 2 targets. Only Survives uses
/// absorbed/spawned.
struct PatternRecord {
  PatternKind kind = PatternKind::Appears;
  CpIndex x = 0;
  std::vector<std::uint32_t> sources;
  std::vector<std::uint32_t> targets;
  std::vector<std::uint32_t> absorbed;
  std::vector<std::uint32_t> spawned;
  bool provisional = false;

  friend auto operator<=>(const PatternRecord&, const PatternRecord&) = default;
};

/// Backward edge S' -> S whose endpoints the classification cannot assign to
/// exactly one record: S' also has forward-in edges from groups other than
/// S, or S has a non-strong forward edge to another target. The raw pattern
/// definitions overlap there (e.g. Expands and Shrinks on the same S').
struct CrossingEdge {
  std::uint32_t source = 0;
  std::uint32_t target = 0;

  friend auto operator<=>(const CrossingEdge&, const CrossingEdge&) = default;
};

struct PatternSet {
  CpIndex x = 0;
  std::vector<PatternRecord> records;    // canonical order, no duplicates
  std::vector<CrossingEdge> crossings;   // ascending
  bool finalized = false;

  std::size_t count(PatternKind kind) const noexcept;

  /// Sorts records and crossings and drops duplicate records.
  void canonicalize();

  friend bool operator==(const PatternSet&, const PatternSet&) = default;
};

enum class DetectionMode : std::uint8_t { Finalized, Online };

/// Classifies target S' by the degree branches of the detection algorithm.
/// In Finalized mode an incomplete graph is a state error (StreamError).
/// Online mode marks the record provisional while the graph is incomplete.
PatternRecord classify_target(const EvolutionGraph& graph, std::uint32_t target,
                              const Mu& mu, DetectionMode mode = DetectionMode::Finalized);

/// Disappears(S) iff f_out(S) = 0 and b_in(S) = 0. Every other source-side
/// outcome is owned by a classify_target record.
std::optional<PatternRecord> classify_source(const EvolutionGraph& graph, std::uint32_t source);

std::vector<CrossingEdge> find_crossings(const EvolutionGraph& graph);

/// All records of a graph: classify_target over G(x+1), classify_source over
/// G(x), deduplicated. `finalized` mirrors graph.complete().
PatternSet detect_patterns(const EvolutionGraph& graph, const Mu& mu);

/// Groups referenced by no record or by more than one, as (cp, ordinal).
/// Every entry must be an endpoint of some crossing edge.
std::vector<GroupId> coverage_violations(const EvolutionGraph& graph, const PatternSet& set);

/// Streaming ("on-the-fly") pattern state for one cp pair. Records are kept
/// per target and refreshed whenever an input of their classification
/// changes, so after the last update the snapshot equals detect_patterns.
class OnlinePatterns {
 public:
  using Listener = std::function<void(const PatternRecord&)>;

  explicit OnlinePatterns(CpIndex x) : x_(x) {}

  CpIndex x() const noexcept { return x_; }

  void set_listener(Listener listener) { listener_ = std::move(listener); }

  /// Re-evaluates everything that depends on `new_relations` and on newly
  /// registered vertices.
  void update(const EvolutionGraph& graph, const Mu& mu,
              std::span<const std::uint32_t> new_relations,
              std::optional<std::uint32_t> new_target);

  PatternSet snapshot(const EvolutionGraph& graph) const;

  std::size_t revisions() const noexcept { return revisions_; }

 private:
  void reclassify(const EvolutionGraph& graph, const Mu& mu, std::uint32_t target);

  CpIndex x_;
  std::vector<std::optional<PatternRecord>> by_target_;
  std::vector<std::uint32_t> scratch_;
  std::size_t revisions_ = 0;
  Listener listener_;
};

}  // namespace racegroups
