#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "racegroups/grouping.hpp"
#include "racegroups/relation.hpp"
#include "racegroups/types.hpp"

namespace racegroups {

/// Undirected intersection edge between a group at x and a group at x+1.
struct WeightedEdge {
  std::uint32_t source = 0;  // ordinal at x
  std::uint32_t target = 0;  // ordinal at x+1
  std::uint32_t weight = 0;  // |S ∩ S'|

  friend constexpr bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

/// Raw intersection counts P(x, x+1) between finalized groups, plus tentative
/// counts from the still-active component at x to finalized groups at x+1.
///
/// Every edge is created exactly once with its final weight: either when the
/// target group finalizes (source already a group), or when the active source
/// component finalizes as a group (tentative counts become edges).
class PrecursorGraph {
 public:
  explicit PrecursorGraph(CpIndex source_cp) : source_cp_(source_cp) {}

  CpIndex source_cp() const noexcept { return source_cp_; }

  /// A group at x+1 finalized. `at_source` holds each member's history entry
  /// at x. Group entries add edge weight, pending entries add tentative weight
  /// toward x's active component, outlier/absent contribute nothing.
  /// Returns the newly created edges.
  std::span<const WeightedEdge> add_target(std::uint32_t target,
                                           std::span<const HistoryEntry> at_source);

  /// The active component at x finalized as group `source`: tentative edges
  /// become ordinary edges. Returns the newly created edges.
  std::span<const WeightedEdge> promote_tentative(std::uint32_t source);

  /// The active component at x finished below the group threshold. Idempotent.
  void delete_tentative_edges() noexcept { tentative_.clear(); }

  /// (target ordinal, weight) pairs incident to the active component at x.
  std::span<const std::pair<std::uint32_t, std::uint32_t>> tentative_edges() const noexcept {
    return tentative_;
  }

  const std::vector<WeightedEdge>& edges() const noexcept { return edges_; }
  std::span<const std::uint32_t> source_edges(std::uint32_t source) const;
  std::span<const std::uint32_t> target_edges(std::uint32_t target) const;
  std::optional<std::uint32_t> weight(std::uint32_t source, std::uint32_t target) const;

 private:
  std::uint32_t push_edge(WeightedEdge edge);

  CpIndex source_cp_;
  std::vector<WeightedEdge> edges_;
  std::vector<std::vector<std::uint32_t>> source_adj_;
  std::vector<std::vector<std::uint32_t>> target_adj_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> tentative_;
  std::vector<std::uint32_t> counts_;   // scratch, indexed by source ordinal
  std::vector<std::uint32_t> touched_;  // scratch
};

/// One weak relation edge pair. `forward` is S ~ S', `backward` is S' ~ S;
/// both share the intersection weight.
struct Relation {
  std::uint32_t source = 0;
  std::uint32_t target = 0;
  std::uint32_t weight = 0;
  bool forward = false;
  bool backward = false;

  bool strong() const noexcept { return forward && backward; }

  friend constexpr bool operator==(const Relation&, const Relation&) = default;
};

struct DegreeView {
  std::uint32_t f_in = 0;
  std::uint32_t f_out = 0;
  std::uint32_t b_in = 0;
  std::uint32_t b_out = 0;

  friend constexpr bool operator==(const DegreeView&, const DegreeView&) = default;
};

/// Directed bipartite evolution graph B(x, x+1).
class EvolutionGraph {
 public:
  static constexpr std::uint32_t kNone = UINT32_MAX;

  explicit EvolutionGraph(CpIndex source_cp) : source_cp_(source_cp) {}

  CpIndex source_cp() const noexcept { return source_cp_; }
  CpIndex target_cp() const noexcept { return source_cp_ + 1; }

  /// Registers a vertex. Ordinals must arrive densely (0, 1, 2, ...).
  void add_source(std::uint32_t ordinal, std::uint32_t size);
  void add_target(std::uint32_t ordinal, std::uint32_t size);

  std::size_t source_count() const noexcept { return source_size_.size(); }
  std::size_t target_count() const noexcept { return target_size_.size(); }
  std::uint32_t source_size(std::uint32_t s) const { return source_size_.at(s); }
  std::uint32_t target_size(std::uint32_t t) const { return target_size_.at(t); }

  /// Inserts a relation with explicit directions. Throws std::logic_error if
  /// an out-degree would exceed one or the vertex pair already has a relation.
  /// Returns the relation index, or kNone if neither direction is set.
  std::uint32_t add_relation(std::uint32_t source, std::uint32_t target, std::uint32_t weight,
                             bool forward, bool backward);

  const std::vector<Relation>& relations() const noexcept { return relations_; }
  const Relation& relation(std::uint32_t index) const { return relations_.at(index); }

  /// Relation index of the forward edge leaving source S, or kNone.
  std::uint32_t forward_out(std::uint32_t source) const { return f_out_.at(source); }
  /// Relation index of the backward edge leaving target S', or kNone.
  std::uint32_t backward_out(std::uint32_t target) const { return b_out_.at(target); }
  /// Relation indices of forward edges entering target S'.
  std::span<const std::uint32_t> forward_in(std::uint32_t target) const { return f_in_.at(target); }
  /// Relation indices of backward edges entering source S.
  std::span<const std::uint32_t> backward_in(std::uint32_t source) const { return b_in_.at(source); }

  /// Degrees of a group at x or x+1. Throws NotFoundError otherwise.
  DegreeView degrees(GroupId group) const;

  bool complete() const noexcept { return complete_; }
  void set_complete(bool value = true) noexcept { complete_ = value; }

  /// Line-oriented dump. Vertex lines "v CP ORDINAL SIZE", then one line per
  /// directed edge "x s x' t weight F|B", sorted.
  std::string to_text() const;
  static EvolutionGraph from_text(std::string_view text);

 private:
  CpIndex source_cp_;
  std::vector<std::uint32_t> source_size_;
  std::vector<std::uint32_t> target_size_;
  std::vector<Relation> relations_;
  std::vector<std::uint32_t> f_out_;
  std::vector<std::vector<std::uint32_t>> b_in_;
  std::vector<std::uint32_t> b_out_;
  std::vector<std::vector<std::uint32_t>> f_in_;
  bool complete_ = false;
};

/// Adds forward (q*w >= p*|S|) and backward (q*w >= p*|S'|) edges for each
/// precursor edge. Vertex sizes come from `graph`.
void promote_relations(EvolutionGraph& graph, std::span<const WeightedEdge> edges, const Mu& mu);

}  // namespace racegroups
