#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "racegroups/evolution_graph.hpp"
#include "racegroups/types.hpp"

namespace racegroups {

/// Global graph R: every group of every control point, with the relations of
/// all consecutive evolution graphs. Vertex ids are ordered by (cp, ordinal).
class GlobalGraph {
 public:
  static constexpr std::uint32_t kNone = UINT32_MAX;

  /// An edge between a vertex at cp i (`lower`) and one at cp i+1 (`upper`).
  struct Edge {
    std::uint32_t lower = 0;
    std::uint32_t upper = 0;
    std::uint32_t weight = 0;
    bool forward = false;   // lower ~ upper
    bool backward = false;  // upper ~ lower

    bool strong() const noexcept { return forward && backward; }
  };

  GlobalGraph() = default;

  /// Starts a race whose first control point holds `groups` groups.
  explicit GlobalGraph(std::uint32_t first_cp_groups);

  /// Appends B(x, x+1) where x must be the current last control point (or,
  /// for an empty graph, 0). Throws ConfigError on a gap or a vertex-count
  /// mismatch at x.
  void append(const EvolutionGraph& graph);

  std::size_t cp_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t vertex_count() const noexcept { return cp_of_.size(); }
  std::size_t group_count(CpIndex cp) const { return offsets_.at(cp + 1) - offsets_.at(cp); }

  std::uint32_t vertex(GroupId id) const;
  GroupId group(std::uint32_t vertex) const {
    const auto cp = cp_of_.at(vertex);
    return GroupId{cp, vertex - offsets_[cp]};
  }

  const std::vector<Edge>& edges() const noexcept { return edges_; }
  /// Edges from `vertex` to the next control point.
  std::span<const std::uint32_t> upper_edges(std::uint32_t vertex) const { return upper_.at(vertex); }
  /// Edges from `vertex` to the previous control point.
  std::span<const std::uint32_t> lower_edges(std::uint32_t vertex) const { return lower_.at(vertex); }

 private:
  void add_cp(std::uint32_t groups);

  std::vector<std::uint32_t> offsets_;
  std::vector<CpIndex> cp_of_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::uint32_t>> upper_;
  std::vector<std::vector<std::uint32_t>> lower_;
};

GlobalGraph build_global(std::span<const EvolutionGraph> graphs);

/// Per-vertex long-term labels, counted in edges.
struct LongTermLabels {
  std::vector<std::uint32_t> surviving;           // lpS
  std::vector<std::uint32_t> traceable_forward;   // lpF
  std::vector<std::uint32_t> traceable_backward;  // lpB
  std::vector<std::uint32_t> related;             // lpR

  friend bool operator==(const LongTermLabels&, const LongTermLabels&) = default;
};

/// Ascending sweep setting lpS, lpF and lpR. Labels already computed for
/// vertices of earlier control points are kept, so calling it again after
/// GlobalGraph::append only labels the appended control point.
void sweep_forward_labels(const GlobalGraph& graph, LongTermLabels& labels);

/// Descending sweep over backward edges setting lpB.
void sweep_backward_labels(const GlobalGraph& graph, LongTermLabels& labels);

LongTermLabels compute_labels(const GlobalGraph& graph);

enum class LongTermKind : std::uint8_t { Surviving, TraceableForward, TraceableBackward, Related };

inline constexpr std::array<LongTermKind, 4> kAllLongTermKinds = {
    LongTermKind::Surviving, LongTermKind::TraceableForward, LongTermKind::TraceableBackward,
    LongTermKind::Related};

const char* to_string(LongTermKind kind) noexcept;

const std::vector<std::uint32_t>& labels_of(const LongTermLabels& labels, LongTermKind kind);

struct LongestResult {
  LongTermKind kind = LongTermKind::Surviving;
  std::uint32_t length_edges = 0;
  std::uint32_t length_cps = 0;   // length_edges + 1, or 0 for a graph without groups
  std::vector<GroupId> witness;   // in traversal order; ends at the labelled group
};

/// Group with the largest label (ties: lowest cp, then lowest ordinal) and a
/// witness path recovered by following admissible adjacencies.
LongestResult longest(const GlobalGraph& graph, const LongTermLabels& labels, LongTermKind kind);

}  // namespace racegroups
