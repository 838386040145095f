#include "racegroups/longterm.hpp"

#include <algorithm>

namespace racegroups {

GlobalGraph::GlobalGraph(std::uint32_t first_cp_groups) {
  offsets_.push_back(0);
  add_cp(first_cp_groups);
}

void GlobalGraph::add_cp(std::uint32_t groups) {
  const auto cp = static_cast<CpIndex>(offsets_.size() - 1);
  offsets_.push_back(offsets_.back() + groups);
  cp_of_.insert(cp_of_.end(), groups, cp);
  upper_.resize(cp_of_.size());
  lower_.resize(cp_of_.size());
}

void GlobalGraph::append(const EvolutionGraph& graph) {
  if (offsets_.empty()) {
    if (graph.source_cp() != 0) {
      throw ConfigError("global graph must start at control point 0, got pair starting at " +
                        std::to_string(graph.source_cp()));
    }
    offsets_.push_back(0);
    add_cp(static_cast<std::uint32_t>(graph.source_count()));
  }
  const auto last = static_cast<CpIndex>(cp_count() - 1);
  if (graph.source_cp() != last) {
    throw ConfigError("gap in evolution graph sequence: expected pair starting at " +
                      std::to_string(last) + ", got " + std::to_string(graph.source_cp()));
  }
  if (group_count(last) != graph.source_count()) {
    throw ConfigError("evolution graph at " + std::to_string(last) +
                      " disagrees on the number of groups there");
  }
  const auto lower_base = offsets_[last];
  add_cp(static_cast<std::uint32_t>(graph.target_count()));
  const auto upper_base = offsets_[last + 1];
  for (const auto& rel : graph.relations()) {
    const auto index = static_cast<std::uint32_t>(edges_.size());
    edges_.push_back(Edge{lower_base + rel.source, upper_base + rel.target, rel.weight, rel.forward,
                          rel.backward});
    upper_[lower_base + rel.source].push_back(index);
    lower_[upper_base + rel.target].push_back(index);
  }
}

std::uint32_t GlobalGraph::vertex(GroupId id) const {
  if (id.cp >= cp_count() || id.ordinal >= group_count(id.cp)) {
    throw NotFoundError("group " + std::to_string(id.cp) + ":" + std::to_string(id.ordinal) +
                        " not in global graph");
  }
  return offsets_[id.cp] + id.ordinal;
}

GlobalGraph build_global(std::span<const EvolutionGraph> graphs) {
  GlobalGraph global;
  for (const auto& g : graphs) global.append(g);
  return global;
}

void sweep_forward_labels(const GlobalGraph& graph, LongTermLabels& labels) {
  const auto n = graph.vertex_count();
  const auto done = labels.surviving.size();
  labels.surviving.resize(n, 0);
  labels.traceable_forward.resize(n, 0);
  labels.related.resize(n, 0);
  // Vertices are in cp order, so every lower neighbour is final when reached.
  for (std::uint32_t v = static_cast<std::uint32_t>(done); v < n; ++v) {
    for (auto e : graph.lower_edges(v)) {
      const auto& edge = graph.edges()[e];
      const auto u = edge.lower;
      if (edge.strong()) labels.surviving[v] = labels.surviving[u] + 1;
      if (edge.forward) {
        labels.traceable_forward[v] = std::max(labels.traceable_forward[v], labels.traceable_forward[u] + 1);
      }
      labels.related[v] = std::max(labels.related[v], labels.related[u] + 1);
    }
  }
}

void sweep_backward_labels(const GlobalGraph& graph, LongTermLabels& labels) {
  const auto n = graph.vertex_count();
  labels.traceable_backward.assign(n, 0);
  for (auto v = static_cast<std::int64_t>(n) - 1; v >= 0; --v) {
    const auto upper = static_cast<std::uint32_t>(v);
    for (auto e : graph.lower_edges(upper)) {
      const auto& edge = graph.edges()[e];
      if (!edge.backward) continue;
      auto& slot = labels.traceable_backward[edge.lower];
      slot = std::max(slot, labels.traceable_backward[upper] + 1);
    }
  }
}

LongTermLabels compute_labels(const GlobalGraph& graph) {
  LongTermLabels labels;
  sweep_forward_labels(graph, labels);
  sweep_backward_labels(graph, labels);
  return labels;
}

const char* to_string(LongTermKind kind) noexcept {
  switch (kind) {
    case LongTermKind::Surviving: return "surviving";
    case LongTermKind::TraceableForward: return "traceable-forward";
    case LongTermKind::TraceableBackward: return "traceable-backward";
    case LongTermKind::Related: return "related";
  }
  return "unknown";
}

const std::vector<std::uint32_t>& labels_of(const LongTermLabels& labels, LongTermKind kind) {
  switch (kind) {
    case LongTermKind::Surviving: return labels.surviving;
    case LongTermKind::TraceableForward: return labels.traceable_forward;
    case LongTermKind::TraceableBackward: return labels.traceable_backward;
    case LongTermKind::Related: return labels.related;
  }
  return labels.surviving;
}

namespace {

bool admissible(const GlobalGraph::Edge& edge, LongTermKind kind) {
  switch (kind) {
    case LongTermKind::Surviving: return edge.strong();
    case LongTermKind::TraceableForward: return edge.forward;
    case LongTermKind::TraceableBackward: return edge.backward;
    case LongTermKind::Related: return true;
  }
  return false;
}

}  // namespace

LongestResult longest(const GlobalGraph& graph, const LongTermLabels& labels, LongTermKind kind) {
  LongestResult result;
  result.kind = kind;
  const auto& values = labels_of(labels, kind);
  if (values.empty()) return result;
  const auto best = static_cast<std::uint32_t>(
      std::max_element(values.begin(), values.end()) - values.begin());
  result.length_edges = values[best];
  result.length_cps = result.length_edges + 1;

  // Walk from the labelled group toward the start of the path.
  const bool upward = kind == LongTermKind::TraceableBackward;
  std::vector<std::uint32_t> walk{best};
  auto v = best;
  while (values[v] > 0) {
    std::uint32_t next = GlobalGraph::kNone;
    for (auto e : upward ? graph.upper_edges(v) : graph.lower_edges(v)) {
      const auto& edge = graph.edges()[e];
      const auto other = upward ? edge.upper : edge.lower;
      if (admissible(edge, kind) && values[other] + 1 == values[v] && other < next) next = other;
    }
    if (next == GlobalGraph::kNone) break;  // labels inconsistent with graph
    walk.push_back(next);
    v = next;
  }
  std::reverse(walk.begin(), walk.end());
  result.witness.reserve(walk.size());
  for (auto w : walk) result.witness.push_back(graph.group(w));
  return result;
}

}  // namespace racegroups
