#include "racegroups/evolution_graph.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace racegroups {

std::uint32_t PrecursorGraph::push_edge(WeightedEdge edge) {
  const auto index = static_cast<std::uint32_t>(edges_.size());
  edges_.push_back(edge);
  if (source_adj_.size() <= edge.source) source_adj_.resize(edge.source + 1);
  if (target_adj_.size() <= edge.target) target_adj_.resize(edge.target + 1);
  source_adj_[edge.source].push_back(index);
  target_adj_[edge.target].push_back(index);
  return index;
}

std::span<const WeightedEdge> PrecursorGraph::add_target(std::uint32_t target,
                                                         std::span<const HistoryEntry> at_source) {
  std::uint32_t pending = 0;
  for (const auto& entry : at_source) {
    switch (entry.kind) {
      case HistoryEntry::Kind::Group:
        if (counts_.size() <= entry.ordinal) counts_.resize(entry.ordinal + 1, 0);
        if (counts_[entry.ordinal]++ == 0) touched_.push_back(entry.ordinal);
        break;
      case HistoryEntry::Kind::Pending:
        ++pending;
        break;
      case HistoryEntry::Kind::Outlier:
      case HistoryEntry::Kind::Absent:
        break;
    }
  }
  const auto first = edges_.size();
  std::sort(touched_.begin(), touched_.end());
  for (auto source : touched_) {
    push_edge(WeightedEdge{source, target, counts_[source]});
    counts_[source] = 0;
  }
  touched_.clear();
  if (pending > 0) tentative_.emplace_back(target, pending);
  return std::span<const WeightedEdge>(edges_.data() + first, edges_.size() - first);
}

std::span<const WeightedEdge> PrecursorGraph::promote_tentative(std::uint32_t source) {
  const auto first = edges_.size();
  for (auto [target, weight] : tentative_) push_edge(WeightedEdge{source, target, weight});
  tentative_.clear();
  return std::span<const WeightedEdge>(edges_.data() + first, edges_.size() - first);
}

std::span<const std::uint32_t> PrecursorGraph::source_edges(std::uint32_t source) const {
  if (source >= source_adj_.size()) return {};
  return source_adj_[source];
}

std::span<const std::uint32_t> PrecursorGraph::target_edges(std::uint32_t target) const {
  if (target >= target_adj_.size()) return {};
  return target_adj_[target];
}

std::optional<std::uint32_t> PrecursorGraph::weight(std::uint32_t source,
                                                    std::uint32_t target) const {
  for (auto index : source_edges(source)) {
    if (edges_[index].target == target) return edges_[index].weight;
  }
  return std::nullopt;
}

void EvolutionGraph::add_source(std::uint32_t ordinal, std::uint32_t size) {
  if (ordinal != source_size_.size()) {
    throw std::logic_error("evolution graph: source ordinals must be dense");
  }
  source_size_.push_back(size);
  f_out_.push_back(kNone);
  b_in_.emplace_back();
}

void EvolutionGraph::add_target(std::uint32_t ordinal, std::uint32_t size) {
  if (ordinal != target_size_.size()) {
    throw std::logic_error("evolution graph: target ordinals must be dense");
  }
  target_size_.push_back(size);
  b_out_.push_back(kNone);
  f_in_.emplace_back();
}

std::uint32_t EvolutionGraph::add_relation(std::uint32_t source, std::uint32_t target,
                                           std::uint32_t weight, bool forward, bool backward) {
  if (source >= source_size_.size() || target >= target_size_.size()) {
    throw std::logic_error("evolution graph: relation references unknown vertex");
  }
  if (!forward && !backward) return kNone;
  if (forward && f_out_[source] != kNone) {
    throw std::logic_error("evolution graph: second forward edge out of source " +
                           std::to_string(source));
  }
  if (backward && b_out_[target] != kNone) {
    throw std::logic_error("evolution graph: second backward edge out of target " +
                           std::to_string(target));
  }
  for (auto r : b_in_[source]) {
    if (relations_[r].target == target) throw std::logic_error("evolution graph: duplicate relation");
  }
  if (f_out_[source] != kNone && relations_[f_out_[source]].target == target) {
    throw std::logic_error("evolution graph: duplicate relation");
  }
  const auto index = static_cast<std::uint32_t>(relations_.size());
  relations_.push_back(Relation{source, target, weight, forward, backward});
  if (forward) {
    f_out_[source] = index;
    f_in_[target].push_back(index);
  }
  if (backward) {
    b_out_[target] = index;
    b_in_[source].push_back(index);
  }
  return index;
}

DegreeView EvolutionGraph::degrees(GroupId group) const {
  if (group.cp == source_cp_ && group.ordinal < source_size_.size()) {
    return DegreeView{0, f_out_[group.ordinal] != kNone ? 1u : 0u,
                      static_cast<std::uint32_t>(b_in_[group.ordinal].size()), 0};
  }
  if (group.cp == target_cp() && group.ordinal < target_size_.size()) {
    return DegreeView{static_cast<std::uint32_t>(f_in_[group.ordinal].size()), 0, 0,
                      b_out_[group.ordinal] != kNone ? 1u : 0u};
  }
  throw NotFoundError("group " + std::to_string(group.cp) + ":" + std::to_string(group.ordinal) +
                      " is not a vertex of B(" + std::to_string(source_cp_) + "," +
                      std::to_string(target_cp()) + ")");
}

std::string EvolutionGraph::to_text() const {
  std::ostringstream out;
  for (std::uint32_t s = 0; s < source_size_.size(); ++s) {
    out << "v " << source_cp_ << ' ' << s << ' ' << source_size_[s] << '\n';
  }
  for (std::uint32_t t = 0; t < target_size_.size(); ++t) {
    out << "v " << target_cp() << ' ' << t << ' ' << target_size_[t] << '\n';
  }
  std::vector<std::tuple<std::uint32_t, std::uint32_t, char, std::uint32_t>> lines;
  for (const auto& r : relations_) {
    if (r.forward) lines.emplace_back(r.source, r.target, 'F', r.weight);
    if (r.backward) lines.emplace_back(r.source, r.target, 'B', r.weight);
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& [s, t, dir, w] : lines) {
    out << source_cp_ << ' ' << s << ' ' << target_cp() << ' ' << t << ' ' << w << ' ' << dir
        << '\n';
  }
  return out.str();
}

EvolutionGraph EvolutionGraph::from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::optional<EvolutionGraph> graph;
  struct Pending {
    std::uint32_t s, t, w;
    bool f, b;
  };
  std::vector<Pending> edges;
  std::vector<std::tuple<CpIndex, std::uint32_t, std::uint32_t>> vertices;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    if (line[0] == 'v') {
      char tag = 0;
      CpIndex cp = 0;
      std::uint32_t ordinal = 0, size = 0;
      if (!(fields >> tag >> cp >> ordinal >> size)) {
        throw InputError("evolution graph line " + std::to_string(line_no) + ": bad vertex");
      }
      vertices.emplace_back(cp, ordinal, size);
      continue;
    }
    CpIndex x = 0, x2 = 0;
    std::uint32_t s = 0, t = 0, w = 0;
    char dir = 0;
    if (!(fields >> x >> s >> x2 >> t >> w >> dir) || x2 != x + 1 || (dir != 'F' && dir != 'B')) {
      throw InputError("evolution graph line " + std::to_string(line_no) + ": bad edge");
    }
    if (!graph) graph.emplace(x);
    if (graph->source_cp() != x) {
      throw InputError("evolution graph line " + std::to_string(line_no) + ": mixed cp pairs");
    }
    auto it = std::find_if(edges.begin(), edges.end(),
                           [&](const Pending& p) { return p.s == s && p.t == t; });
    if (it == edges.end()) it = edges.insert(edges.end(), Pending{s, t, w, false, false});
    (dir == 'F' ? it->f : it->b) = true;
  }
  if (!graph) {
    if (vertices.empty()) throw InputError("evolution graph: empty text");
    graph.emplace(std::get<0>(vertices.front()));
  }
  std::sort(vertices.begin(), vertices.end());
  for (const auto& [cp, ordinal, size] : vertices) {
    if (cp == graph->source_cp()) {
      graph->add_source(ordinal, size);
    } else if (cp == graph->target_cp()) {
      graph->add_target(ordinal, size);
    } else {
      throw InputError("evolution graph: vertex outside the cp pair");
    }
  }
  for (const auto& e : edges) graph->add_relation(e.s, e.t, e.w, e.f, e.b);
  return std::move(*graph);
}

void promote_relations(EvolutionGraph& graph, std::span<const WeightedEdge> edges, const Mu& mu) {
  for (const auto& edge : edges) {
    const bool forward = mu.accepts(edge.weight, graph.source_size(edge.source));
    const bool backward = mu.accepts(edge.weight, graph.target_size(edge.target));
    graph.add_relation(edge.source, edge.target, edge.weight, forward, backward);
  }
}

}  // namespace racegroups
