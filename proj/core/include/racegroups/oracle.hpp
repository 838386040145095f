#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "racegroups/longterm.hpp"
#include "racegroups/patterns.hpp"
#include "racegroups/relation.hpp"
#include "racegroups/types.hpp"

// Brute-force reference implementations. They trade speed for directness and
// exist to check the streaming pipeline.
namespace racegroups {

/// Sorted member ids of one group.
using MemberList = std::vector<AthleteId>;

/// Groups of every cp, in t_first order. Index = cp; cps past the last event
/// are omitted. Each cp: sort crossings by time, cut where the gap exceeds
/// epsilon, keep runs with at least m members.
std::vector<std::vector<MemberList>> oracle_groups(std::span<const Event> events, const Params& params);

/// Every pattern definition checked by set arithmetic on the full
/// memberships, then reduced to one record per group where the definitions
/// overlap (Survives wins over Splits/Disbands/Merges; Shrinks yields to any
/// forward relation into the same target; Splits/Disbands needs at least one
/// target with no forward relation). Crossing edges are flagged.
PatternSet oracle_patterns(CpIndex x, std::span<const MemberList> at_x,
                           std::span<const MemberList> at_next, const Mu& mu);

/// B(x, x+1) built from full memberships by set intersection, complete.
EvolutionGraph oracle_evolution_graph(CpIndex x, std::span<const MemberList> at_x,
                                      std::span<const MemberList> at_next, const Mu& mu);

/// Exact labels by depth-first enumeration of admissible paths. Throws
/// ConfigError once more than `path_budget` path steps have been explored.
LongTermLabels oracle_longterm(const GlobalGraph& graph, std::uint64_t path_budget = 50'000'000);

}  // namespace racegroups
