#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "racegroups/longterm.hpp"
#include "racegroups/patterns.hpp"
#include "racegroups/relation.hpp"
#include "racegroups/types.hpp"

namespace racegroups {

/// Formation of one pack at one control point. With pack size P:
///  Whole     all P members in one group
///  Split2    A = first ceil(P/2) members, B = the rest, two groups
///  Core      A grouped, every other member alone
///  Pair      C = first m members, D = next m members, the rest alone
///  Exploded  every member alone
enum class PackState : std::uint8_t { Whole, Split2, Core, Pair, Exploded };

const char* to_string(PackState state) noexcept;
PackState parse_pack_state(std::string_view name);

/// Whether a pack may go from `from` at x to `to` at x+1.
bool transition_allowed(PackState from, PackState to) noexcept;

/// Pattern counts produced by one pack transition.
std::array<std::uint32_t, 9> transition_patterns(PackState from, PackState to) noexcept;

/// "pack P enters `state` at control point `cp`" and stays until the next step.
struct ScriptStep {
  std::uint32_t pack = 0;
  CpIndex cp = 0;
  PackState state = PackState::Whole;
};

enum class GeneratorMode : std::uint8_t { Randomized, Scripted, Crowd };

struct GeneratorConfig {
  GeneratorMode mode = GeneratorMode::Randomized;
  std::uint32_t athletes = 1000;
  std::uint32_t control_points = 10;
  double course_m = 42195.0;
  std::uint32_t pace_bands = 10;
  std::uint32_t pack_size = 25;
  Params params;
  std::uint64_t seed = 1;
  double behavior_rate = 0.02;     // randomized: chance a pack changes formation at a cp
  std::vector<ScriptStep> script;  // scripted
  Millis resolution = 1;           // crossing times are multiples of this

  /// Throws ConfigError when the packs cannot produce the promised groups.
  void validate() const;
};

struct GroundTruth {
  std::uint32_t control_points = 0;
  bool has_patterns = true;  // false for crowd data
  std::vector<std::array<std::uint64_t, 9>> per_pair;  // index by pair, then PatternKind
  std::array<std::uint32_t, 4> longest_edges{};       // by LongTermKind

  std::uint64_t count(std::size_t pair, PatternKind kind) const {
    return per_pair.at(pair)[static_cast<std::size_t>(kind)];
  }
  std::uint64_t total(PatternKind kind) const;

  std::string to_text() const;
  static GroundTruth from_text(std::string_view text);

  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

struct GeneratedRace {
  std::vector<Event> events;  // sorted by (time, cp, athlete)
  GroundTruth truth;
  std::vector<std::vector<PackState>> plan;  // [pack][cp]; empty for crowd data
};

GeneratedRace generate(const GeneratorConfig& config);

/// Expands sparse steps into a full [pack][cp] plan. Packs start Whole.
std::vector<std::vector<PackState>> expand_script(std::span<const ScriptStep> steps,
                                                  std::uint32_t packs, std::uint32_t cps);

/// Ground truth implied by a plan alone.
GroundTruth truth_from_plan(const std::vector<std::vector<PackState>>& plan, std::uint32_t cps);

/// Script text: one "pack,cp,state" line each; '#' comments.
std::vector<ScriptStep> parse_script(std::string_view text);

}  // namespace racegroups
