#include "doctest.h"

#include "racegroups/report.hpp"
#include "racegroups/synth.hpp"

namespace rg = racegroups;
using rg::PackState;
using rg::PatternKind;

namespace {

rg::GeneratorConfig scripted(std::uint32_t packs, std::uint32_t cps, std::vector<rg::ScriptStep> script) {
  rg::GeneratorConfig c;
  c.mode = rg::GeneratorMode::Scripted;
  c.athletes = packs * c.pack_size;
  c.pace_bands = packs;
  c.control_points = cps;
  c.script = std::move(script);
  return c;
}

rg::RunReport analyze(const rg::GeneratorConfig& c, const rg::GeneratedRace& race) {
  rg::RunConfig rc;
  rc.params = c.params;
  return rg::run(rc, race.events);
}

void check_against_truth(const rg::GeneratorConfig& c) {
  const auto race = rg::generate(c);
  const auto report = analyze(c, race);
  REQUIRE(report.patterns.size() == race.truth.per_pair.size());
  for (std::size_t x = 0; x < report.patterns.size(); ++x) {
    for (auto kind : rg::kAllPatternKinds) {
      INFO("pair " << x << " " << rg::to_string(kind));
      CHECK(report.patterns[x].count(kind) == race.truth.count(x, kind));
    }
  }
  for (auto kind : rg::kAllLongTermKinds) {
    CHECK(report.longest[static_cast<std::size_t>(kind)].length_edges ==
          race.truth.longest_edges[static_cast<std::size_t>(kind)]);
  }
}

}  // namespace

TEST_CASE("transition table") {
  const auto split = rg::transition_patterns(PackState::Whole, PackState::Split2);
  CHECK(split[static_cast<std::size_t>(PatternKind::Splits)] == 1);
  const auto rejoin = rg::transition_patterns(PackState::Split2, PackState::Whole);
  CHECK(rejoin[static_cast<std::size_t>(PatternKind::Merges)] == 1);
  const auto pair = rg::transition_patterns(PackState::Pair, PackState::Whole);
  CHECK(pair[static_cast<std::size_t>(PatternKind::Coheres)] == 1);
  CHECK_FALSE(rg::transition_allowed(PackState::Split2, PackState::Pair));
  for (auto s : {PackState::Whole, PackState::Split2, PackState::Core, PackState::Pair, PackState::Exploded}) {
    CHECK(rg::parse_pack_state(rg::to_string(s)) == s);
  }
}

TEST_CASE("constant packs survive at every control point") {
  const auto c = scripted(4, 6, {});
  const auto race = rg::generate(c);
  CHECK(race.events.size() == 4u * 25u * 6u);
  for (std::size_t x = 0; x < 5; ++x) CHECK(race.truth.count(x, PatternKind::Survives) == 4);
  CHECK(race.truth.longest_edges[static_cast<std::size_t>(rg::LongTermKind::Surviving)] == 5);
  check_against_truth(c);
}

TEST_CASE("a split that rejoins gives one splits then one merges") {
  const auto c = scripted(1, 4, {{0, 1, PackState::Split2}, {0, 2, PackState::Whole}});
  const auto race = rg::generate(c);
  CHECK(race.truth.count(0, PatternKind::Splits) == 1);
  CHECK(race.truth.count(1, PatternKind::Merges) == 1);
  CHECK(race.truth.count(2, PatternKind::Survives) == 1);
  check_against_truth(c);
}

TEST_CASE("a pair that rejoins the pack coheres") {
  const auto c = scripted(2, 4, {{1, 1, PackState::Pair}, {1, 2, PackState::Whole}});
  const auto race = rg::generate(c);
  CHECK(race.truth.count(1, PatternKind::Coheres) == 1);
  check_against_truth(c);
}

TEST_CASE("every allowed transition matches the pipeline") {
  const std::array states{PackState::Whole, PackState::Split2, PackState::Core, PackState::Pair, PackState::Exploded};
  std::vector<rg::ScriptStep> script;
  std::uint32_t pack = 0;
  for (auto from : states) {
    for (auto to : states) {
      if (!rg::transition_allowed(from, to)) continue;
      script.push_back({pack, 1, from});
      script.push_back({pack, 2, to});
      ++pack;
    }
  }
  check_against_truth(scripted(pack, 4, script));
}

TEST_CASE("randomized generation is deterministic and matches the pipeline") {
  rg::GeneratorConfig c;
  c.athletes = 500;
  c.control_points = 12;
  c.behavior_rate = 0.3;
  c.seed = 99;
  const auto a = rg::generate(c);
  const auto b = rg::generate(c);
  CHECK(a.events == b.events);
  CHECK(a.truth == b.truth);
  check_against_truth(c);
}

TEST_CASE("crowd generation") {
  rg::GeneratorConfig c;
  c.mode = rg::GeneratorMode::Crowd;
  c.athletes = 300;
  c.control_points = 5;
  c.resolution = 1000;
  const auto race = rg::generate(c);
  CHECK_FALSE(race.truth.has_patterns);
  CHECK(race.events.size() == 1500);
  for (const auto& e : race.events) CHECK(e.time % 1000 == 0);
}

TEST_CASE("infeasible configurations are rejected") {
  auto c = scripted(1, 4, {});
  c.params.min_group = 13;
  CHECK_THROWS_AS(rg::generate(c), rg::ConfigError);
  c = scripted(1, 4, {});
  c.params.mu = rg::Mu(13, 25);
  CHECK_THROWS_AS(rg::generate(c), rg::ConfigError);
  c = scripted(1, 4, {{0, 1, PackState::Split2}, {0, 2, PackState::Pair}});
  CHECK_THROWS_AS(rg::generate(c), rg::ConfigError);
  c = scripted(1, 4, {});
  c.athletes = 30;
  CHECK_THROWS_AS(rg::generate(c), rg::ConfigError);
}

TEST_CASE("ground truth text round trip and script parsing") {
  const auto race = rg::generate(scripted(2, 5, {{0, 2, PackState::Core}}));
  CHECK(rg::GroundTruth::from_text(race.truth.to_text()) == race.truth);
  const auto steps = rg::parse_script("# plan\n0,3,split2\n1,4,exploded\n");
  REQUIRE(steps.size() == 2);
  CHECK(steps[0].state == PackState::Split2);
  CHECK(steps[1].cp == 4);
  CHECK_THROWS(rg::parse_script("0,3,sideways\n"));
}
