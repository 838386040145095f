#include "doctest.h"

#include <vector>

#include "racegroups/analyzer.hpp"
#include "racegroups/oracle.hpp"
#include "racegroups/patterns.hpp"

namespace rg = racegroups;
using rg::PatternKind;

namespace {

rg::MemberList range(std::uint64_t lo, std::uint64_t hi) {
  rg::MemberList out;
  for (auto v = lo; v <= hi; ++v) out.push_back(rg::AthleteId{v});
  return out;
}

rg::MemberList plus(rg::MemberList list, std::uint64_t extra) {
  list.push_back(rg::AthleteId{extra});
  return list;
}

rg::PatternSet detect(const std::vector<rg::MemberList>& at_x, const std::vector<rg::MemberList>& at_next,
                      const rg::Mu& mu) {
  const auto g = rg::oracle_evolution_graph(0, at_x, at_next, mu);
  return rg::detect_patterns(g, mu);
}

}  // namespace

TEST_CASE("isolated groups appear and disappear") {
  const auto set = detect({range(1, 5)}, {range(6, 10)}, rg::Mu(7, 10));
  REQUIRE(set.records.size() == 2);
  CHECK(set.count(PatternKind::Appears) == 1);
  CHECK(set.count(PatternKind::Disappears) == 1);
  CHECK(set.finalized);
}

TEST_CASE("empty graph yields no records") {
  rg::EvolutionGraph g(0);
  g.set_complete();
  CHECK(rg::detect_patterns(g, rg::Mu(7, 10)).records.empty());
}

TEST_CASE("near-identical groups survive") {
  const auto set = detect({range(1, 10)}, {plus(range(1, 9), 11)}, rg::Mu(7, 10));
  REQUIRE(set.records.size() == 1);
  const auto& r = set.records[0];
  CHECK(r.kind == PatternKind::Survives);
  CHECK(r.sources == std::vector<std::uint32_t>{0});
  CHECK(r.targets == std::vector<std::uint32_t>{0});
  CHECK(r.absorbed.empty());
  CHECK(r.spawned.empty());
}

TEST_CASE("split versus disband depends on union coverage") {
  const std::vector<rg::MemberList> before{range(1, 20)};
  const std::vector<rg::MemberList> after{plus(range(1, 8), 21), plus(range(9, 16), 22)};
  const auto split = detect(before, after, rg::Mu(7, 10));
  REQUIRE(split.records.size() == 1);
  CHECK(split.records[0].kind == PatternKind::Splits);
  CHECK(split.records[0].targets == std::vector<std::uint32_t>{0, 1});
  const auto disband = detect(before, after, rg::Mu(17, 20));
  REQUIRE(disband.records.size() == 1);
  CHECK(disband.records[0].kind == PatternKind::Disbands);
}

TEST_CASE("two sources merging and one splitting into three give two records") {
  const std::vector<rg::MemberList> before{range(1, 10), range(11, 20), range(21, 50)};
  const std::vector<rg::MemberList> after{range(1, 20), range(21, 30), range(31, 40), range(41, 50)};
  const auto set = detect(before, after, rg::Mu(7, 10));
  REQUIRE(set.records.size() == 2);
  CHECK(set.count(PatternKind::Merges) == 1);
  CHECK(set.count(PatternKind::Splits) == 1);
  CHECK(set.crossings.empty());
  const auto g = rg::oracle_evolution_graph(0, before, after, rg::Mu(7, 10));
  CHECK(rg::coverage_violations(g, set).empty());
}

TEST_CASE("expands, shrinks and coheres") {
  const rg::Mu mu(7, 10);
  CHECK(detect({range(1, 8)}, {range(1, 16)}, mu).records[0].kind == PatternKind::Expands);
  CHECK(detect({range(1, 16)}, {range(1, 8)}, mu).records[0].kind == PatternKind::Shrinks);
  const auto coheres = detect({range(1, 8), range(9, 16)}, {range(1, 30)}, mu);
  REQUIRE(coheres.records.size() == 1);
  CHECK(coheres.records[0].kind == PatternKind::Coheres);
  CHECK(coheres.records[0].sources == std::vector<std::uint32_t>{0, 1});
}

TEST_CASE("survivor absorbs and spawns") {
  // Source 0 survives into target 0, source 1 is absorbed by it, target 1
  // splits off source 0 as a spawn.
  const std::vector<rg::MemberList> before{range(1, 20), range(101, 104)};
  const std::vector<rg::MemberList> after{plus(plus(range(1, 16), 101), 102), range(17, 20)};
  auto merged = after[0];
  merged.push_back(rg::AthleteId{103});
  merged.push_back(rg::AthleteId{104});
  std::sort(merged.begin(), merged.end());
  const auto set = detect(before, {merged, after[1]}, rg::Mu(7, 10));
  REQUIRE(set.records.size() == 1);
  const auto& r = set.records[0];
  CHECK(r.kind == PatternKind::Survives);
  CHECK(r.absorbed == std::vector<std::uint32_t>{1});
  CHECK(r.spawned == std::vector<std::uint32_t>{1});
}

TEST_CASE("chain of strong pairs gives one survives per pair") {
  rg::Params p;
  p.epsilon = 1000;
  p.min_group = 3;
  rg::RaceAnalyzer analyzer(p);
  for (rg::CpIndex cp = 0; cp < 4; ++cp) {
    for (std::uint64_t a = 1; a <= 5; ++a) {
      analyzer.ingest(rg::Event{rg::AthleteId{a}, cp, cp * 100000 + static_cast<rg::Millis>(a) * 10});
    }
  }
  analyzer.finish();
  REQUIRE(analyzer.pair_count() == 3);
  for (rg::CpIndex x = 0; x < 3; ++x) {
    const auto set = analyzer.patterns(x);
    REQUIRE(set.records.size() == 1);
    CHECK(set.records[0].kind == PatternKind::Survives);
  }
}

TEST_CASE("finalized classification refuses an incomplete graph") {
  rg::EvolutionGraph g(0);
  g.add_target(0, 5);
  CHECK_THROWS_AS(rg::classify_target(g, 0, rg::Mu(7, 10)), rg::StreamError);
  const auto r = rg::classify_target(g, 0, rg::Mu(7, 10), rg::DetectionMode::Online);
  CHECK(r.kind == PatternKind::Appears);
  CHECK(r.provisional);
}

TEST_CASE("classify_source") {
  rg::EvolutionGraph g(0);
  g.add_source(0, 10);
  g.add_source(1, 10);
  g.add_source(2, 10);
  g.add_target(0, 10);
  g.add_target(1, 5);
  g.add_relation(1, 0, 10, true, true);
  g.add_relation(2, 1, 5, false, true);
  CHECK(rg::classify_source(g, 0)->kind == PatternKind::Disappears);
  CHECK_FALSE(rg::classify_source(g, 1).has_value());
  CHECK_FALSE(rg::classify_source(g, 2).has_value());
}

TEST_CASE("every small degree configuration is classified") {
  // Two sources, two targets; each pair takes one of four relation states,
  // subject to the out-degree limits.
  const rg::Mu mu(7, 10);
  int graphs = 0;
  for (int code = 0; code < 4 * 4 * 4 * 4; ++code) {
    rg::EvolutionGraph g(0);
    for (std::uint32_t s = 0; s < 2; ++s) g.add_source(s, 10);
    for (std::uint32_t t = 0; t < 2; ++t) g.add_target(t, 10);
    int c = code;
    bool ok = true;
    std::vector<bool> f_used(2), b_used(2);
    for (std::uint32_t s = 0; s < 2 && ok; ++s) {
      for (std::uint32_t t = 0; t < 2 && ok; ++t) {
        const int state = c % 4;
        c /= 4;
        const bool f = state & 1, b = state & 2;
        if ((f && f_used[s]) || (b && b_used[t])) {
          ok = false;
          break;
        }
        f_used[s] = f_used[s] || f;
        b_used[t] = b_used[t] || b;
        g.add_relation(s, t, 8, f, b);
      }
    }
    if (!ok) continue;
    g.set_complete();
    ++graphs;
    for (std::uint32_t t = 0; t < 2; ++t) CHECK_NOTHROW(rg::classify_target(g, t, mu));
    CHECK_NOTHROW(rg::detect_patterns(g, mu));
  }
  CHECK(graphs > 10);
}

TEST_CASE("online mode reports a provisional appears before the split is known") {
  rg::Params p;
  p.epsilon = 1000;
  p.min_group = 5;
  rg::RaceAnalyzer analyzer(p, rg::DetectionMode::Online);
  std::vector<rg::PatternRecord> seen;
  analyzer.set_pattern_listener([&](const rg::PatternRecord& r) { seen.push_back(r); });

  // cp 0: athletes 1..20 one second apart, one long component.
  // cp 1: athletes 1..10 pass while the cp 0 component is still open.
  std::vector<rg::Event> events;
  for (std::uint64_t a = 1; a <= 20; ++a) {
    events.push_back(rg::Event{rg::AthleteId{a}, 0, static_cast<rg::Millis>(a - 1) * 1000});
  }
  for (std::uint64_t a = 1; a <= 10; ++a) {
    events.push_back(rg::Event{rg::AthleteId{a}, 1, 10000 + static_cast<rg::Millis>(a - 1) * 100});
  }
  for (std::uint64_t a = 11; a <= 20; ++a) {
    events.push_back(rg::Event{rg::AthleteId{a}, 1, 20000 + static_cast<rg::Millis>(a - 11) * 100});
  }
  std::sort(events.begin(), events.end(), [](const auto& l, const auto& r) { return l.time < r.time; });
  for (const auto& e : events) analyzer.ingest(e);

  REQUIRE_FALSE(seen.empty());
  CHECK(seen.front().kind == PatternKind::Appears);
  CHECK(seen.front().provisional);

  analyzer.finish();
  const auto set = analyzer.patterns(0);
  REQUIRE(set.records.size() == 1);
  CHECK(set.records[0].kind == PatternKind::Splits);
  CHECK_FALSE(set.records[0].provisional);
  CHECK(set.finalized);
}

TEST_CASE("pattern names") {
  for (auto kind : rg::kAllPatternKinds) CHECK(rg::parse_pattern_kind(rg::to_string(kind)) == kind);
  CHECK_FALSE(rg::parse_pattern_kind("vanishes").has_value());
}
