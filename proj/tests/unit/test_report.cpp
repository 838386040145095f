#include "doctest.h"

#include <sstream>

#include "race_fixtures.hpp"
#include "racegroups/report.hpp"

namespace rg = racegroups;

namespace {

rg::RunConfig config(rg::Millis eps, std::uint32_t m) {
  rg::RunConfig c;
  c.params.epsilon = eps;
  c.params.min_group = m;
  return c;
}

}  // namespace

TEST_CASE("empty input gives empty reports") {
  const auto report = rg::run(config(1000, 2), {});
  CHECK(report.patterns.empty());
  CHECK(report.graph.vertex_count() == 0);
  CHECK(report.longest[0].length_cps == 0);
  std::ostringstream out;
  rg::write_records(out, report, config(1000, 2), rg::parse_report_selection("all"));
  CHECK_FALSE(out.str().empty());
}

TEST_CASE("anomalies: skipped control point and pace jump") {
  std::vector<rg::Event> events;
  // Athlete 1 steady at 100 s per segment; athlete 2 skips cp 2; athlete 3
  // takes 400 s for the last segment.
  for (rg::CpIndex cp = 0; cp < 5; ++cp) {
    events.push_back({rg::AthleteId{1}, cp, cp * 100000});
    if (cp != 2) events.push_back({rg::AthleteId{2}, cp, cp * 100000 + 10});
    events.push_back({rg::AthleteId{3}, cp, cp < 4 ? cp * 100000 + 20 : 700000});
  }
  rg::sort_events(events);
  const auto cfg = config(1000, 2);
  const auto report = rg::run(cfg, events);
  const auto list = rg::anomalies(report, cfg);
  REQUIRE(list.size() == 2);
  CHECK(list[0].athlete == rg::AthleteId{2});
  CHECK(list[0].kind == rg::AnomalyKind::SkippedCp);
  CHECK(list[0].cp == 2);
  CHECK(list[1].athlete == rg::AthleteId{3});
  CHECK(list[1].kind == rg::AnomalyKind::PaceJump);
  CHECK(list[1].cp == 4);
}

TEST_CASE("athlete status") {
  std::vector<rg::Event> events{{rg::AthleteId{1}, 0, 0}, {rg::AthleteId{2}, 0, 50}, {rg::AthleteId{2}, 1, 1000000}};
  auto cfg = config(1000, 2);
  cfg.course = {0, 5000};
  const auto report = rg::run(cfg, events);
  const auto leader = rg::athlete_status(report, cfg, rg::AthleteId{2});
  CHECK(leader.position == 1);
  CHECK(leader.last_cp == 1u);
  REQUIRE(leader.segment_pace.has_value());
  CHECK(*leader.segment_pace == doctest::Approx(199.99));
  CHECK(rg::athlete_status(report, cfg, rg::AthleteId{1}).position == 2);
  CHECK_THROWS_AS(rg::athlete_status(report, cfg, rg::AthleteId{77}), rg::NotFoundError);
}

TEST_CASE("records output is deterministic") {
  const auto inst = fixtures::random_instance(7, 150, 10);
  rg::RunConfig cfg;
  cfg.params = inst.params;
  const auto sel = rg::parse_report_selection("patterns,longterm,summary,status,anomalies");
  std::ostringstream a, b;
  rg::write_records(a, rg::run(cfg, inst.events), cfg, sel);
  rg::write_records(b, rg::run(cfg, inst.events), cfg, sel);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("\"record\":\"run\"") != std::string::npos);
}

TEST_CASE("epsilon sweep is monotone in components") {
  const auto inst = fixtures::random_instance(11, 200, 8);
  rg::RunConfig cfg;
  cfg.params = inst.params;
  const std::vector<rg::Millis> eps{0, 100, 1000, 10000};
  const auto rows = rg::epsilon_sweep(cfg, inst.events, eps);
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].components <= rows[i - 1].components);
}

TEST_CASE("report selection parsing") {
  const auto all = rg::parse_report_selection("all");
  CHECK((all.patterns && all.longterm && all.summary && all.anomalies));
  CHECK_FALSE(all.timing);
  const auto some = rg::parse_report_selection("patterns,timing");
  CHECK(some.patterns);
  CHECK_FALSE(some.summary);
  CHECK_THROWS_AS(rg::parse_report_selection("colors"), rg::ConfigError);
}
