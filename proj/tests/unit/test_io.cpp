#include "doctest.h"

#include <sstream>

#include "racegroups/io.hpp"

namespace rg = racegroups;

TEST_CASE("clock parsing") {
  CHECK(rg::parse_clock("0:00:00") == 0);
  CHECK(rg::parse_clock("1:02:03") == 3723000);
  CHECK(rg::parse_clock("0:00:01.250") == 1250);
  CHECK(rg::parse_clock("12:00:00") == 43200000);
  CHECK_FALSE(rg::parse_clock("").has_value());
  CHECK_FALSE(rg::parse_clock("1:61:00").has_value());
  CHECK_FALSE(rg::parse_clock("abc").has_value());
}

TEST_CASE("wide row with twelve splits") {
  std::stringstream in;
  in << "bib,5K,10K,15K,20K,HALF,25K,30K,35K,40K,41K,42K,FINISH\n";
  in << "101";
  for (int i = 1; i <= 12; ++i) in << ",0:" << (i * 4 < 10 ? "0" : "") << i * 4 << ":00";
  in << "\n";
  const auto r = rg::read_events(in);
  CHECK(r.format == rg::InputFormat::Wide);
  REQUIRE(r.events.size() == 12);
  for (rg::CpIndex cp = 0; cp < 12; ++cp) {
    CHECK(r.events[cp].cp == cp);
    CHECK(r.events[cp].athlete == rg::AthleteId{101});
  }
  CHECK(r.issues.empty());
}

TEST_CASE("empty split cell means no crossing") {
  std::stringstream in("bib,a,b,c\n7,0:01:00,,0:03:00\n");
  const auto r = rg::read_events(in, rg::InputFormat::Wide);
  REQUIRE(r.events.size() == 2);
  CHECK(r.events[0].cp == 0);
  CHECK(r.events[1].cp == 2);
}

TEST_CASE("long format and ties") {
  std::stringstream in(std::string(rg::kLongHeader) + "\n9,0,1000\n3,0,1000\n5,1,500\n");
  const auto r = rg::read_events(in);
  CHECK(r.format == rg::InputFormat::Long);
  REQUIRE(r.events.size() == 3);
  CHECK(r.events[0] == rg::Event{rg::AthleteId{5}, 1, 500});
  CHECK(r.events[1] == rg::Event{rg::AthleteId{3}, 0, 1000});
  CHECK(r.events[2] == rg::Event{rg::AthleteId{9}, 0, 1000});
}

TEST_CASE("bad rows are reported and skipped") {
  std::stringstream in(std::string(rg::kLongHeader) + "\n1,0,100\nx,0,5\n2,0\n3,0,200\n");
  const auto r = rg::read_events(in);
  CHECK(r.events.size() == 2);
  REQUIRE(r.issues.size() == 2);
  CHECK(r.issues[0].line == 3);
  CHECK(r.rows == 4);

  std::stringstream bad(std::string(rg::kLongHeader) + "\nx,y,z\n");
  CHECK_THROWS_AS(rg::read_events(bad), rg::InputError);
  std::stringstream wrong_header("a,b,c\n1,0,5\n");
  CHECK_THROWS_AS(rg::read_events(wrong_header, rg::InputFormat::Long), rg::InputError);
}

TEST_CASE("write and read back") {
  std::vector<rg::Event> events{{rg::AthleteId{1}, 0, 10}, {rg::AthleteId{2}, 0, 20}, {rg::AthleteId{1}, 1, 900}};
  std::stringstream buf;
  rg::write_events(buf, events);
  const auto r = rg::read_events(buf);
  CHECK(r.events == events);
}

TEST_CASE("course file") {
  std::stringstream good("index,meters\n0,0\n1,5000\n2,10000\n");
  CHECK(rg::read_course(good) == std::vector<double>{0, 5000, 10000});
  std::stringstream gap("0,0\n2,5000\n");
  CHECK_THROWS(rg::read_course(gap));
  std::stringstream backwards("0,100\n1,50\n");
  CHECK_THROWS(rg::read_course(backwards));
}
