#include "doctest.h"

#include <numeric>
#include <vector>

#include "racegroups/relation.hpp"

namespace rg = racegroups;

namespace {

std::vector<rg::AthleteId> ids(std::initializer_list<std::uint64_t> values) {
  std::vector<rg::AthleteId> out;
  for (auto v : values) out.push_back(rg::AthleteId{v});
  return out;
}

std::vector<rg::AthleteId> range(std::uint64_t lo, std::uint64_t hi) {
  std::vector<rg::AthleteId> out;
  for (auto v = lo; v <= hi; ++v) out.push_back(rg::AthleteId{v});
  return out;
}

}  // namespace

TEST_CASE("mu is reduced and bounded") {
  CHECK(rg::Mu(14, 20) == rg::Mu(7, 10));
  CHECK(rg::Mu(1, 1).num() == 1);
  CHECK_THROWS_AS(rg::Mu(1, 2), rg::DomainError);
  CHECK_THROWS_AS(rg::Mu(11, 10), rg::DomainError);
  CHECK_THROWS_AS(rg::Mu(0, 0), rg::DomainError);
  CHECK(rg::Mu::parse("0.7") == rg::Mu(7, 10));
  CHECK(rg::Mu::parse("17/20") == rg::Mu(17, 20));
  CHECK(rg::Mu::parse("1") == rg::Mu(1, 1));
  CHECK_THROWS(rg::Mu::parse("0.5"));
  CHECK_THROWS(rg::Mu::parse("abc"));
}

TEST_CASE("mu accepts exactly at the threshold") {
  const rg::Mu mu(7, 10);
  CHECK(mu.accepts(7, 10));
  CHECK_FALSE(mu.accepts(6, 10));
  CHECK(mu.accepts(14, 20));
  CHECK_FALSE(mu.accepts(13, 19));
}

TEST_CASE("inclusion coefficient") {
  const auto a = range(1, 5);
  CHECK(rg::inclusion(a, a) == rg::Inclusion{5, 5});
  CHECK(rg::inclusion(a, range(6, 9)) == rg::Inclusion{0, 5});
  CHECK(rg::inclusion(ids({1, 2, 3, 4}), ids({1, 2, 5})) == rg::Inclusion{2, 4});
  CHECK_THROWS_AS(rg::inclusion({}, a), rg::DomainError);
}

TEST_CASE("weak relation") {
  const rg::Mu mu(7, 10);
  CHECK(rg::weakly_related(range(3, 5), range(1, 10), rg::Mu(1, 1)));
  for (auto m : {rg::Mu(51, 100), rg::Mu(7, 10), rg::Mu(1, 1)}) {
    CHECK_FALSE(rg::weakly_related(ids({1, 2, 3, 4}), ids({1, 2, 5}), m));
  }
  auto b = range(1, 9);
  b.push_back(rg::AthleteId{11});
  CHECK(rg::weakly_related(range(1, 10), b, mu));
  CHECK_THROWS_AS(rg::weakly_related({}, b, mu), rg::DomainError);
}

TEST_CASE("strong relation") {
  const rg::Mu mu(7, 10);
  CHECK(rg::strongly_related(range(1, 6), range(1, 6), rg::Mu(1, 1)));
  auto b = range(1, 9);
  b.push_back(rg::AthleteId{11});
  CHECK(rg::strongly_related(range(1, 10), b, mu));
  CHECK(rg::weakly_related(range(1, 4), range(1, 12), mu));
  CHECK_FALSE(rg::strongly_related(range(1, 4), range(1, 12), mu));
  CHECK_THROWS_AS(rg::strongly_related(range(1, 4), {}, mu), rg::DomainError);
}

TEST_CASE("params validation") {
  rg::Params p;
  CHECK_NOTHROW(p.validate());
  p.epsilon = -1;
  CHECK_THROWS_AS(p.validate(), rg::ConfigError);
  p.epsilon = 0;
  p.min_group = 0;
  CHECK_THROWS_AS(p.validate(), rg::ConfigError);
}
