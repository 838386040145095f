#include "racegroups/relation.hpp"

#include <charconv>
#include <numeric>

namespace racegroups {

namespace {

// Keeps den * count within 64 bits for any count below 2^32.
constexpr std::uint64_t kMaxTerm = std::uint64_t{1} << 31;

std::uint64_t parse_unsigned(std::string_view text, std::string_view what) {
  std::uint64_t value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last) {
    throw DomainError("mu: malformed " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

Mu::Mu(std::uint64_t num, std::uint64_t den) : num_(num), den_(den) {
  if (den_ == 0 || num_ == 0) {
    throw DomainError("mu: numerator and denominator must be positive");
  }
  const auto g = std::gcd(num_, den_);
  num_ /= g;
  den_ /= g;
  if (num_ > kMaxTerm || den_ > kMaxTerm) {
    throw DomainError("mu: terms too large for exact comparison");
  }
  // 1/2 < p/q <= 1  <=>  q < 2p  and  p <= q
  if (!(den_ < 2 * num_) || num_ > den_) {
    throw DomainError("mu must lie in (1/2, 1], got " + std::to_string(num) + "/" +
                      std::to_string(den));
  }
}

Mu Mu::parse(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return Mu(parse_unsigned(text.substr(0, slash), "numerator"),
              parse_unsigned(text.substr(slash + 1), "denominator"));
  }
  const auto dot = text.find('.');
  if (dot == std::string_view::npos) {
    return Mu(parse_unsigned(text, "value"), 1);
  }
  const auto whole_part = text.substr(0, dot);
  const auto frac_part = text.substr(dot + 1);
  if (frac_part.empty() || frac_part.size() > 9) {
    throw DomainError("mu: decimal needs 1..9 fractional digits");
  }
  std::uint64_t scale = 1;
  for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
  const std::uint64_t whole = whole_part.empty() ? 0 : parse_unsigned(whole_part, "value");
  const std::uint64_t frac = parse_unsigned(frac_part, "value");
  return Mu(whole * scale + frac, scale);
}

std::string Mu::to_string() const {
  return std::to_string(num_) + "/" + std::to_string(den_);
}

void Params::validate() const {
  if (epsilon < 0) throw ConfigError("epsilon must be >= 0");
  if (min_group == 0) throw ConfigError("minimum group size must be >= 1");
}

std::uint64_t intersection_size(AthleteSet a, AthleteSet b) {
  std::uint64_t shared = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++shared;
      ++ia;
      ++ib;
    }
  }
  return shared;
}

Inclusion inclusion(AthleteSet a, AthleteSet b) {
  if (a.empty()) throw DomainError("inclusion coefficient undefined for empty set");
  return {intersection_size(a, b), a.size()};
}

bool weakly_related(AthleteSet a, AthleteSet b, const Mu& mu) {
  const auto inc = inclusion(a, b);
  return mu.accepts(inc.shared, inc.size);
}

bool strongly_related(AthleteSet a, AthleteSet b, const Mu& mu) {
  if (a.empty() || b.empty()) throw DomainError("strong relation undefined for empty set");
  const auto shared = intersection_size(a, b);
  return mu.accepts(shared, a.size()) && mu.accepts(shared, b.size());
}

}  // namespace racegroups
