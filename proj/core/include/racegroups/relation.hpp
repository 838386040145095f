#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "racegroups/types.hpp"

namespace racegroups {

/// Relation threshold mu = num/den with 1/2 < mu <= 1, kept as an exact
/// rational. Every threshold test is an integer cross-multiplication.
class Mu {
 public:
  /// Throws DomainError unless 1/2 < num/den <= 1. The fraction is reduced.
  Mu(std::uint64_t num, std::uint64_t den);

  /// Parses "p/q" or a decimal such as "0.7" (converted over a power of ten).
  static Mu parse(std::string_view text);

  std::uint64_t num() const noexcept { return num_; }
  std::uint64_t den() const noexcept { return den_; }

  /// True iff shared/size >= mu, i.e. den*shared >= num*size.
  bool accepts(std::uint64_t shared, std::uint64_t size) const noexcept {
    return den_ * shared >= num_ * size;
  }

  std::string to_string() const;

  friend bool operator==(const Mu&, const Mu&) = default;

 private:
  std::uint64_t num_;
  std::uint64_t den_;
};

/// Grouping and relation parameters.
struct Params {
  Millis epsilon = 2000;
  std::uint32_t min_group = 7;
  Mu mu{7, 10};

  /// Throws ConfigError on negative epsilon or min_group == 0.
  void validate() const;
};

/// Inclusion coefficient I(A,B) = shared/size as an unreduced integer pair.
struct Inclusion {
  std::uint64_t shared = 0;  // |A ∩ B|
  std::uint64_t size = 0;    // |A|

  friend bool operator==(const Inclusion&, const Inclusion&) = default;
};

/// Athlete sets are sorted, duplicate-free spans.
using AthleteSet = std::span<const AthleteId>;

/// |A ∩ B| for sorted duplicate-free inputs.
std::uint64_t intersection_size(AthleteSet a, AthleteSet b);

/// I(A,B). Throws DomainError for empty A.
Inclusion inclusion(AthleteSet a, AthleteSet b);

/// A ~ B: I(A,B) >= mu. Throws DomainError for empty A.
bool weakly_related(AthleteSet a, AthleteSet b, const Mu& mu);

/// A ≈ B: weak relation in both directions. Throws DomainError if either set
/// is empty.
bool strongly_related(AthleteSet a, AthleteSet b, const Mu& mu);

}  // namespace racegroups
