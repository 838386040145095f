#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace racegroups {

/// Opaque athlete identifier (bib number or similar).
struct AthleteId {
  std::uint64_t value = 0;

  friend constexpr auto operator<=>(AthleteId, AthleteId) = default;
};

/// Milliseconds on the shared race clock.
using Millis = std::int64_t;

/// 0-based ordinal of a control point along the course.
using CpIndex = std::uint32_t;

/// One athlete crossing one control point.
struct Event {
  AthleteId athlete;
  CpIndex cp = 0;
  Millis time = 0;

  friend constexpr bool operator==(const Event&, const Event&) = default;
};

/// Identity of a group: control point plus ordinal in finalization order
/// (which equals t_first order) at that control point.
struct GroupId {
  CpIndex cp = 0;
  std::uint32_t ordinal = 0;

  friend constexpr auto operator<=>(GroupId, GroupId) = default;
};

// Error taxonomy. Everything derives from std::exception subclasses so callers
// that only care about "something went wrong" can catch the std base.

/// Argument outside the mathematical domain (empty set in a ratio, bad mu).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Stream contract broken: events out of time order, closed control point.
class StreamError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lookup of an unknown athlete, group or control point.
class NotFoundError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Invalid configuration (parameters, generator script, CLI options).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Unreadable or fully malformed input file.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace racegroups

template <>
struct std::hash<racegroups::AthleteId> {
  std::size_t operator()(racegroups::AthleteId id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value);
  }
};
