#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "racegroups/types.hpp"

namespace racegroups {

enum class InputFormat : std::uint8_t { Auto, Long, Wide };

/// Canonical long-format header.
inline constexpr std::string_view kLongHeader = "athlete_id,control_point,time_ms";

InputFormat parse_input_format(std::string_view name);

struct IngestIssue {
  std::size_t line = 0;
  std::string message;
};

struct IngestResult {
  std::vector<Event> events;  // sorted by (time, cp, athlete)
  std::vector<IngestIssue> issues;
  InputFormat format = InputFormat::Long;
  std::size_t rows = 0;  // data rows read, good or bad
};

/// Long rows are "athlete_id,control_point,time_ms". Wide rows are
/// "athlete_id,split_0,...,split_k" with H:MM:SS[.fff] cells; an empty cell
/// means no crossing. Auto picks long when the header is kLongHeader.
/// Bad rows are skipped and reported; a file whose data rows are all bad
/// throws InputError.
IngestResult read_events(std::istream& in, InputFormat format = InputFormat::Auto);
IngestResult read_events_file(const std::string& path, InputFormat format = InputFormat::Auto);

/// H:MM:SS or H:MM:SS.fff to milliseconds.
std::optional<Millis> parse_clock(std::string_view text);

void sort_events(std::vector<Event>& events);

void write_events(std::ostream& out, std::span<const Event> events);

/// Distance in meters of each control point, from "index,meters" lines.
/// Indices must be dense from 0 and distances increasing.
std::vector<double> read_course(std::istream& in);
std::vector<double> read_course_file(const std::string& path);

}  // namespace racegroups
