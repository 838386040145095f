#include "racegroups/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

namespace racegroups {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
std::optional<T> parse_uint(std::string_view s) {
  T value{};
  if (s.empty()) return std::nullopt;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::optional<double> parse_double(std::string_view s) {
  double value = 0;
  if (s.empty()) return std::nullopt;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

}  // namespace

InputFormat parse_input_format(std::string_view name) {
  if (name == "auto") return InputFormat::Auto;
  if (name == "long") return InputFormat::Long;
  if (name == "wide") return InputFormat::Wide;
  throw ConfigError("unknown input format '" + std::string(name) + "' (expected long, wide or auto)");
}

std::optional<Millis> parse_clock(std::string_view text) {
  text = trim(text);
  const auto c1 = text.find(':');
  if (c1 == std::string_view::npos) return std::nullopt;
  const auto c2 = text.find(':', c1 + 1);
  if (c2 == std::string_view::npos) return std::nullopt;
  auto secs_text = text.substr(c2 + 1);
  std::string_view frac;
  if (auto dot = secs_text.find('.'); dot != std::string_view::npos) {
    frac = secs_text.substr(dot + 1);
    secs_text = secs_text.substr(0, dot);
    if (frac.empty() || frac.size() > 3) return std::nullopt;
  }
  const auto h = parse_uint<std::uint64_t>(text.substr(0, c1));
  const auto m = parse_uint<std::uint64_t>(text.substr(c1 + 1, c2 - c1 - 1));
  const auto s = parse_uint<std::uint64_t>(secs_text);
  if (!h || !m || !s || *m >= 60 || *s >= 60 || c2 - c1 - 1 != 2 || secs_text.size() != 2) return std::nullopt;
  Millis ms = 0;
  if (!frac.empty()) {
    auto f = parse_uint<std::uint64_t>(frac);
    if (!f) return std::nullopt;
    ms = static_cast<Millis>(*f);
    for (auto k = frac.size(); k < 3; ++k) ms *= 10;
  }
  if (*h > 1'000'000) return std::nullopt;
  return static_cast<Millis>((*h * 3600 + *m * 60 + *s) * 1000) + ms;
}

void sort_events(std::vector<Event>& events) {
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.time != b.time) return a.time < b.time;
    if (a.cp != b.cp) return a.cp < b.cp;
    return a.athlete < b.athlete;
  });
}

IngestResult read_events(std::istream& in, InputFormat format) {
  IngestResult result;
  std::string line;
  std::size_t line_no = 0;
  // Header (skipping blank lines).
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) return result;
  const auto header = split_csv(line);
  const bool long_header = header.size() == 3 && header[0] == "athlete_id" &&
                           header[1] == "control_point" && header[2] == "time_ms";
  if (format == InputFormat::Auto) format = long_header ? InputFormat::Long : InputFormat::Wide;
  result.format = format;
  if (format == InputFormat::Long && !long_header) {
    throw InputError("line " + std::to_string(line_no) + ": expected header '" + std::string(kLongHeader) + "'");
  }
  if (format == InputFormat::Wide && header.size() < 2) {
    throw InputError("line " + std::to_string(line_no) + ": wide header needs an id column and split columns");
  }
  const auto columns = header.size();
  auto issue = [&](std::string message) { result.issues.push_back(IngestIssue{line_no, std::move(message)}); };

  std::vector<Event> row_events;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++result.rows;
    const auto cells = split_csv(line);
    if (cells.size() != columns) {
      issue("expected " + std::to_string(columns) + " fields, got " + std::to_string(cells.size()));
      continue;
    }
    const auto id = parse_uint<std::uint64_t>(cells[0]);
    if (!id) {
      issue("bad athlete id '" + std::string(cells[0]) + "'");
      continue;
    }
    if (format == InputFormat::Long) {
      const auto cp = parse_uint<CpIndex>(cells[1]);
      const auto t = parse_uint<std::uint64_t>(cells[2]);
      if (!cp || !t || *t > static_cast<std::uint64_t>(INT64_MAX)) {
        issue("bad control point or time");
        continue;
      }
      result.events.push_back(Event{AthleteId{*id}, *cp, static_cast<Millis>(*t)});
      continue;
    }
    row_events.clear();
    bool ok = true;
    for (std::size_t c = 1; c < cells.size(); ++c) {
      if (cells[c].empty()) continue;
      const auto t = parse_clock(cells[c]);
      if (!t) {
        issue("bad split '" + std::string(cells[c]) + "' in column " + std::to_string(c + 1));
        ok = false;
        break;
      }
      row_events.push_back(Event{AthleteId{*id}, static_cast<CpIndex>(c - 1), *t});
    }
    if (ok) result.events.insert(result.events.end(), row_events.begin(), row_events.end());
  }
  if (result.rows > 0 && result.issues.size() == result.rows) {
    throw InputError("no usable rows; first problem at line " + std::to_string(result.issues.front().line) +
                     ": " + result.issues.front().message);
  }
  sort_events(result.events);
  return result;
}

IngestResult read_events_file(const std::string& path, InputFormat format) {
  auto in = open(path);
  return read_events(in, format);
}

void write_events(std::ostream& out, std::span<const Event> events) {
  out << kLongHeader << '\n';
  for (const auto& e : events) out << e.athlete.value << ',' << e.cp << ',' << e.time << '\n';
}

std::vector<double> read_course(std::istream& in) {
  std::vector<double> meters;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto cells = split_csv(body);
    if (cells.size() != 2) throw InputError("course line " + std::to_string(line_no) + ": expected index,meters");
    const auto index = parse_uint<std::size_t>(cells[0]);
    const auto d = parse_double(cells[1]);
    if (!index || !d) {
      if (meters.empty() && line_no == 1) continue;  // header
      throw InputError("course line " + std::to_string(line_no) + ": expected index,meters");
    }
    if (*index != meters.size()) {
      throw InputError("course line " + std::to_string(line_no) + ": expected index " + std::to_string(meters.size()));
    }
    if (*d < 0 || (!meters.empty() && *d <= meters.back())) {
      throw InputError("course line " + std::to_string(line_no) + ": distances must increase");
    }
    meters.push_back(*d);
  }
  return meters;
}

std::vector<double> read_course_file(const std::string& path) {
  auto in = open(path);
  return read_course(in);
}

}  // namespace racegroups
