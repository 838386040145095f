#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "racegroups/analyzer.hpp"
#include "racegroups/longterm.hpp"
#include "racegroups/patterns.hpp"

namespace racegroups {

struct RunConfig {
  Params params;
  DetectionMode mode = DetectionMode::Finalized;
  std::vector<double> course;  // meters per cp; empty = unknown
  double pace_jump_factor = 1.5;

  void validate() const;
};

/// Wall-clock seconds per stage.
struct StageTimings {
  double ingest = 0;    // reading and sorting, filled in by the caller
  double grouping = 0;  // engine plus precursor/evolution graphs (plus online patterns)
  double patterns = 0;
  double longterm = 0;
};

struct RunReport {
  std::shared_ptr<const RaceAnalyzer> analyzer;
  std::vector<PatternSet> patterns;  // one per cp pair
  GlobalGraph graph;
  LongTermLabels labels;
  std::array<LongestResult, 4> longest;  // by LongTermKind
  std::vector<CpStats> cp_stats;
  StageTimings timings;
  std::size_t events = 0;
  std::size_t accepted = 0;

  std::uint64_t pattern_count(PatternKind kind) const;
};

/// Full pipeline over a time-sorted event list.
RunReport run(const RunConfig& config, std::span<const Event> events);

struct SweepRow {
  Millis epsilon = 0;
  std::vector<std::uint32_t> components_per_cp;
  std::uint64_t components = 0;
  std::uint64_t groups = 0;
  std::array<std::uint64_t, 9> patterns{};
  std::array<std::uint32_t, 4> longest_edges{};
};

std::vector<SweepRow> epsilon_sweep(const RunConfig& config, std::span<const Event> events,
                                    std::span<const Millis> epsilons);

struct AthleteStatus {
  AthleteId athlete;
  std::optional<CpIndex> last_cp;
  std::optional<Millis> last_time;
  std::size_t position = 0;  // 1-based
  std::optional<double> segment_pace;  // seconds per km over the last segment
  std::optional<double> average_pace;  // seconds per km since the first crossing
  std::vector<HistoryEntry> history;
};

/// Throws NotFoundError for an athlete that never crossed a control point.
AthleteStatus athlete_status(const RunReport& report, const RunConfig& config, AthleteId athlete);

/// Engine anomalies plus pace jumps: a segment whose pace differs from the
/// athlete's average over earlier segments by more than the configured
/// factor (either way). Without a course, cps are taken as equally spaced.
std::vector<AnomalyRecord> anomalies(const RunReport& report, const RunConfig& config);

struct ReportSelection {
  bool patterns = false;
  bool longterm = false;
  bool summary = false;
  bool status = false;
  bool anomalies = false;
  bool timing = false;
  std::vector<AthleteId> athletes;  // for status; empty = all
};

ReportSelection parse_report_selection(std::string_view list);

void write_text(std::ostream& out, const RunReport& report, const RunConfig& config,
                const ReportSelection& selection);
/// One JSON object per line with a fixed key order. Timing records are the
/// only nondeterministic output and appear only when selected.
void write_records(std::ostream& out, const RunReport& report, const RunConfig& config,
                   const ReportSelection& selection);

void write_sweep_text(std::ostream& out, std::span<const SweepRow> rows);
void write_sweep_records(std::ostream& out, std::span<const SweepRow> rows);

}  // namespace racegroups
