#include "racegroups/report.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ostream>
#include <tuple>

#include "json.hpp"

namespace racegroups {

namespace {

using Clock = std::chrono::steady_clock;
using Json = nlohmann::ordered_json;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Distance of a cp in meters, or index-based spacing without a course.
double distance(const RunConfig& config, CpIndex cp) {
  return cp < config.course.size() ? config.course[cp] : static_cast<double>(cp) + 1.0;
}

bool has_course(const RunConfig& config, const GroupingEngine& engine) {
  return !config.course.empty() && config.course.size() >= engine.cp_count();
}

std::string format_pace(double seconds_per_km) {
  const auto total = static_cast<long long>(seconds_per_km + 0.5);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld:%02lld/km", total / 60, total % 60);
  return buf;
}

std::string history_text(std::span<const HistoryEntry> history) {
  std::string out;
  for (const auto& h : history) {
    if (!out.empty()) out += ' ';
    switch (h.kind) {
      case HistoryEntry::Kind::Absent: out += '-'; break;
      case HistoryEntry::Kind::Pending: out += '?'; break;
      case HistoryEntry::Kind::Outlier: out += 'o'; break;
      case HistoryEntry::Kind::Group: out += 'g' + std::to_string(h.ordinal); break;
    }
  }
  return out;
}

Json history_json(std::span<const HistoryEntry> history) {
  auto arr = Json::array();
  for (const auto& h : history) {
    switch (h.kind) {
      case HistoryEntry::Kind::Absent: arr.push_back("absent"); break;
      case HistoryEntry::Kind::Pending: arr.push_back("pending"); break;
      case HistoryEntry::Kind::Outlier: arr.push_back("outlier"); break;
      case HistoryEntry::Kind::Group: arr.push_back(h.ordinal); break;
    }
  }
  return arr;
}

std::string join(std::span<const std::uint32_t> values) {
  std::string out;
  for (auto v : values) {
    if (!out.empty()) out += ',';
    out += std::to_string(v);
  }
  return out;
}

std::vector<AthleteStatus> selected_status(const RunReport& report, const RunConfig& config,
                                           const ReportSelection& selection) {
  std::vector<AthleteStatus> out;
  if (!selection.athletes.empty()) {
    for (auto id : selection.athletes) out.push_back(athlete_status(report, config, id));
    return out;
  }
  const auto& engine = report.analyzer->engine();
  std::vector<AthleteId> ids;
  for (AthleteIndex a = 0; a < engine.athlete_count(); ++a) ids.push_back(engine.athlete_id(a));
  std::sort(ids.begin(), ids.end());
  for (auto id : ids) out.push_back(athlete_status(report, config, id));
  return out;
}

}  // namespace

void RunConfig::validate() const {
  params.validate();
  if (!(pace_jump_factor > 1.0)) throw ConfigError("pace jump factor must be greater than 1");
}

std::uint64_t RunReport::pattern_count(PatternKind kind) const {
  std::uint64_t n = 0;
  for (const auto& p : patterns) n += p.count(kind);
  return n;
}

RunReport run(const RunConfig& config, std::span<const Event> events) {
  config.validate();
  RunReport report;
  auto analyzer = std::make_shared<RaceAnalyzer>(config.params, config.mode);
  report.events = events.size();

  auto start = Clock::now();
  for (const auto& e : events) report.accepted += analyzer->ingest(e) ? 1 : 0;
  analyzer->finish();
  report.timings.grouping = seconds_since(start);

  start = Clock::now();
  report.patterns.reserve(analyzer->pair_count());
  for (CpIndex x = 0; x < analyzer->pair_count(); ++x) report.patterns.push_back(analyzer->patterns(x));
  report.timings.patterns = seconds_since(start);

  start = Clock::now();
  report.graph = analyzer->global_graph();
  report.labels = compute_labels(report.graph);
  for (auto kind : kAllLongTermKinds) {
    report.longest[static_cast<std::size_t>(kind)] = longest(report.graph, report.labels, kind);
  }
  report.timings.longterm = seconds_since(start);

  report.cp_stats = analyzer->cp_stats();
  report.analyzer = std::move(analyzer);
  return report;
}

std::vector<SweepRow> epsilon_sweep(const RunConfig& config, std::span<const Event> events,
                                    std::span<const Millis> epsilons) {
  std::vector<SweepRow> rows;
  for (auto eps : epsilons) {
    auto c = config;
    c.params.epsilon = eps;
    const auto report = run(c, events);
    SweepRow row;
    row.epsilon = eps;
    for (const auto& s : report.cp_stats) {
      row.components_per_cp.push_back(s.components);
      row.components += s.components;
      row.groups += s.groups;
    }
    for (auto kind : kAllPatternKinds) row.patterns[static_cast<std::size_t>(kind)] = report.pattern_count(kind);
    for (std::size_t k = 0; k < 4; ++k) row.longest_edges[k] = report.longest[k].length_edges;
    rows.push_back(std::move(row));
  }
  return rows;
}

AthleteStatus athlete_status(const RunReport& report, const RunConfig& config, AthleteId athlete) {
  const auto& engine = report.analyzer->engine();
  const auto index = engine.find_athlete(athlete);
  if (!index) throw NotFoundError("unknown athlete " + std::to_string(athlete.value));
  AthleteStatus status;
  status.athlete = athlete;
  status.history = engine.group_history(athlete);
  status.last_cp = engine.last_cp(*index);
  if (!status.last_cp) throw NotFoundError("athlete " + std::to_string(athlete.value) + " has no crossings");
  status.last_time = engine.crossing_time(*index, *status.last_cp);

  // Rank by progress: furthest cp first, then earliest crossing there.
  auto key = [&](AthleteIndex a) {
    const auto cp = engine.last_cp(a);
    const Millis t = cp ? *engine.crossing_time(a, *cp) : 0;
    return std::tuple<std::int64_t, Millis, AthleteId>(cp ? -static_cast<std::int64_t>(*cp) : 1, t,
                                                        engine.athlete_id(a));
  };
  const auto mine = key(*index);
  status.position = 1;
  for (AthleteIndex a = 0; a < engine.athlete_count(); ++a) {
    if (key(a) < mine) ++status.position;
  }

  if (has_course(config, engine)) {
    std::vector<CpIndex> crossed;
    for (CpIndex cp = 0; cp <= *status.last_cp; ++cp) {
      if (engine.crossing_time(*index, cp)) crossed.push_back(cp);
    }
    if (crossed.size() >= 2) {
      auto pace = [&](CpIndex a, CpIndex b) {
        const double dt = static_cast<double>(*engine.crossing_time(*index, b) - *engine.crossing_time(*index, a));
        return dt / (distance(config, b) - distance(config, a));  // ms per m == s per km
      };
      status.segment_pace = pace(crossed[crossed.size() - 2], crossed.back());
      status.average_pace = pace(crossed.front(), crossed.back());
    }
  }
  return status;
}

std::vector<AnomalyRecord> anomalies(const RunReport& report, const RunConfig& config) {
  const auto& engine = report.analyzer->engine();
  std::vector<AnomalyRecord> out = engine.anomalies();
  const double factor = config.pace_jump_factor;
  for (AthleteIndex a = 0; a < engine.athlete_count(); ++a) {
    const auto last = engine.last_cp(a);
    if (!last) continue;
    std::optional<CpIndex> first, prev;
    for (CpIndex cp = 0; cp <= *last; ++cp) {
      const auto t = engine.crossing_time(a, cp);
      if (!t) continue;
      if (prev && first && *prev != *first) {
        const double avg = static_cast<double>(*engine.crossing_time(a, *prev) - *engine.crossing_time(a, *first)) /
                           (distance(config, *prev) - distance(config, *first));
        const double seg = static_cast<double>(*t - *engine.crossing_time(a, *prev)) /
                           (distance(config, cp) - distance(config, *prev));
        if (avg > 0 && (seg > factor * avg || seg * factor < avg)) {
          char details[96];
          std::snprintf(details, sizeof details, "segment pace %.3f vs average %.3f (factor %.2f)", seg, avg,
                        factor);
          out.push_back(AnomalyRecord{engine.athlete_id(a), AnomalyKind::PaceJump, cp, details});
        }
      }
      if (!first) first = cp;
      prev = cp;
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const AnomalyRecord& x, const AnomalyRecord& y) {
    return std::tie(x.athlete, x.cp, x.kind) < std::tie(y.athlete, y.cp, y.kind);
  });
  return out;
}

ReportSelection parse_report_selection(std::string_view list) {
  ReportSelection s;
  std::size_t start = 0;
  while (start <= list.size()) {
    auto comma = list.find(',', start);
    if (comma == std::string_view::npos) comma = list.size();
    const auto item = list.substr(start, comma - start);
    if (item == "patterns") s.patterns = true;
    else if (item == "longterm") s.longterm = true;
    else if (item == "summary") s.summary = true;
    else if (item == "status") s.status = true;
    else if (item == "anomalies") s.anomalies = true;
    else if (item == "timing") s.timing = true;
    else if (item == "all") s.patterns = s.longterm = s.summary = s.anomalies = true;
    else if (!item.empty()) throw ConfigError("unknown report '" + std::string(item) + "'");
    start = comma + 1;
  }
  return s;
}

void write_text(std::ostream& out, const RunReport& report, const RunConfig& config,
                const ReportSelection& selection) {
  if (selection.summary) {
    out << "== summary ==\n";
    out << "events " << report.events << " accepted " << report.accepted << " control_points "
        << report.cp_stats.size() << "\n";
    out << "cp  crossings  components  groups  outliers  largest\n";
    for (const auto& s : report.cp_stats) {
      char line[128];
      std::snprintf(line, sizeof line, "%-3u %10u %11u %7u %9u %8u\n", s.cp, s.crossings, s.components, s.groups,
                    s.outliers, s.largest_group);
      out << line;
    }
    out << "pattern totals:";
    for (auto kind : kAllPatternKinds) out << ' ' << to_string(kind) << '=' << report.pattern_count(kind);
    out << '\n';
  }
  if (selection.patterns) {
    out << "== patterns ==\n";
    for (const auto& set : report.patterns) {
      for (const auto& r : set.records) {
        out << set.x << "->" << set.x + 1 << ' ' << to_string(r.kind) << " sources [" << join(r.sources)
            << "] targets [" << join(r.targets) << ']';
        if (!r.absorbed.empty()) out << " absorbs [" << join(r.absorbed) << ']';
        if (!r.spawned.empty()) out << " spawns [" << join(r.spawned) << ']';
        out << '\n';
      }
      for (const auto& c : set.crossings) {
        out << set.x << "->" << set.x + 1 << " crossing edge " << c.target << " -> " << c.source << '\n';
      }
    }
  }
  if (selection.longterm) {
    out << "== long-term ==\n";
    for (const auto& r : report.longest) {
      out << to_string(r.kind) << ": " << r.length_cps << " control points (" << r.length_edges << " edges) via";
      for (const auto& g : r.witness) out << ' ' << g.cp << ':' << g.ordinal;
      out << '\n';
    }
  }
  if (selection.status) {
    out << "== status ==\n";
    for (const auto& s : selected_status(report, config, selection)) {
      out << "athlete " << s.athlete.value << " position " << s.position << " last_cp " << *s.last_cp << " at "
          << *s.last_time << " ms";
      if (s.segment_pace) out << " segment " << format_pace(*s.segment_pace) << " average " << format_pace(*s.average_pace);
      out << " history " << history_text(s.history) << '\n';
    }
  }
  if (selection.anomalies) {
    out << "== anomalies ==\n";
    for (const auto& a : anomalies(report, config)) {
      out << "athlete " << a.athlete.value << " cp " << a.cp << ' ' << to_string(a.kind) << ": " << a.details << '\n';
    }
  }
  if (selection.timing) {
    const auto& t = report.timings;
    const double algo = t.grouping + t.patterns + t.longterm;
    char line[256];
    std::snprintf(line, sizeof line,
                  "== timing ==\ningest %.3f s, grouping %.3f s, patterns %.3f s, long-term %.3f s\n"
                  "throughput %.0f events/s (sorting excluded)\n",
                  t.ingest, t.grouping, t.patterns, t.longterm, algo > 0 ? report.events / algo : 0.0);
    out << line;
  }
}

void write_records(std::ostream& out, const RunReport& report, const RunConfig& config,
                   const ReportSelection& selection) {
  auto emit = [&](const Json& j) { out << j.dump() << '\n'; };
  if (selection.summary) {
    emit(Json{{"record", "run"},
              {"events", report.events},
              {"accepted", report.accepted},
              {"control_points", report.cp_stats.size()},
              {"epsilon_ms", config.params.epsilon},
              {"min_group", config.params.min_group},
              {"mu", config.params.mu.to_string()}});
    for (const auto& s : report.cp_stats) {
      emit(Json{{"record", "cp"},
                {"cp", s.cp},
                {"crossings", s.crossings},
                {"components", s.components},
                {"groups", s.groups},
                {"outliers", s.outliers},
                {"largest_group", s.largest_group}});
    }
    for (auto kind : kAllPatternKinds) {
      emit(Json{{"record", "pattern_total"}, {"kind", to_string(kind)}, {"count", report.pattern_count(kind)}});
    }
  }
  if (selection.patterns) {
    for (const auto& set : report.patterns) {
      for (const auto& r : set.records) {
        emit(Json{{"record", "pattern"},
                  {"x", set.x},
                  {"kind", to_string(r.kind)},
                  {"sources", r.sources},
                  {"targets", r.targets},
                  {"absorbed", r.absorbed},
                  {"spawned", r.spawned}});
      }
      for (const auto& c : set.crossings) {
        emit(Json{{"record", "crossing"}, {"x", set.x}, {"source", c.source}, {"target", c.target}});
      }
    }
  }
  if (selection.longterm) {
    for (const auto& r : report.longest) {
      auto witness = Json::array();
      for (const auto& g : r.witness) witness.push_back(Json::array({g.cp, g.ordinal}));
      emit(Json{{"record", "longest"},
                {"kind", to_string(r.kind)},
                {"length_edges", r.length_edges},
                {"length_cps", r.length_cps},
                {"witness", witness}});
    }
    for (std::uint32_t v = 0; v < report.graph.vertex_count(); ++v) {
      const auto g = report.graph.group(v);
      emit(Json{{"record", "labels"},
                {"cp", g.cp},
                {"group", g.ordinal},
                {"lpS", report.labels.surviving[v]},
                {"lpF", report.labels.traceable_forward[v]},
                {"lpB", report.labels.traceable_backward[v]},
                {"lpR", report.labels.related[v]}});
    }
  }
  if (selection.status) {
    for (const auto& s : selected_status(report, config, selection)) {
      Json j{{"record", "status"},
             {"athlete", s.athlete.value},
             {"position", s.position},
             {"last_cp", *s.last_cp},
             {"last_time_ms", *s.last_time}};
      j["segment_pace_s_per_km"] = s.segment_pace ? Json(*s.segment_pace) : Json(nullptr);
      j["average_pace_s_per_km"] = s.average_pace ? Json(*s.average_pace) : Json(nullptr);
      j["history"] = history_json(s.history);
      emit(j);
    }
  }
  if (selection.anomalies) {
    for (const auto& a : anomalies(report, config)) {
      emit(Json{{"record", "anomaly"},
                {"athlete", a.athlete.value},
                {"kind", to_string(a.kind)},
                {"cp", a.cp},
                {"details", a.details}});
    }
  }
  if (selection.timing) {
    const auto& t = report.timings;
    emit(Json{{"record", "timing"},
              {"ingest_s", t.ingest},
              {"grouping_s", t.grouping},
              {"patterns_s", t.patterns},
              {"longterm_s", t.longterm}});
  }
}

void write_sweep_text(std::ostream& out, std::span<const SweepRow> rows) {
  out << "epsilon_ms  components  groups";
  for (auto kind : kAllPatternKinds) out << "  " << to_string(kind);
  for (auto kind : kAllLongTermKinds) out << "  " << to_string(kind);
  out << '\n';
  for (const auto& r : rows) {
    out << r.epsilon << "  " << r.components << "  " << r.groups;
    for (auto n : r.patterns) out << "  " << n;
    for (auto n : r.longest_edges) out << "  " << n;
    out << '\n';
  }
}

void write_sweep_records(std::ostream& out, std::span<const SweepRow> rows) {
  for (const auto& r : rows) {
    Json patterns = Json::object();
    for (auto kind : kAllPatternKinds) patterns[to_string(kind)] = r.patterns[static_cast<std::size_t>(kind)];
    Json longest = Json::object();
    for (auto kind : kAllLongTermKinds) longest[to_string(kind)] = r.longest_edges[static_cast<std::size_t>(kind)];
    out << Json{{"record", "sweep"},
                {"epsilon_ms", r.epsilon},
                {"components", r.components},
                {"groups", r.groups},
                {"components_per_cp", r.components_per_cp},
                {"patterns", patterns},
                {"longest_edges", longest}}
               .dump()
        << '\n';
  }
}

}  // namespace racegroups
