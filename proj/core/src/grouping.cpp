#include "racegroups/grouping.hpp"

#include <algorithm>

namespace racegroups {

namespace {

constexpr CpIndex kMaxControlPoints = CpIndex{1} << 20;

}  // namespace

const char* to_string(AnomalyKind kind) noexcept {
  switch (kind) {
    case AnomalyKind::SkippedCp: return "skipped-cp";
    case AnomalyKind::OrderViolation: return "order-violation";
    case AnomalyKind::DuplicateEvent: return "duplicate-event";
    case AnomalyKind::PaceJump: return "pace-jump";
  }
  return "unknown";
}

GroupingEngine::GroupingEngine(Params params) : params_(params) { params_.validate(); }

GroupingEngine::CpState& GroupingEngine::ensure_cp(CpIndex cp) {
  if (cp >= kMaxControlPoints) {
    throw StreamError("control point index " + std::to_string(cp) + " out of range");
  }
  if (cp >= cps_.size()) {
    if (all_closed_) throw StreamError("event after end of race");
    cps_.resize(cp + 1);
  }
  return cps_[cp];
}

AthleteIndex GroupingEngine::intern(AthleteId id) {
  auto [it, inserted] = index_of_.try_emplace(id, static_cast<AthleteIndex>(athletes_.size()));
  if (inserted) athletes_.push_back(AthleteTrack{id, {}, {}, -1});
  return it->second;
}

void GroupingEngine::record_anomaly(AthleteId athlete, AnomalyKind kind, CpIndex cp,
                                    std::string details) {
  const auto index = index_of_.at(athlete);
  const std::uint64_t key = (std::uint64_t{index} << 32) | (std::uint64_t{cp} << 2) |
                            static_cast<std::uint64_t>(kind);
  if (anomaly_keys_.insert(key).second) {
    anomalies_.push_back(AnomalyRecord{athlete, kind, cp, std::move(details)});
  }
}

bool GroupingEngine::ingest(const Event& event, std::vector<EngineOutput>& out) {
  if (seen_any_ && event.time < last_time_) {
    throw StreamError("event at t=" + std::to_string(event.time) + " ms arrived after t=" +
                      std::to_string(last_time_) + " ms");
  }
  if (event.time < 0) throw StreamError("negative timestamp");
  auto& state = ensure_cp(event.cp);
  if (state.closed) {
    throw StreamError("control point " + std::to_string(event.cp) + " already closed");
  }
  seen_any_ = true;
  last_time_ = event.time;

  const auto athlete = intern(event.athlete);
  auto& track = athletes_[athlete];
  if (track.last_cp >= 0) {
    const auto last = static_cast<CpIndex>(track.last_cp);
    if (event.cp == last ||
        (event.cp < track.entries.size() && track.entries[event.cp].kind != HistoryEntry::Kind::Absent)) {
      record_anomaly(event.athlete, AnomalyKind::DuplicateEvent, event.cp,
                     "second crossing at t=" + std::to_string(event.time));
      return false;
    }
    if (event.cp < last) {
      record_anomaly(event.athlete, AnomalyKind::OrderViolation, event.cp,
                     "crossed after control point " + std::to_string(last));
      return false;
    }
    if (event.time <= track.times[last]) {
      record_anomaly(event.athlete, AnomalyKind::OrderViolation, event.cp,
                     "crossing time not later than control point " + std::to_string(last));
      return false;
    }
  }
  const CpIndex first_missing = static_cast<CpIndex>(track.last_cp + 1);
  for (CpIndex skipped = first_missing; skipped < event.cp; ++skipped) {
    record_anomaly(event.athlete, AnomalyKind::SkippedCp, skipped,
                   "no crossing recorded before control point " + std::to_string(event.cp));
  }

  // Chain against the last arrival of the active component.
  if (state.has_active && event.time - state.active.t_last > params_.epsilon) {
    finish_active(event.cp, out);
  }
  if (!state.has_active) {
    state.has_active = true;
    state.active = ComponentRecord{static_cast<std::uint32_t>(state.pool.size()), 0, event.time,
                                   event.time, -1};
  }
  state.pool.push_back(athlete);
  ++state.active.size;
  state.active.t_last = event.time;

  if (track.entries.size() <= event.cp) {
    track.entries.resize(event.cp + 1, HistoryEntry::absent());
    track.times.resize(event.cp + 1, -1);
  }
  track.entries[event.cp] = HistoryEntry::pending();
  track.times[event.cp] = event.time;
  track.last_cp = event.cp;
  ++accepted_events_;
  return true;
}

std::vector<EngineOutput> GroupingEngine::ingest_event(const Event& event) {
  std::vector<EngineOutput> out;
  ingest(event, out);
  return out;
}

void GroupingEngine::finish_active(CpIndex cp, std::vector<EngineOutput>& out) {
  auto& state = cps_[cp];
  if (!state.has_active) return;
  auto record = state.active;
  state.has_active = false;
  const auto component = static_cast<std::uint32_t>(state.finished.size());
  const std::span<const AthleteIndex> members(state.pool.data() + record.begin, record.size);
  if (record.size >= params_.min_group) {
    const auto ordinal = static_cast<std::uint32_t>(state.group_components.size());
    record.group_ordinal = ordinal;
    state.group_components.push_back(component);
    for (auto a : members) athletes_[a].entries[cp] = HistoryEntry::group(ordinal);
    state.finished.push_back(record);
    out.push_back(EngineOutput{EngineOutput::Kind::Group, cp, component, ordinal});
  } else {
    for (auto a : members) athletes_[a].entries[cp] = HistoryEntry::outlier();
    state.finished.push_back(record);
    out.push_back(EngineOutput{EngineOutput::Kind::Outliers, cp, component, 0});
  }
}

void GroupingEngine::close_cp(CpIndex cp, std::vector<EngineOutput>& out) {
  auto& state = ensure_cp(cp);
  finish_active(cp, out);
  state.closed = true;
}

void GroupingEngine::finalize_all(std::vector<EngineOutput>& out) {
  for (CpIndex cp = 0; cp < cps_.size(); ++cp) {
    finish_active(cp, out);
    cps_[cp].closed = true;
  }
  all_closed_ = true;
}

std::vector<EngineOutput> GroupingEngine::finalize_all() {
  std::vector<EngineOutput> out;
  finalize_all(out);
  return out;
}

bool GroupingEngine::cp_closed(CpIndex cp) const {
  return cp < cps_.size() ? cps_[cp].closed : all_closed_;
}

std::optional<AthleteIndex> GroupingEngine::find_athlete(AthleteId id) const {
  if (auto it = index_of_.find(id); it != index_of_.end()) return it->second;
  return std::nullopt;
}

std::vector<HistoryEntry> GroupingEngine::group_history(AthleteId id) const {
  const auto index = find_athlete(id);
  if (!index) throw NotFoundError("unknown athlete " + std::to_string(id.value));
  return athletes_[*index].entries;
}

std::optional<Millis> GroupingEngine::crossing_time(AthleteIndex athlete, CpIndex cp) const {
  const auto& track = athletes_.at(athlete);
  if (cp >= track.times.size() || track.entries[cp].kind == HistoryEntry::Kind::Absent) {
    return std::nullopt;
  }
  return track.times[cp];
}

std::optional<CpIndex> GroupingEngine::last_cp(AthleteIndex athlete) const {
  const auto last = athletes_.at(athlete).last_cp;
  if (last < 0) return std::nullopt;
  return static_cast<CpIndex>(last);
}

const GroupingEngine::CpState& GroupingEngine::cp_state(CpIndex cp) const {
  if (cp >= cps_.size()) throw NotFoundError("control point " + std::to_string(cp) + " out of range");
  return cps_[cp];
}

std::size_t GroupingEngine::group_count(CpIndex cp) const {
  return cp < cps_.size() ? cps_[cp].group_components.size() : 0;
}

GroupView GroupingEngine::group(CpIndex cp, std::uint32_t ordinal) const {
  const auto& state = cp_state(cp);
  if (ordinal >= state.group_components.size()) {
    throw NotFoundError("no group " + std::to_string(ordinal) + " at control point " +
                        std::to_string(cp));
  }
  const auto& rec = state.finished[state.group_components[ordinal]];
  return GroupView{GroupId{cp, ordinal},
                   std::span<const AthleteIndex>(state.pool.data() + rec.begin, rec.size),
                   rec.t_first, rec.t_last};
}

std::vector<GroupView> GroupingEngine::groups_at(CpIndex cp) const {
  const auto& state = cp_state(cp);
  std::vector<GroupView> out;
  out.reserve(state.group_components.size());
  for (std::uint32_t g = 0; g < state.group_components.size(); ++g) out.push_back(group(cp, g));
  return out;
}

ComponentView GroupingEngine::finished_component(CpIndex cp, std::uint32_t component) const {
  const auto& state = cp_state(cp);
  const auto& rec = state.finished.at(component);
  ComponentView view{cp, std::span<const AthleteIndex>(state.pool.data() + rec.begin, rec.size),
                     rec.t_first, rec.t_last, false, std::nullopt};
  if (rec.group_ordinal >= 0) view.group_ordinal = static_cast<std::uint32_t>(rec.group_ordinal);
  return view;
}

std::vector<ComponentView> GroupingEngine::components_at(CpIndex cp) const {
  const auto& state = cp_state(cp);
  std::vector<ComponentView> out;
  out.reserve(state.finished.size() + 1);
  for (std::uint32_t c = 0; c < state.finished.size(); ++c) out.push_back(finished_component(cp, c));
  if (state.has_active) {
    const auto& rec = state.active;
    out.push_back(ComponentView{cp,
                                std::span<const AthleteIndex>(state.pool.data() + rec.begin, rec.size),
                                rec.t_first, rec.t_last, true, std::nullopt});
  }
  return out;
}

std::vector<AthleteId> GroupingEngine::members(GroupId id) const {
  const auto view = group(id.cp, id.ordinal);
  std::vector<AthleteId> ids;
  ids.reserve(view.members.size());
  for (auto a : view.members) ids.push_back(athletes_[a].id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace racegroups
