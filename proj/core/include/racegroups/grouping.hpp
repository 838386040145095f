#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "racegroups/relation.hpp"
#include "racegroups/types.hpp"

namespace racegroups {

/// Dense, engine-local athlete index assigned on first sight.
using AthleteIndex = std::uint32_t;

/// What an athlete's record says about one control point.
struct HistoryEntry {
  enum class Kind : std::uint8_t { Absent, Pending, Outlier, Group };

  Kind kind = Kind::Absent;
  std::uint32_t ordinal = 0;  // group ordinal, meaningful only for Kind::Group

  static constexpr HistoryEntry absent() { return {Kind::Absent, 0}; }
  static constexpr HistoryEntry pending() { return {Kind::Pending, 0}; }
  static constexpr HistoryEntry outlier() { return {Kind::Outlier, 0}; }
  static constexpr HistoryEntry group(std::uint32_t ordinal) { return {Kind::Group, ordinal}; }

  friend constexpr bool operator==(const HistoryEntry&, const HistoryEntry&) = default;
};

enum class AnomalyKind : std::uint8_t { SkippedCp, OrderViolation, DuplicateEvent, PaceJump };

const char* to_string(AnomalyKind kind) noexcept;

struct AnomalyRecord {
  AthleteId athlete;
  AnomalyKind kind = AnomalyKind::SkippedCp;
  CpIndex cp = 0;
  std::string details;
};

/// Members are listed in crossing order.
struct ComponentView {
  CpIndex cp = 0;
  std::span<const AthleteIndex> members;
  Millis t_first = 0;
  Millis t_last = 0;
  bool active = false;
  std::optional<std::uint32_t> group_ordinal;
};

struct GroupView {
  GroupId id;
  std::span<const AthleteIndex> members;
  Millis t_first = 0;
  Millis t_last = 0;
};

/// Notification produced when a component finishes.
struct EngineOutput {
  enum class Kind : std::uint8_t { Group, Outliers };

  Kind kind = Kind::Group;
  CpIndex cp = 0;
  std::uint32_t component = 0;      // index among finished components at cp
  std::uint32_t group_ordinal = 0;  // valid when kind == Group
};

/// Streaming component/group detection. One active component per control
/// point; an arrival more than epsilon after the last arrival finishes it.
///
/// Single writer. Views returned by accessors stay valid until the next
/// mutating call.
class GroupingEngine {
 public:
  explicit GroupingEngine(Params params);

  const Params& params() const noexcept { return params_; }

  /// Processes one event, appending finish notifications to `out`.
  /// Returns false when the event was rejected as an anomaly (duplicate or
  /// control-point order violation); the anomaly is recorded.
  /// Throws StreamError when time goes backwards or the cp is closed.
  bool ingest(const Event& event, std::vector<EngineOutput>& out);

  std::vector<EngineOutput> ingest_event(const Event& event);

  /// Finishes the active component at `cp` and refuses further events there.
  void close_cp(CpIndex cp, std::vector<EngineOutput>& out);

  /// Broom wagon: finishes every active component and closes all cps.
  std::vector<EngineOutput> finalize_all();
  void finalize_all(std::vector<EngineOutput>& out);

  bool cp_closed(CpIndex cp) const;

  std::size_t cp_count() const noexcept { return cps_.size(); }
  std::size_t athlete_count() const noexcept { return athletes_.size(); }
  std::size_t event_count() const noexcept { return accepted_events_; }

  std::optional<AthleteIndex> find_athlete(AthleteId id) const;
  AthleteId athlete_id(AthleteIndex index) const { return athletes_.at(index).id; }

  /// History indexed by cp, sized to the athlete's last crossed cp + 1.
  /// Throws NotFoundError for unknown athletes.
  std::vector<HistoryEntry> group_history(AthleteId id) const;

  /// O(1) history lookup; Absent past the athlete's last crossing.
  HistoryEntry history_at(AthleteIndex athlete, CpIndex cp) const noexcept {
    const auto& track = athletes_[athlete];
    return cp < track.entries.size() ? track.entries[cp] : HistoryEntry::absent();
  }

  /// Crossing time at `cp`, if the athlete crossed it.
  std::optional<Millis> crossing_time(AthleteIndex athlete, CpIndex cp) const;

  /// Last control point crossed, if any.
  std::optional<CpIndex> last_cp(AthleteIndex athlete) const;

  std::size_t group_count(CpIndex cp) const;
  GroupView group(CpIndex cp, std::uint32_t ordinal) const;
  std::vector<GroupView> groups_at(CpIndex cp) const;

  /// Finished components in time order, followed by the active one if any.
  std::vector<ComponentView> components_at(CpIndex cp) const;
  ComponentView finished_component(CpIndex cp, std::uint32_t component) const;

  /// Sorted athlete ids of a group.
  std::vector<AthleteId> members(GroupId id) const;

  const std::vector<AnomalyRecord>& anomalies() const noexcept { return anomalies_; }

 private:
  struct ComponentRecord {
    std::uint32_t begin = 0;
    std::uint32_t size = 0;
    Millis t_first = 0;
    Millis t_last = 0;
    std::int64_t group_ordinal = -1;
  };

  struct CpState {
    std::vector<AthleteIndex> pool;  // members of all components, crossing order
    std::vector<ComponentRecord> finished;
    std::vector<std::uint32_t> group_components;  // group ordinal -> finished index
    bool has_active = false;
    ComponentRecord active;
    bool closed = false;
  };

  struct AthleteTrack {
    AthleteId id;
    std::vector<HistoryEntry> entries;
    std::vector<Millis> times;
    std::int64_t last_cp = -1;
  };

  CpState& ensure_cp(CpIndex cp);
  AthleteIndex intern(AthleteId id);
  void finish_active(CpIndex cp, std::vector<EngineOutput>& out);
  void record_anomaly(AthleteId athlete, AnomalyKind kind, CpIndex cp, std::string details);
  const CpState& cp_state(CpIndex cp) const;

  Params params_;
  std::vector<CpState> cps_;
  std::vector<AthleteTrack> athletes_;
  std::unordered_map<AthleteId, AthleteIndex> index_of_;
  std::vector<AnomalyRecord> anomalies_;
  std::unordered_set<std::uint64_t> anomaly_keys_;
  Millis last_time_ = 0;
  bool seen_any_ = false;
  bool all_closed_ = false;
  std::size_t accepted_events_ = 0;
};

}  // namespace racegroups
