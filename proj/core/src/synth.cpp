#include "racegroups/synth.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace racegroups {

namespace {

constexpr std::array<PackState, 5> kStates = {PackState::Whole, PackState::Split2, PackState::Core,
                                              PackState::Pair, PackState::Exploded};

// Block ids used by the long-term model of a pack.
enum Block : std::uint8_t { kW, kA, kB, kC, kD, kBlocks };

struct BlockEdge {
  Block lower;
  Block upper;
  bool forward;
  bool backward;
};

std::vector<BlockEdge> block_edges(PackState from, PackState to) {
  using S = PackState;
  if (from == S::Whole && to == S::Whole) return {{kW, kW, true, true}};
  if (from == S::Whole && to == S::Split2) return {{kW, kA, false, true}, {kW, kB, false, true}};
  if (from == S::Whole && to == S::Core) return {{kW, kA, false, true}};
  if (from == S::Whole && to == S::Pair) return {{kW, kC, false, true}, {kW, kD, false, true}};
  if (from == S::Split2 && to == S::Whole) return {{kA, kW, true, false}, {kB, kW, true, false}};
  if (from == S::Split2 && to == S::Split2) return {{kA, kA, true, true}, {kB, kB, true, true}};
  if (from == S::Split2 && to == S::Core) return {{kA, kA, true, true}};
  if (from == S::Core && to == S::Whole) return {{kA, kW, true, false}};
  if (from == S::Core && to == S::Core) return {{kA, kA, true, true}};
  if (from == S::Core && to == S::Split2) return {{kA, kA, true, true}};
  if (from == S::Pair && to == S::Whole) return {{kC, kW, true, false}, {kD, kW, true, false}};
  if (from == S::Pair && to == S::Pair) return {{kC, kC, true, true}, {kD, kD, true, true}};
  return {};
}

std::vector<Block> blocks_of(PackState s) {
  switch (s) {
    case PackState::Whole: return {kW};
    case PackState::Split2: return {kA, kB};
    case PackState::Core: return {kA};
    case PackState::Pair: return {kC, kD};
    case PackState::Exploded: return {};
  }
  return {};
}

std::size_t idx(PatternKind k) { return static_cast<std::size_t>(k); }

// Gap sizes in resolution units.
struct Spacing {
  Millis unit;
  Millis close_max;  // within a group: [0, close_max] units
  Millis apart_min;  // between components: [apart_min, apart_min + jitter] units
  Millis jitter;

  Millis footprint(std::uint32_t pack_size) const {
    return static_cast<Millis>(pack_size - 1) * (apart_min + jitter) * unit;
  }
};

Spacing spacing_for(const GeneratorConfig& c) {
  const Millis unit = c.resolution;
  const Millis close = c.params.epsilon / unit;
  return Spacing{unit, close, close + 1, std::max<Millis>(0, close / 20)};
}

double band_pace(std::uint32_t band, std::uint32_t bands) {
  // ms per meter, 3:00 to 4:40 min/km
  return 180.0 + 100.0 * band / std::max<std::uint32_t>(bands, 1);
}

double cp_distance(const GeneratorConfig& c, CpIndex j) {
  return c.course_m * (j + 1) / c.control_points;
}

Millis floor_to(Millis t, Millis unit) { return t - t % unit; }

}  // namespace

const char* to_string(PackState state) noexcept {
  switch (state) {
    case PackState::Whole: return "whole";
    case PackState::Split2: return "split2";
    case PackState::Core: return "core";
    case PackState::Pair: return "pair";
    case PackState::Exploded: return "exploded";
  }
  return "unknown";
}

PackState parse_pack_state(std::string_view name) {
  for (auto s : kStates) {
    if (name == to_string(s)) return s;
  }
  throw ConfigError("unknown pack state '" + std::string(name) + "'");
}

bool transition_allowed(PackState from, PackState to) noexcept {
  using S = PackState;
  switch (from) {
    case S::Whole:
    case S::Exploded: return true;
    case S::Split2:
    case S::Core: return to != S::Pair;
    case S::Pair: return to == S::Whole || to == S::Pair || to == S::Exploded;
  }
  return false;
}

std::array<std::uint32_t, 9> transition_patterns(PackState from, PackState to) noexcept {
  using S = PackState;
  using K = PatternKind;
  std::array<std::uint32_t, 9> n{};
  if (!transition_allowed(from, to)) return n;
  if (from == S::Exploded) {
    n[idx(K::Appears)] = static_cast<std::uint32_t>(blocks_of(to).size());
    return n;
  }
  if (to == S::Exploded) {
    n[idx(K::Disappears)] = static_cast<std::uint32_t>(blocks_of(from).size());
    return n;
  }
  switch (from) {
    case S::Whole:
      if (to == S::Whole) n[idx(K::Survives)] = 1;
      if (to == S::Split2) n[idx(K::Splits)] = 1;
      if (to == S::Core) n[idx(K::Shrinks)] = 1;
      if (to == S::Pair) n[idx(K::Disbands)] = 1;
      break;
    case S::Split2:
      if (to == S::Whole) n[idx(K::Merges)] = 1;
      if (to == S::Split2) n[idx(K::Survives)] = 2;
      if (to == S::Core) n[idx(K::Survives)] = 1, n[idx(K::Disappears)] = 1;
      break;
    case S::Core:
      if (to == S::Whole) n[idx(K::Expands)] = 1;
      if (to == S::Core) n[idx(K::Survives)] = 1;
      if (to == S::Split2) n[idx(K::Survives)] = 1, n[idx(K::Appears)] = 1;
      break;
    case S::Pair:
      if (to == S::Whole) n[idx(K::Coheres)] = 1;
      if (to == S::Pair) n[idx(K::Survives)] = 2;
      break;
    case S::Exploded: break;
  }
  return n;
}

void GeneratorConfig::validate() const {
  params.validate();
  if (control_points < 2) throw ConfigError("generator needs at least 2 control points");
  if (athletes == 0) throw ConfigError("generator needs at least one athlete");
  if (resolution <= 0) throw ConfigError("resolution must be positive");
  if (!(course_m > 0)) throw ConfigError("course length must be positive");
  const double segment = course_m / control_points;
  if (mode == GeneratorMode::Crowd) {
    if (200.0 * segment <= static_cast<double>(resolution)) {
      throw ConfigError("control points too close for the time resolution");
    }
    return;
  }
  if (pace_bands == 0) throw ConfigError("pace band count must be positive");
  if (pack_size < 2 || athletes % pack_size != 0) {
    throw ConfigError("athlete count must be a multiple of the pack size");
  }
  const std::uint32_t half_up = (pack_size + 1) / 2;
  const std::uint32_t m = params.min_group;
  if (m < 2 || pack_size / 2 < m) {
    throw ConfigError("pack size " + std::to_string(pack_size) + " cannot hold two groups of " +
                      std::to_string(m));
  }
  // mu > max(ceil(P/2), 2m) / P keeps split halves and pairs from being
  // related to the whole pack.
  const std::uint64_t bound = std::max(half_up, 2 * m);
  if (!(params.mu.num() * pack_size > params.mu.den() * bound)) {
    throw ConfigError("mu must exceed " + std::to_string(bound) + "/" + std::to_string(pack_size) +
                      " for the scripted outcomes to hold");
  }
  const auto spacing = spacing_for(*this);
  if (band_pace(0, pace_bands) * segment <= static_cast<double>(spacing.footprint(pack_size) + 2 * resolution)) {
    throw ConfigError("control points too close: a pack would overlap its own next crossing");
  }
  if (mode == GeneratorMode::Randomized && !(behavior_rate >= 0.0 && behavior_rate <= 1.0)) {
    throw ConfigError("behavior rate must lie in [0, 1]");
  }
}

std::uint64_t GroundTruth::total(PatternKind kind) const {
  std::uint64_t n = 0;
  for (const auto& p : per_pair) n += p[idx(kind)];
  return n;
}

std::string GroundTruth::to_text() const {
  std::ostringstream out;
  out << "racegroups-truth 1\n";
  out << "control_points " << control_points << '\n';
  out << "patterns " << (has_patterns ? "yes" : "no") << '\n';
  for (std::size_t x = 0; x < per_pair.size(); ++x) {
    for (auto kind : kAllPatternKinds) {
      if (auto n = per_pair[x][idx(kind)]; n > 0) out << "pair " << x << ' ' << to_string(kind) << ' ' << n << '\n';
    }
  }
  for (auto kind : kAllLongTermKinds) {
    out << "longest " << to_string(kind) << ' ' << longest_edges[static_cast<std::size_t>(kind)] << '\n';
  }
  return out.str();
}

GroundTruth GroundTruth::from_text(std::string_view text) {
  GroundTruth truth;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw InputError("ground truth line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string tag;
    fields >> tag;
    if (tag == "racegroups-truth") {
      int version = 0;
      if (!(fields >> version) || version != 1) fail("unsupported version");
    } else if (tag == "control_points") {
      if (!(fields >> truth.control_points) || truth.control_points < 1) fail("bad control point count");
    } else if (tag == "patterns") {
      std::string flag;
      fields >> flag;
      truth.has_patterns = flag == "yes";
      if (truth.has_patterns) truth.per_pair.assign(truth.control_points - 1, {});
    } else if (tag == "pair") {
      std::size_t x = 0;
      std::string name;
      std::uint64_t n = 0;
      if (!(fields >> x >> name >> n)) fail("bad pair line");
      auto kind = parse_pattern_kind(name);
      if (!kind || x >= truth.per_pair.size()) fail("bad pair line");
      truth.per_pair[x][idx(*kind)] = n;
    } else if (tag == "longest") {
      std::string name;
      std::uint32_t n = 0;
      if (!(fields >> name >> n)) fail("bad longest line");
      bool found = false;
      for (auto kind : kAllLongTermKinds) {
        if (name == to_string(kind)) truth.longest_edges[static_cast<std::size_t>(kind)] = n, found = true;
      }
      if (!found) fail("unknown long-term kind '" + name + "'");
    } else {
      fail("unknown tag '" + tag + "'");
    }
  }
  return truth;
}

std::vector<ScriptStep> parse_script(std::string_view text) {
  std::vector<ScriptStep> steps;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line.erase(std::remove_if(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); }),
               line.end());
    if (line.empty()) continue;
    const auto a = line.find(',');
    const auto b = a == std::string::npos ? a : line.find(',', a + 1);
    if (b == std::string::npos) throw ConfigError("script line " + std::to_string(line_no) + ": expected pack,cp,state");
    try {
      steps.push_back(ScriptStep{static_cast<std::uint32_t>(std::stoul(line.substr(0, a))),
                                 static_cast<CpIndex>(std::stoul(line.substr(a + 1, b - a - 1))),
                                 parse_pack_state(line.substr(b + 1))});
    } catch (const std::logic_error& e) {
      throw ConfigError("script line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return steps;
}

std::vector<std::vector<PackState>> expand_script(std::span<const ScriptStep> steps,
                                                  std::uint32_t packs, std::uint32_t cps) {
  std::vector<std::vector<std::pair<CpIndex, PackState>>> marks(packs);
  for (const auto& s : steps) {
    if (s.pack >= packs || s.cp >= cps) {
      throw ConfigError("script step for pack " + std::to_string(s.pack) + " at cp " +
                        std::to_string(s.cp) + " is out of range");
    }
    marks[s.pack].emplace_back(s.cp, s.state);
  }
  std::vector<std::vector<PackState>> plan(packs, std::vector<PackState>(cps, PackState::Whole));
  for (std::uint32_t p = 0; p < packs; ++p) {
    auto& m = marks[p];
    std::stable_sort(m.begin(), m.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t k = 0;
    PackState current = PackState::Whole;
    for (CpIndex j = 0; j < cps; ++j) {
      while (k < m.size() && m[k].first == j) current = m[k++].second;
      plan[p][j] = current;
      if (j > 0 && !transition_allowed(plan[p][j - 1], current)) {
        throw ConfigError("pack " + std::to_string(p) + " cannot go from " + to_string(plan[p][j - 1]) +
                          " to " + to_string(current) + " at cp " + std::to_string(j));
      }
    }
  }
  return plan;
}

GroundTruth truth_from_plan(const std::vector<std::vector<PackState>>& plan, std::uint32_t cps) {
  GroundTruth truth;
  truth.control_points = cps;
  truth.per_pair.assign(cps > 0 ? cps - 1 : 0, {});
  for (const auto& row : plan) {
    for (CpIndex x = 0; x + 1 < cps; ++x) {
      const auto n = transition_patterns(row[x], row[x + 1]);
      for (std::size_t k = 0; k < n.size(); ++k) truth.per_pair[x][k] += n[k];
    }
  }
  // Longest paths per pack over its block graph; packs never interact.
  for (const auto& row : plan) {
    using Labels = std::array<std::uint32_t, kBlocks>;
    std::vector<std::array<Labels, 4>> lab(cps);  // [cp][kind][block]
    for (CpIndex x = 0; x + 1 < cps; ++x) {
      for (const auto& e : block_edges(row[x], row[x + 1])) {
        auto& up = lab[x + 1];
        const auto& lo = lab[x];
        if (e.forward && e.backward) up[0][e.upper] = std::max(up[0][e.upper], lo[0][e.lower] + 1);
        if (e.forward) up[1][e.upper] = std::max(up[1][e.upper], lo[1][e.lower] + 1);
        up[3][e.upper] = std::max(up[3][e.upper], lo[3][e.lower] + 1);
      }
    }
    for (CpIndex x = cps - 1; x-- > 0;) {
      for (const auto& e : block_edges(row[x], row[x + 1])) {
        if (e.backward) lab[x][2][e.lower] = std::max(lab[x][2][e.lower], lab[x + 1][2][e.upper] + 1);
      }
    }
    for (CpIndex x = 0; x < cps; ++x) {
      for (auto b : blocks_of(row[x])) {
        for (std::size_t k = 0; k < 4; ++k) truth.longest_edges[k] = std::max(truth.longest_edges[k], lab[x][k][b]);
      }
    }
  }
  return truth;
}

namespace {

std::vector<std::vector<PackState>> random_plan(const GeneratorConfig& c, std::uint32_t packs,
                                                std::mt19937_64& rng) {
  std::vector<std::vector<PackState>> plan(packs, std::vector<PackState>(c.control_points, PackState::Whole));
  std::bernoulli_distribution change(c.behavior_rate);
  std::vector<PackState> options;
  for (auto& row : plan) {
    for (CpIndex j = 1; j < c.control_points; ++j) {
      row[j] = row[j - 1];
      if (!change(rng)) continue;
      options.clear();
      for (auto s : kStates) {
        if (s != row[j - 1] && transition_allowed(row[j - 1], s)) options.push_back(s);
      }
      row[j] = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
    }
  }
  return plan;
}

// Member offsets (ms from the pack's base time) for one formation.
void lay_out(PackState state, std::uint32_t pack_size, std::uint32_t m, const Spacing& sp,
             std::mt19937_64& rng, std::vector<Millis>& offsets) {
  const std::uint32_t half_up = (pack_size + 1) / 2;
  std::uniform_int_distribution<Millis> close(0, sp.close_max);
  std::uniform_int_distribution<Millis> apart(sp.apart_min, sp.apart_min + sp.jitter);
  // joined[i]: member i is within epsilon of member i-1.
  auto joined = [&](std::uint32_t i) {
    switch (state) {
      case PackState::Whole: return true;
      case PackState::Split2: return i != half_up;
      case PackState::Core: return i < half_up;
      case PackState::Pair: return (i < m) || (i > m && i < 2 * m);
      case PackState::Exploded: return false;
    }
    return false;
  };
  offsets.assign(pack_size, 0);
  for (std::uint32_t i = 1; i < pack_size; ++i) {
    offsets[i] = offsets[i - 1] + (joined(i) ? close(rng) : apart(rng)) * sp.unit;
  }
}

GeneratedRace generate_packs(const GeneratorConfig& c) {
  GeneratedRace race;
  std::mt19937_64 rng(c.seed);
  const std::uint32_t packs = c.athletes / c.pack_size;
  race.plan = c.mode == GeneratorMode::Scripted ? expand_script(c.script, packs, c.control_points)
                                                : random_plan(c, packs, rng);
  race.truth = truth_from_plan(race.plan, c.control_points);

  const auto sp = spacing_for(c);
  const Millis unit = c.resolution;
  const Millis stagger = floor_to(sp.footprint(c.pack_size) + c.params.epsilon + 4 * unit, unit) + unit;
  // Fastest band first, so the gap between consecutive packs only grows.
  std::vector<std::uint32_t> order(packs);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return a % c.pace_bands < b % c.pace_bands;
  });
  std::vector<Millis> start(packs);
  for (std::uint32_t k = 0; k < packs; ++k) start[order[k]] = static_cast<Millis>(k) * stagger;

  race.events.reserve(static_cast<std::size_t>(c.athletes) * c.control_points);
  std::vector<Millis> offsets;
  for (std::uint32_t p = 0; p < packs; ++p) {
    const double pace = band_pace(p % c.pace_bands, c.pace_bands);
    for (CpIndex j = 0; j < c.control_points; ++j) {
      const Millis base = floor_to(start[p] + static_cast<Millis>(std::llround(pace * cp_distance(c, j))), unit);
      lay_out(race.plan[p][j], c.pack_size, c.params.min_group, sp, rng, offsets);
      for (std::uint32_t i = 0; i < c.pack_size; ++i) {
        race.events.push_back(Event{AthleteId{std::uint64_t{p} * c.pack_size + i + 1}, j, base + offsets[i]});
      }
    }
  }
  return race;
}

GeneratedRace generate_crowd(const GeneratorConfig& c) {
  GeneratedRace race;
  std::mt19937_64 rng(c.seed);
  race.truth.control_points = c.control_points;
  race.truth.has_patterns = false;
  std::uniform_real_distribution<double> corral(0.0, 20.0 * 60'000.0);
  std::normal_distribution<double> pace(300.0, 40.0);  // ms per meter
  std::normal_distribution<double> drift(1.0, 0.04);
  race.events.reserve(static_cast<std::size_t>(c.athletes) * c.control_points);
  for (std::uint32_t a = 0; a < c.athletes; ++a) {
    const double own = std::clamp(pace(rng), 200.0, 480.0);
    double t = corral(rng);
    double prev_d = 0.0;
    for (CpIndex j = 0; j < c.control_points; ++j) {
      const double d = cp_distance(c, j);
      t += own * std::clamp(drift(rng), 0.85, 1.15) * (d - prev_d);
      prev_d = d;
      race.events.push_back(Event{AthleteId{a + 1ull}, j, floor_to(static_cast<Millis>(t), c.resolution)});
    }
  }
  return race;
}

}  // namespace

GeneratedRace generate(const GeneratorConfig& config) {
  config.validate();
  auto race = config.mode == GeneratorMode::Crowd ? generate_crowd(config) : generate_packs(config);
  std::sort(race.events.begin(), race.events.end(), [](const Event& a, const Event& b) {
    if (a.time != b.time) return a.time < b.time;
    if (a.cp != b.cp) return a.cp < b.cp;
    return a.athlete < b.athlete;
  });
  return race;
}

}  // namespace racegroups
