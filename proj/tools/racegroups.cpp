// racegroups: group detection and evolution patterns for race timing data.
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "racegroups/io.hpp"
#include "racegroups/report.hpp"
#include "racegroups/synth.hpp"

namespace rg = racegroups;

namespace {

enum ExitCode : int { kOk = 0, kMismatch = 1, kConfig = 2, kInput = 3, kInternal = 4 };

struct ParamFlags {
  rg::Millis epsilon = 2000;
  std::uint32_t min_group = 7;
  std::string mu = "7/10";

  void add(CLI::App& app) {
    app.add_option("--epsilon", epsilon, "Max gap in ms between consecutive athletes of a component")
        ->capture_default_str();
    app.add_option("--min-group", min_group, "Minimum group size m")->capture_default_str();
    app.add_option("--mu", mu, "Relation threshold, P/Q or decimal in (1/2, 1]")->capture_default_str();
  }

  rg::Params params() const {
    rg::Params p;
    p.epsilon = epsilon;
    p.min_group = min_group;
    p.mu = rg::Mu::parse(mu);
    p.validate();
    return p;
  }
};

std::vector<rg::Millis> parse_epsilons(const std::string& list) {
  std::vector<rg::Millis> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || v < 0) throw rg::ConfigError("bad epsilon '" + item + "' in sweep list");
    out.push_back(v);
  }
  if (out.empty()) throw rg::ConfigError("empty epsilon sweep list");
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw rg::InputError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw rg::InputError("cannot write '" + path + "'");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detects groups of athletes, their evolution patterns and long-term behaviours"};
  app.require_subcommand(1);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Run the pipeline over a race file");
  std::string input, format = "auto", mode = "finalized", reports = "summary,patterns,longterm";
  std::string sweep, course_path, out_format = "text";
  std::vector<std::uint64_t> athletes;
  double pace_jump = 1.5;
  ParamFlags analyze_params;
  analyze->add_option("--input", input, "Event file (long CSV or wide splits)")->required();
  analyze->add_option("--format", format, "long, wide or auto")->capture_default_str();
  analyze_params.add(*analyze);
  analyze->add_option("--mode", mode, "finalized or online")->capture_default_str();
  analyze->add_option("--report", reports, "patterns,longterm,summary,status,anomalies,timing")
      ->capture_default_str();
  analyze->add_option("--epsilon-sweep", sweep, "Comma-separated epsilon values in ms");
  analyze->add_option("--course", course_path, "Control point distances, one index,meters line each");
  analyze->add_option("--out", out_format, "text or records")->capture_default_str();
  analyze->add_option("--athlete", athletes, "Restrict the status report to these athletes");
  analyze->add_option("--pace-jump-factor", pace_jump, "Pace deviation factor for anomalies")
      ->capture_default_str();

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic race and its ground truth");
  std::string gen_mode = "randomized", script_path, events_out, truth_out;
  rg::GeneratorConfig gcfg;
  ParamFlags gen_params;
  gen->add_option("--mode", gen_mode, "randomized, scripted or crowd")->capture_default_str();
  gen->add_option("--athletes", gcfg.athletes)->capture_default_str();
  gen->add_option("--cps", gcfg.control_points, "Number of control points")->capture_default_str();
  gen->add_option("--course-m", gcfg.course_m, "Course length in meters")->capture_default_str();
  gen->add_option("--bands", gcfg.pace_bands, "Number of pace bands")->capture_default_str();
  gen->add_option("--pack-size", gcfg.pack_size)->capture_default_str();
  gen_params.add(*gen);
  gen->add_option("--seed", gcfg.seed)->capture_default_str();
  gen->add_option("--behavior-rate", gcfg.behavior_rate)->capture_default_str();
  gen->add_option("--resolution", gcfg.resolution, "Time resolution in ms")->capture_default_str();
  gen->add_option("--script", script_path, "pack,cp,state lines (scripted mode)");
  gen->add_option("--events-out", events_out, "Event CSV path")->required();
  gen->add_option("--truth-out", truth_out, "Ground-truth path");

  // verify
  auto* verify = app.add_subcommand("verify", "Check pipeline output against a ground-truth file");
  std::string verify_input, truth_path;
  ParamFlags verify_params;
  verify->add_option("--input", verify_input, "Event CSV")->required();
  verify->add_option("--truth", truth_path, "Ground-truth file")->required();
  verify_params.add(*verify);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) {
      rg::RunConfig config;
      config.params = analyze_params.params();
      if (mode == "online") {
        config.mode = rg::DetectionMode::Online;
      } else if (mode != "finalized") {
        throw rg::ConfigError("unknown mode '" + mode + "'");
      }
      config.pace_jump_factor = pace_jump;
      if (!course_path.empty()) config.course = rg::read_course_file(course_path);
      if (out_format != "text" && out_format != "records") {
        throw rg::ConfigError("unknown output format '" + out_format + "'");
      }
      auto selection = rg::parse_report_selection(reports);
      for (auto a : athletes) selection.athletes.push_back(rg::AthleteId{a});
      config.validate();

      const auto t0 = std::chrono::steady_clock::now();
      auto ingest = rg::read_events_file(input, rg::parse_input_format(format));
      const double ingest_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      for (const auto& issue : ingest.issues) {
        std::cerr << input << ":" << issue.line << ": " << issue.message << "\n";
      }

      if (!sweep.empty()) {
        const auto rows = rg::epsilon_sweep(config, ingest.events, parse_epsilons(sweep));
        if (out_format == "records") {
          rg::write_sweep_records(std::cout, rows);
        } else {
          rg::write_sweep_text(std::cout, rows);
        }
        return kOk;
      }
      auto report = rg::run(config, ingest.events);
      report.timings.ingest = ingest_s;
      if (out_format == "records") {
        rg::write_records(std::cout, report, config, selection);
      } else {
        rg::write_text(std::cout, report, config, selection);
      }
      return kOk;
    }

    if (*gen) {
      gcfg.params = gen_params.params();
      if (gen_mode == "randomized") {
        gcfg.mode = rg::GeneratorMode::Randomized;
      } else if (gen_mode == "scripted") {
        gcfg.mode = rg::GeneratorMode::Scripted;
        if (script_path.empty()) throw rg::ConfigError("scripted mode needs --script");
        gcfg.script = rg::parse_script(read_file(script_path));
      } else if (gen_mode == "crowd") {
        gcfg.mode = rg::GeneratorMode::Crowd;
      } else {
        throw rg::ConfigError("unknown generator mode '" + gen_mode + "'");
      }
      const auto race = rg::generate(gcfg);
      {
        auto out = open_out(events_out);
        rg::write_events(out, race.events);
      }
      if (!truth_out.empty()) {
        auto out = open_out(truth_out);
        out << race.truth.to_text();
      }
      std::cerr << "wrote " << race.events.size() << " events\n";
      return kOk;
    }

    if (*verify) {
      rg::RunConfig config;
      config.params = verify_params.params();
      const auto truth = rg::GroundTruth::from_text(read_file(truth_path));
      const auto ingest = rg::read_events_file(verify_input, rg::InputFormat::Auto);
      const auto report = rg::run(config, ingest.events);
      int mismatches = 0;
      if (truth.has_patterns) {
        if (truth.per_pair.size() != report.patterns.size()) {
          std::cout << "pair count: expected " << truth.per_pair.size() << ", got " << report.patterns.size() << "\n";
          ++mismatches;
        } else {
          for (std::size_t x = 0; x < report.patterns.size(); ++x) {
            for (auto kind : rg::kAllPatternKinds) {
              const auto want = truth.count(x, kind);
              const auto got = report.patterns[x].count(kind);
              if (want != got) {
                std::cout << "pair " << x << " " << rg::to_string(kind) << ": expected " << want << ", got " << got
                          << "\n";
                ++mismatches;
              }
            }
          }
        }
        for (auto kind : rg::kAllLongTermKinds) {
          const auto k = static_cast<std::size_t>(kind);
          if (truth.longest_edges[k] != report.longest[k].length_edges) {
            std::cout << "longest " << rg::to_string(kind) << ": expected " << truth.longest_edges[k] << ", got "
                      << report.longest[k].length_edges << "\n";
            ++mismatches;
          }
        }
      }
      std::cout << (mismatches == 0 ? "ok" : "MISMATCH") << " (" << mismatches << " differences)\n";
      return mismatches == 0 ? kOk : kMismatch;
    }
  } catch (const rg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const rg::DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const rg::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const rg::StreamError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const rg::NotFoundError& e) {
    std::cerr << "not found: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
  return kOk;
}
