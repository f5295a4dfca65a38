#include "zebra/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "zebra/angles.hpp"
#include "zebra/audio_io.hpp"
#include "zebra/bridge.hpp"
#include "zebra/config.hpp"
#include "zebra/error.hpp"
#include "zebra/scheduler.hpp"
#include "zebra/session.hpp"

namespace zebra {

namespace {

// Raised for argument problems found after CLI11 has parsed the flags.
struct UsageError : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};

bool takes_angle(Instruction i) { return is_rotation(i) || is_pitch(i); }

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

GuidingMode mode_arg(const std::string& name) {
  auto mode = parse_mode(name);
  if (!mode) throw UsageError("unknown mode " + name);
  return *mode;
}

std::vector<std::int16_t> render_events(const std::vector<AudioEvent>& events, int sample_rate,
                                        std::size_t total_frames, const PanLaw& law) {
  return render_offline(events, sample_rate, total_frames, law);
}

SessionOptions session_options(const EngineConfig& config) {
  SessionOptions o;
  o.guidance = config.guidance;
  o.sonification = sonification_config_for(config.guidance);
  return o;
}

// --- render ---------------------------------------------------------------

struct RenderArgs {
  std::string instruction;
  std::string quantity = "0";
  std::string mode = "mono";
  double bias = 0.0;
  double duration = 3.0;
  int sample_rate = kDefaultSampleRate;
  std::string out;
};

int run_render(const RenderArgs& a, std::ostream& out) {
  const auto instruction = parse_instruction(a.instruction);
  if (!instruction) throw UsageError("unknown instruction " + a.instruction);
  const GuidingMode mode = mode_arg(a.mode);
  if (mode == GuidingMode::speech) throw UsageError("render needs --mode mono or stereo");
  if (!(a.duration > 0.0)) throw UsageError("--duration must be > 0");
  if (a.bias < -1.0 || a.bias > 1.0) throw UsageError("--bias must be in [-1, 1]");
  double quantity = 0.0;
  try {
    quantity = parse_quantity(a.quantity, *instruction);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  const GuidanceDecision decision{*instruction, quantity, a.bias};

  const EngineConfig config = engine_config_from_env();
  Scheduler scheduler(mode, sonification_config_for(config.guidance));
  std::vector<AudioEvent> events;
  const double dt = 1.0 / kControlRate;
  const auto ticks = static_cast<std::int64_t>(std::ceil(a.duration * kControlRate - 1e-9));
  for (std::int64_t n = 0; n < ticks; ++n) {
    for (auto& e : scheduler.advance(decision, dt)) {
      if (auto* audio = std::get_if<AudioEvent>(&e)) events.push_back(*audio);
    }
  }
  const auto frames = static_cast<std::size_t>(std::llround(a.duration * a.sample_rate));
  const auto stereo = render_events(events, a.sample_rate, frames, config.pan_law);
  if (mode == GuidingMode::mono) {
    std::vector<std::int16_t> left(frames);
    for (std::size_t i = 0; i < frames; ++i) left[i] = stereo[2 * i];
    write_wav(left, a.sample_rate, 1, a.out);
  } else {
    write_wav(stereo, a.sample_rate, 2, a.out);
  }
  out << fmt::format("{}: {} onsets, {:.3f} s, {} channel(s)\n", a.out, events.size(), a.duration,
                     mode == GuidingMode::mono ? 1 : 2);
  return kExitOk;
}

// --- simulate / bench -----------------------------------------------------

struct SimulateArgs {
  std::string scenario;
  std::string out_metrics;
  std::string out_audio;
  std::string out_events;
  std::optional<std::uint64_t> seed;
  std::string mode;
  std::string policy;
  int sample_rate = kDefaultSampleRate;
};

int run_simulate(const SimulateArgs& a, std::ostream& out) {
  Scenario scenario = load_scenario(a.scenario);
  if (a.seed) scenario.seed = *a.seed;
  if (!a.mode.empty()) scenario.mode = mode_arg(a.mode);
  if (!a.policy.empty()) {
    auto policy = parse_policy(a.policy);
    if (!policy) throw UsageError("unknown policy " + a.policy);
    scenario.policy = *policy;
  }
  const EngineConfig config = engine_config_from_env();
  const SessionResult result = run_scripted(scenario, session_options(config));

  if (!a.out_metrics.empty()) write_file(a.out_metrics, metrics_csv({result.metrics}));
  if (!a.out_events.empty()) write_file(a.out_events, event_log_csv(result.metrics.event_log));
  if (!a.out_audio.empty()) {
    const std::size_t frames = session_audio_frames(result, a.sample_rate, kDefaultBlockFrames);
    write_wav(render_events(result.audio_events, a.sample_rate, frames, config.pan_law), a.sample_rate, 2,
              a.out_audio);
  }
  const auto& m = result.metrics;
  out << fmt::format("{} [{}] {} after {:.3f} s, {} messages\n", m.scenario, mode_name(m.mode),
                     m.completed ? "completed" : "incomplete", m.duration, m.message_count);
  return kExitOk;
}

struct BenchArgs {
  std::string scenarios;
  std::string summary;
  std::string out_metrics;
};

int run_bench(const BenchArgs& a, std::ostream& out) {
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(a.scenarios, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  if (ec) throw IoError("cannot list " + a.scenarios + ": " + ec.message());
  if (files.empty()) throw InvalidArgument("no scenario files in " + a.scenarios);
  std::sort(files.begin(), files.end());

  const EngineConfig config = engine_config_from_env();
  std::vector<SessionMetrics> runs;
  for (const auto& file : files) {
    const Scenario scenario = load_scenario(file);
    for (GuidingMode mode : {GuidingMode::speech, GuidingMode::mono, GuidingMode::stereo}) {
      runs.push_back(run_scripted(scenario, mode, scenario.policy, session_options(config)).metrics);
    }
  }
  if (!a.out_metrics.empty()) write_file(a.out_metrics, metrics_csv(runs));
  write_file(a.summary, summary_csv(metrics_summary(runs)));
  const auto done = std::count_if(runs.begin(), runs.end(), [](const auto& m) { return m.completed; });
  out << fmt::format("{} runs, {} completed\n", runs.size(), done);
  return kExitOk;
}

// --- staircase ------------------------------------------------------------

struct StaircaseArgs {
  std::string dimension;
  std::uint64_t seed = 1;
  std::optional<double> threshold;
  std::optional<double> slope;
  std::string out;
};

int run_staircase(const StaircaseArgs& a, std::ostream& out, std::ostream& err) {
  const auto dim = parse_dimension(a.dimension);
  if (!dim) throw UsageError("unknown dimension " + a.dimension);
  const double threshold = a.threshold.value_or(default_listener_threshold(*dim));
  const double slope = a.slope.value_or(default_listener_slope(*dim));
  if (!(slope > 0.0)) throw UsageError("--slope must be > 0");
  const StaircaseRun run = run_simulated_staircase(default_staircase(*dim), threshold, slope, a.seed);
  const char* unit = *dim == StaircaseDimension::ild ? "dB" : "ms";
  const std::string summary = fmt::format("{} estimate {:.4f} {} (true {:.4f}) after {} trials\n", a.dimension,
                                          run.estimate, unit, threshold, run.trials.size());
  if (a.out.empty()) {
    out << staircase_log_csv(run);
    err << summary;
  } else {
    write_file(a.out, staircase_log_csv(run));
    out << summary;
  }
  return kExitOk;
}

// --- serve ----------------------------------------------------------------

struct ServeArgs {
  unsigned short port = 8765;
  std::string address = "127.0.0.1";
  std::string scenario;
  std::string mode;
  std::optional<std::uint64_t> seed;
  std::string metrics;
  std::string events;
  std::string replay;
};

int run_serve(const ServeArgs& a, std::ostream& out) {
  BridgeOptions o;
  o.address = a.address;
  o.port = a.port;
  o.scenario = a.scenario.empty() ? evaluation_scenarios().front() : load_scenario(a.scenario);
  if (!a.mode.empty()) o.scenario.mode = mode_arg(a.mode);
  if (a.seed) o.scenario.seed = *a.seed;
  const EngineConfig config = engine_config_from_env();
  o.session = session_options(config);
  o.pan_law = config.pan_law;
  if (!a.metrics.empty()) o.metrics_path = a.metrics;
  if (!a.events.empty()) o.events_path = a.events;
  if (!a.replay.empty()) o.replay_path = a.replay;

  BridgeServer server(o);
  out << fmt::format("listening on ws://{}:{}\n", a.address, server.port()) << std::flush;
  const BridgeOutcome outcome = server.run();
  const auto& m = outcome.metrics;
  out << fmt::format("session {}: {:.3f} s, {} messages, {} taps\n",
                     outcome.partial ? "aborted" : (m.completed ? "completed" : "timed out"), m.duration,
                     m.message_count, m.tap_count);
  return kExitOk;
}

int run_make_scenarios(const std::string& dir, std::uint64_t seed, std::ostream& out) {
  std::filesystem::create_directories(dir);
  for (const Scenario& s : evaluation_scenarios(GuidingMode::mono, seed)) {
    const auto path = std::filesystem::path(dir) / (s.name + ".json");
    write_file(path, scenario_to_json(s));
    out << path.string() << "\n";
  }
  return kExitOk;
}

}  // namespace

double parse_quantity(std::string_view text, Instruction instruction) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || !std::isfinite(value)) {
    throw InvalidArgument("bad quantity '" + std::string(text) + "'");
  }
  if (value < 0.0) throw InvalidArgument("quantity must not be negative; the instruction carries the direction");
  const std::string_view unit(ptr, static_cast<std::size_t>(last - ptr));
  const bool angle = takes_angle(instruction);
  if (unit.empty()) return value;
  if (unit == "deg" && angle) return deg_to_rad(value);
  if (unit == "rad" && angle) return value;
  if (unit == "m" && !angle) return value;
  throw InvalidArgument(fmt::format("quantity unit '{}' does not suit {}", unit, instruction_name(instruction)));
}

double default_listener_slope(StaircaseDimension dimension) {
  return 3.0 / default_staircase(dimension).step;
}

double default_listener_threshold(StaircaseDimension dimension) {
  return dimension == StaircaseDimension::ild ? 1.15 : 0.13;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Auditory guidance engine and crossing simulator", "zebra_sonify"};
  app.require_subcommand(1);

  RenderArgs render;
  auto* render_cmd = app.add_subcommand("render", "Render the stimulus train for one instruction to WAV");
  render_cmd->add_option("--instruction", render.instruction, "e.g. rotate-right, step-left, cross")->required();
  render_cmd->add_option("--quantity", render.quantity, "20deg, 0.3rad, 1.5m or a bare SI number");
  render_cmd->add_option("--mode", render.mode, "mono or stereo");
  render_cmd->add_option("--bias", render.bias, "lateral bias for cross, in [-1, 1]");
  render_cmd->add_option("--duration", render.duration, "seconds");
  render_cmd->add_option("--sample-rate", render.sample_rate);
  render_cmd->add_option("--out", render.out, "output WAV")->required();

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run one scripted session");
  sim_cmd->add_option("--scenario", sim.scenario, "scenario JSON")->required()->check(CLI::ExistingFile);
  sim_cmd->add_option("--out-metrics", sim.out_metrics, "metrics CSV");
  sim_cmd->add_option("--out-audio", sim.out_audio, "session audio WAV (stereo)");
  sim_cmd->add_option("--out-events", sim.out_events, "event log CSV");
  sim_cmd->add_option("--seed", sim.seed, "overrides the scenario seed");
  sim_cmd->add_option("--mode", sim.mode, "overrides the scenario mode");
  sim_cmd->add_option("--policy", sim.policy, "overrides the scenario policy");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run every scenario in a directory under all three modes");
  bench_cmd->add_option("--scenarios", bench.scenarios, "directory of scenario JSON files")
      ->required()
      ->check(CLI::ExistingDirectory);
  bench_cmd->add_option("--summary", bench.summary, "per-mode summary CSV")->required();
  bench_cmd->add_option("--out-metrics", bench.out_metrics, "per-run metrics CSV");

  StaircaseArgs stair;
  auto* stair_cmd = app.add_subcommand("staircase", "Staircase self-test against a simulated listener");
  stair_cmd->add_option("--dimension", stair.dimension, "ild or itd")->required();
  stair_cmd->add_option("--seed", stair.seed);
  stair_cmd->add_option("--threshold", stair.threshold, "listener threshold (dB or ms)");
  stair_cmd->add_option("--slope", stair.slope, "listener slope per dB or per ms");
  stair_cmd->add_option("--out", stair.out, "trial log CSV (stdout if omitted)");

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Serve one interactive session over WebSocket");
  serve_cmd->add_option("--port", serve.port);
  serve_cmd->add_option("--address", serve.address);
  serve_cmd->add_option("--scenario", serve.scenario, "scenario JSON (default: evaluation start 1)")
      ->check(CLI::ExistingFile);
  serve_cmd->add_option("--mode", serve.mode);
  serve_cmd->add_option("--seed", serve.seed);
  serve_cmd->add_option("--metrics", serve.metrics, "metrics CSV written when the session ends");
  serve_cmd->add_option("--events", serve.events, "event log CSV written when the session ends");
  serve_cmd->add_option("--replay", serve.replay, "scenario JSON replaying the recorded controls");

  std::string scenario_dir;
  std::uint64_t scenario_seed = 1;
  auto* make_cmd = app.add_subcommand("make-scenarios", "Write the six evaluation scenarios");
  make_cmd->add_option("--dir", scenario_dir)->required();
  make_cmd->add_option("--seed", scenario_seed);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*render_cmd) return run_render(render, out);
    if (*sim_cmd) return run_simulate(sim, out);
    if (*bench_cmd) return run_bench(bench, out);
    if (*stair_cmd) return run_staircase(stair, out, err);
    if (*serve_cmd) return run_serve(serve, out);
    if (*make_cmd) return run_make_scenarios(scenario_dir, scenario_seed, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace zebra
