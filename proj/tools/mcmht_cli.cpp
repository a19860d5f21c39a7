// Command-line front end: simulate, track, evaluate, bench, dump-forest,
// oracle-mwis. Exit codes: 0 ok, 1 usage, 2 data error, 3 internal error.

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mcmht/io.hpp"
#include "mcmht/tracker.hpp"

namespace {

using namespace mcmht;

json load_config_json(const std::string& path,
                      const std::vector<std::string>& overrides) {
  json j = json::parse(slurp(path));
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw data_error("--set expects key=value, got: " + kv);
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    json parsed;
    try {
      parsed = json::parse(value);
    } catch (const json::exception&) {
      parsed = value; // plain strings need no quoting
    }
    if (key == "mode" || key == "ground_area")
      j["network"][key] = parsed;
    else
      j["tracker"][key] = parsed;
  }
  return j;
}

int cmd_simulate(const std::string& spec_path, const std::string& stream_path,
                 const std::string& truth_path) {
  const ScenarioSpec spec = scenario_from_json(json::parse(slurp(spec_path)));
  const Scenario scenario = generate(spec);
  std::ostringstream stream_os, truth_os;
  write_stream(stream_os, scenario.events);
  write_truth(truth_os, scenario.truth);
  spit(stream_path, stream_os.str());
  spit(truth_path, truth_os.str());
  std::cout << "events " << scenario.events.size() << "\n"
            << "identities " << scenario.truth.tracks.size() << "\n";
  return 0;
}

int cmd_track(const std::string& stream_path, const std::string& config_path,
              const std::string& out_path, const std::string& manifest_path,
              bool no_prune, const std::vector<std::string>& overrides) {
  const json config_json = load_config_json(config_path, overrides);
  std::istringstream is(slurp(stream_path));
  const auto events = read_stream(is);
  const RunConfig rc = run_config_from_json(config_json);
  TrackOptions opts;
  opts.prune = !no_prune;
  const TrackResult result = run_tracker(events, rc.network, rc.tracker, opts);

  std::ostringstream os;
  write_tracks(os, result.tracks);
  spit(out_path, os.str());

  if (!manifest_path.empty()) {
    const BenchReport bench = bench_from_result(result);
    json manifest;
    manifest["config"] = config_json;
    manifest["stream"] = stream_path;
    manifest["tracks"] = out_path;
    manifest["prune"] = !no_prune;
    manifest["scans"] = result.scans;
    manifest["observations"] = result.observation_count;
    manifest["final_track_count"] = result.tracks.size();
    manifest["peak_leaves"] = result.peak_leaves;
    manifest["timing"] = {{"mean_scan_seconds", bench.mean_scan_seconds},
                          {"max_scan_seconds", bench.max_scan_seconds},
                          {"total_seconds", bench.total_seconds}};
    spit(manifest_path, manifest.dump(2) + "\n");
  }
  std::cout << "tracks " << result.tracks.size() << "\n";
  return 0;
}

int cmd_evaluate(const std::string& tracks_path, const std::string& truth_path,
                 const std::string& stream_path) {
  std::istringstream ts(slurp(tracks_path));
  const auto tracks = read_tracks(ts);
  std::istringstream gs(slurp(truth_path));
  const GroundTruth truth = read_truth(gs);

  std::map<int, double> weights;
  if (!stream_path.empty()) {
    std::istringstream ss(slurp(stream_path));
    std::map<int, std::pair<double, double>> span;
    for (const auto& e : read_stream(ss)) {
      auto [it, fresh] = span.try_emplace(e.obs_id, e.time, e.time);
      if (!fresh) {
        it->second.first = std::min(it->second.first, e.time);
        it->second.second = std::max(it->second.second, e.time);
      }
    }
    for (const auto& [id, mm] : span) weights[id] = mm.second - mm.first;
  } else {
    // no stream given: weight every observation equally
    for (const auto& t : tracks)
      for (int obs : t) weights[obs] = 1.0;
    for (const auto& [identity, obs_list] : truth.tracks)
      for (int obs : obs_list) weights[obs] = 1.0;
  }
  const IdReport report = evaluate(tracks, truth, weights);
  std::cout << report_text(report);
  return 0;
}

int cmd_bench(const std::string& spec_path, const std::string& config_path,
              const std::vector<std::string>& overrides) {
  const ScenarioSpec spec = scenario_from_json(json::parse(slurp(spec_path)));
  const Scenario scenario = generate(spec);
  const json config_json = load_config_json(config_path, overrides);
  const RunConfig rc = run_config_from_json(config_json);
  const TrackResult result = run_tracker(scenario.events, rc.network, rc.tracker);
  const BenchReport b = bench_from_result(result);
  std::cout << std::setprecision(6) << std::fixed
            << "scans " << b.scans << "\n"
            << "mean_scan_seconds " << b.mean_scan_seconds << "\n"
            << "max_scan_seconds " << b.max_scan_seconds << "\n"
            << "total_seconds " << b.total_seconds << "\n"
            << "peak_leaves " << b.peak_leaves << "\n";
  return 0;
}

int cmd_dump_forest(const std::string& stream_path,
                    const std::string& config_path, bool no_prune,
                    const std::vector<std::string>& overrides) {
  const json config_json = load_config_json(config_path, overrides);
  std::istringstream is(slurp(stream_path));
  const auto events = read_stream(is);
  const RunConfig rc = run_config_from_json(config_json);
  TrackOptions opts;
  opts.prune = !no_prune;
  std::string dump;
  opts.on_scan = [&dump](const HypothesisForest& f, const GlobalHypothesis*) {
    dump = f.dump();
  };
  run_tracker(events, rc.network, rc.tracker, opts);
  std::cout << dump;
  return 0;
}

int cmd_oracle_mwis(const std::string& graph_path) {
  std::istringstream is(slurp(graph_path));
  const ConflictGraph g = read_graph(is);
  const MwisSolution sol = brute_force_mwis(g);
  std::cout << std::setprecision(17) << "weight " << sol.total_weight << "\n"
            << "selected";
  for (int v : sol.selected) std::cout << " " << v;
  std::cout << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-camera multiple hypothesis tracker"};
  app.require_subcommand(1);

  std::string spec_path, stream_path, truth_path, config_path, out_path,
      manifest_path, graph_path;
  bool no_prune = false;
  std::vector<std::string> overrides;

  auto* sim = app.add_subcommand("simulate", "generate a synthetic scenario");
  sim->add_option("--spec", spec_path, "scenario spec (JSON)")->required();
  sim->add_option("--stream", stream_path, "output observation stream")->required();
  sim->add_option("--truth", truth_path, "output ground truth")->required();

  auto* track = app.add_subcommand("track", "run the tracker over a stream");
  track->add_option("--stream", stream_path)->required();
  track->add_option("--config", config_path)->required();
  track->add_option("--out", out_path, "output track file")->required();
  track->add_option("--manifest", manifest_path, "run manifest (JSON)");
  track->add_flag("--no-prune", no_prune, "disable N-scan pruning");
  track->add_option("--set", overrides, "override config key=value");

  auto* eval = app.add_subcommand("evaluate", "identity metrics against truth");
  eval->add_option("--tracks", out_path)->required();
  eval->add_option("--truth", truth_path)->required();
  eval->add_option("--stream", stream_path,
                   "observation stream for duration weights");

  auto* bench = app.add_subcommand("bench", "simulate and time the tracker");
  bench->add_option("--spec", spec_path)->required();
  bench->add_option("--config", config_path)->required();
  bench->add_option("--set", overrides, "override config key=value");

  auto* dumpf = app.add_subcommand("dump-forest", "replay and dump the forest");
  dumpf->add_option("--stream", stream_path)->required();
  dumpf->add_option("--config", config_path)->required();
  dumpf->add_flag("--no-prune", no_prune);
  dumpf->add_option("--set", overrides);

  auto* oracle = app.add_subcommand("oracle-mwis",
                                    "brute-force MWIS over a graph dump");
  oracle->add_option("--graph", graph_path)->required();

  try {
    app.parse(argc, argv);
    if (sim->parsed()) return cmd_simulate(spec_path, stream_path, truth_path);
    if (track->parsed())
      return cmd_track(stream_path, config_path, out_path, manifest_path,
                       no_prune, overrides);
    if (eval->parsed()) return cmd_evaluate(out_path, truth_path, stream_path);
    if (bench->parsed()) return cmd_bench(spec_path, config_path, overrides);
    if (dumpf->parsed())
      return cmd_dump_forest(stream_path, config_path, no_prune, overrides);
    if (oracle->parsed()) return cmd_oracle_mwis(graph_path);
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const mcmht::internal_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const mcmht::data_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
