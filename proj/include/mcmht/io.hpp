#ifndef MCMHT_IO_HPP_
#define MCMHT_IO_HPP_

#include <fstream>

#include <json.hpp>

#include "mcmht/metrics.hpp"
#include "mcmht/mwis.hpp"
#include "mcmht/simulator.hpp"

namespace mcmht {

using json = nlohmann::json;

// ---- observation stream (JSON lines, one SCT event per line) ----

inline json event_to_json(const StreamEvent& e) {
  json j;
  switch (e.kind) {
    case StreamEvent::Kind::start: j["event"] = "start"; break;
    case StreamEvent::Kind::extend: j["event"] = "extend"; break;
    case StreamEvent::Kind::end: j["event"] = "end"; break;
  }
  j["obs_id"] = e.obs_id;
  j["camera"] = e.camera;
  j["time"] = e.time;
  j["u"] = e.u;
  j["v"] = e.v;
  j["w"] = e.w;
  j["h"] = e.h;
  if (e.ground) {
    j["x"] = (*e.ground)[0];
    j["y"] = (*e.ground)[1];
  }
  if (e.feature) j["feature"] = *e.feature;
  return j;
}

inline StreamEvent event_from_json(const json& j) {
  StreamEvent e;
  const std::string kind = j.at("event").get<std::string>();
  if (kind == "start") e.kind = StreamEvent::Kind::start;
  else if (kind == "extend") e.kind = StreamEvent::Kind::extend;
  else if (kind == "end") e.kind = StreamEvent::Kind::end;
  else throw data_error("unknown event kind: " + kind);
  e.obs_id = j.at("obs_id").get<int>();
  e.camera = j.at("camera").get<int>();
  e.time = j.at("time").get<double>();
  e.u = j.at("u").get<double>();
  e.v = j.at("v").get<double>();
  e.w = j.at("w").get<double>();
  e.h = j.at("h").get<double>();
  if (j.contains("x") && j.contains("y"))
    e.ground = std::array<double, 2>{j.at("x").get<double>(),
                                     j.at("y").get<double>()};
  if (j.contains("feature")) e.feature = j.at("feature").get<Feature>();
  return e;
}

inline void write_stream(std::ostream& os, const std::vector<StreamEvent>& events) {
  for (const auto& e : events) os << event_to_json(e).dump() << "\n";
}

inline std::vector<StreamEvent> read_stream(std::istream& is) {
  std::vector<StreamEvent> events;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      events.push_back(event_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw data_error("stream line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return events;
}

// ---- ground truth (JSON lines {identity, obs_id}) ----

inline void write_truth(std::ostream& os, const GroundTruth& truth) {
  for (const auto& [identity, obs_list] : truth.tracks)
    for (int obs : obs_list)
      os << json{{"identity", identity}, {"obs_id", obs}}.dump() << "\n";
}

inline GroundTruth read_truth(std::istream& is) {
  GroundTruth truth;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      truth.tracks[j.at("identity").get<int>()].push_back(
          j.at("obs_id").get<int>());
    } catch (const json::exception& e) {
      throw data_error("truth line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return truth;
}

// ---- tracks (JSON lines {track, observations}) ----

inline void write_tracks(std::ostream& os,
                         const std::vector<std::vector<int>>& tracks) {
  std::set<int> seen;
  for (const auto& t : tracks)
    for (int obs : t)
      if (!seen.insert(obs).second)
        throw internal_error("write_tracks: tracks overlap on observation " +
                             std::to_string(obs));
  for (std::size_t i = 0; i < tracks.size(); ++i)
    os << json{{"track", i}, {"observations", tracks[i]}}.dump() << "\n";
}

inline std::vector<std::vector<int>> read_tracks(std::istream& is) {
  std::vector<std::vector<int>> tracks;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      tracks.push_back(j.at("observations").get<std::vector<int>>());
    } catch (const json::exception& e) {
      throw data_error("tracks line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return tracks;
}

// ---- network model and config (one JSON document) ----

inline json network_to_json(const CameraNetworkModel& net) {
  json j;
  j["mode"] = to_string(net.mode);
  j["cameras"] = net.cameras;
  if (net.ground_area) j["ground_area"] = *net.ground_area;
  j["points"] = json::array();
  for (const auto& p : net.points)
    j["points"].push_back(
        {{"id", p.id}, {"camera", p.camera}, {"u", p.u}, {"v", p.v}});
  j["transitions"] = json::array();
  for (const auto& [pair, st] : net.transitions)
    j["transitions"].push_back({{"from", pair.first},
                                {"to", pair.second},
                                {"mean", st.mean},
                                {"std", st.std}});
  return j;
}

inline CameraNetworkModel network_from_json(const json& j) {
  CameraNetworkModel net;
  net.mode = mode_from_string(j.at("mode").get<std::string>());
  net.cameras = j.at("cameras").get<std::vector<int>>();
  if (j.contains("ground_area")) net.ground_area = j.at("ground_area").get<double>();
  for (const auto& p : j.value("points", json::array()))
    net.points.push_back({p.at("id").get<int>(), p.at("camera").get<int>(),
                          p.at("u").get<double>(), p.at("v").get<double>()});
  for (const auto& t : j.value("transitions", json::array()))
    net.transitions[{t.at("from").get<int>(), t.at("to").get<int>()}] = {
        t.at("mean").get<double>(), t.at("std").get<double>()};
  return net;
}

inline json tracker_config_to_json(const TrackerConfig& cfg) {
  json j;
  j["n_scan"] = cfg.n_scan;
  j["w_A"] = cfg.w_A;
  j["c0"] = cfg.c0;
  j["c1"] = cfg.c1;
  j["c2"] = cfg.c2;
  j["scan_seconds"] = cfg.scan_seconds;
  j["beta"] = cfg.beta;
  j["g_speed_min"] = cfg.g_speed_min;
  j["g_speed_max"] = cfg.g_speed_max;
  j["g_time_alpha_lo"] = cfg.g_time_alpha_lo;
  j["g_time_alpha_hi"] = cfg.g_time_alpha_hi;
  if (cfg.g_time_min_override) j["g_time_min"] = *cfg.g_time_min_override;
  if (cfg.g_time_max_override) j["g_time_max"] = *cfg.g_time_max_override;
  j["g_end_fixed"] = cfg.g_end_fixed;
  j["gamma"] = cfg.gamma;
  return j;
}

inline TrackerConfig tracker_config_from_json(const json& j) {
  TrackerConfig cfg;
  cfg.n_scan = j.value("n_scan", cfg.n_scan);
  cfg.w_A = j.value("w_A", cfg.w_A);
  cfg.c0 = j.value("c0", cfg.c0);
  cfg.c1 = j.value("c1", cfg.c1);
  cfg.c2 = j.value("c2", cfg.c2);
  cfg.scan_seconds = j.value("scan_seconds", cfg.scan_seconds);
  cfg.beta = j.value("beta", cfg.beta);
  cfg.g_speed_min = j.value("g_speed_min", cfg.g_speed_min);
  cfg.g_speed_max = j.value("g_speed_max", cfg.g_speed_max);
  cfg.g_time_alpha_lo = j.value("g_time_alpha_lo", cfg.g_time_alpha_lo);
  cfg.g_time_alpha_hi = j.value("g_time_alpha_hi", cfg.g_time_alpha_hi);
  if (j.contains("g_time_min")) cfg.g_time_min_override = j.at("g_time_min").get<double>();
  if (j.contains("g_time_max")) cfg.g_time_max_override = j.at("g_time_max").get<double>();
  cfg.g_end_fixed = j.value("g_end_fixed", cfg.g_end_fixed);
  cfg.gamma = j.value("gamma", cfg.gamma);
  return cfg;
}

struct RunConfig {
  TrackerConfig tracker;
  CameraNetworkModel network;
};

inline RunConfig run_config_from_json(const json& j) {
  RunConfig rc;
  rc.tracker = tracker_config_from_json(j.value("tracker", json::object()));
  if (!j.contains("network")) throw data_error("config: missing network section");
  rc.network = network_from_json(j.at("network"));
  return rc;
}

inline json run_config_to_json(const RunConfig& rc) {
  return {{"tracker", tracker_config_to_json(rc.tracker)},
          {"network", network_to_json(rc.network)}};
}

// ---- scenario spec ----

inline ScenarioSpec scenario_from_json(const json& j) {
  ScenarioSpec s;
  s.seed = j.value("seed", std::uint64_t{0});
  s.mode = mode_from_string(j.value("mode", std::string("ground_plane")));
  if (!j.contains("network")) throw data_error("scenario: missing network section");
  s.network = network_from_json(j.at("network"));
  s.network.mode = s.mode;
  s.n_targets = j.value("n_targets", 1);
  s.duration = j.value("duration", 60.0);
  if (j.contains("speed_range")) {
    const auto r = j.at("speed_range").get<std::vector<double>>();
    if (r.size() != 2) throw data_error("scenario: speed_range needs 2 values");
    s.speed_range = {r[0], r[1]};
  }
  s.feature_dim = j.value("feature_dim", 16);
  s.feature_noise = j.value("feature_noise", 0.0);
  s.transition_jitter = j.value("transition_jitter", 1.0);
  s.fragmentation_prob = j.value("fragmentation_prob", 0.0);
  s.clutter_rate = j.value("clutter_rate", 0.0);
  return s;
}

// ---- conflict graph dump (plain text for external cross-checks) ----

inline void write_graph(std::ostream& os, const ConflictGraph& g) {
  os << "vertices " << g.vertices.size() << "\n";
  for (const auto& v : g.vertices)
    os << v.id << " " << std::setprecision(17) << v.weight << "\n";
  os << "edges " << g.edges.size() << "\n";
  for (const auto& [a, b] : g.edges) os << a << " " << b << "\n";
}

inline ConflictGraph read_graph(std::istream& is) {
  ConflictGraph g;
  std::string tag;
  std::size_t n = 0, m = 0;
  if (!(is >> tag >> n) || tag != "vertices")
    throw data_error("graph dump: expected 'vertices <count>'");
  for (std::size_t i = 0; i < n; ++i) {
    int id;
    double w;
    if (!(is >> id >> w)) throw data_error("graph dump: bad vertex line");
    if (id != static_cast<int>(i))
      throw data_error("graph dump: vertex ids must be 0..n-1 in order");
    g.vertices.push_back({id, nullptr, w});
  }
  if (!(is >> tag >> m) || tag != "edges")
    throw data_error("graph dump: expected 'edges <count>'");
  for (std::size_t i = 0; i < m; ++i) {
    int a, b;
    if (!(is >> a >> b)) throw data_error("graph dump: bad edge line");
    if (a < 0 || b < 0 || a >= static_cast<int>(n) || b >= static_cast<int>(n) || a == b)
      throw data_error("graph dump: invalid edge");
    g.edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  return g;
}

// ---- report ----

inline std::string report_text(const IdReport& r) {
  std::ostringstream os;
  os << std::setprecision(6) << std::fixed;
  os << "idp " << r.idp << "\n"
     << "idr " << r.idr << "\n"
     << "idf1 " << r.idf1 << "\n";
  for (const auto& [identity, track] : r.matching)
    os << "match " << identity << " " << track << "\n";
  return os.str();
}

inline json report_json(const IdReport& r) {
  json m = json::array();
  for (const auto& [identity, track] : r.matching)
    m.push_back({{"identity", identity}, {"track", track}});
  return {{"idp", r.idp}, {"idr", r.idr}, {"idf1", r.idf1}, {"matching", m}};
}

// ---- small file helpers ----

inline std::string slurp(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw data_error("cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

inline void spit(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw data_error("cannot write " + path);
  f << content;
}

} // namespace mcmht

#endif // MCMHT_IO_HPP_
