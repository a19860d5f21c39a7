#ifndef MCMHT_DOMAIN_HPP_
#define MCMHT_DOMAIN_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mcmht {

// Malformed or inconsistent input data (exit code 2 at the CLI).
struct data_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A broken internal invariant, i.e. a bug signal (exit code 3 at the CLI).
struct internal_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Feature = std::vector<double>;

enum class Mode { ground_plane, image_plane };

inline std::string to_string(Mode m) {
  return m == Mode::ground_plane ? "ground_plane" : "image_plane";
}

inline Mode mode_from_string(const std::string& s) {
  if (s == "ground_plane") return Mode::ground_plane;
  if (s == "image_plane") return Mode::image_plane;
  throw data_error("unknown mode: " + s);
}

// One sample of a single-camera track history.
struct TrackPoint {
  double time = 0.0;                           // seconds
  double u = 0.0, v = 0.0;                     // image position, pixels
  double w = 0.0, h = 0.0;                     // image size, pixels
  std::optional<std::array<double, 2>> ground; // (x, y) meters
};

// One contiguous single-camera track of one target. The atomic,
// identity-anonymous unit that gets associated across cameras.
struct Observation {
  int id = -1;
  int camera = -1;
  std::optional<int> entry_point;
  std::optional<int> exit_point;
  std::vector<TrackPoint> history;
  Feature feature;   // running-average appearance, nonnegative, sums to 1
  bool closed = false;

  double first_time() const { return history.front().time; }
  double last_time() const { return history.back().time; }
};

// An entry/exit point of one camera, located in that camera's image plane.
struct EntryExitPoint {
  int id = -1;
  int camera = -1;
  double u = 0.0, v = 0.0;
};

struct TransitionStats {
  double mean = 0.0; // seconds
  double std = 0.0;  // seconds, > 0
};

// Static description of the camera network: cameras, entry/exit points,
// which transitions exist and how long they take.
struct CameraNetworkModel {
  std::vector<int> cameras;
  std::vector<EntryExitPoint> points;
  // (exit point id, entry point id) -> stats; presence of the key means
  // the transition matrix entry is 1.
  std::map<std::pair<int, int>, TransitionStats> transitions;
  std::optional<double> ground_area; // square meters
  Mode mode = Mode::ground_plane;

  bool transition_allowed(int from, int to) const {
    return transitions.count({from, to}) > 0;
  }

  const TransitionStats* stats(int from, int to) const {
    auto it = transitions.find({from, to});
    return it == transitions.end() ? nullptr : &it->second;
  }

  const EntryExitPoint* point(int id) const {
    for (const auto& p : points)
      if (p.id == id) return &p;
    return nullptr;
  }

  // Nearest entry/exit point of a camera to an image position. Used to
  // derive entry/exit points when the stream does not carry them.
  std::optional<int> nearest_point(int camera, double u, double v) const {
    std::optional<int> best;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (const auto& p : points) {
      if (p.camera != camera) continue;
      const double d2 = (p.u - u) * (p.u - u) + (p.v - v) * (p.v - v);
      if (d2 < best_d2 || (d2 == best_d2 && (!best || p.id < *best))) {
        best_d2 = d2;
        best = p.id;
      }
    }
    return best;
  }
};

struct TrackerConfig {
  int n_scan = 10;
  double w_A = 0.8;        // appearance weight, w_X = 1 - w_A
  double c0 = 0.001;       // track initiation log-score
  double c1 = 0.3;         // kinematic false-alarm probability
  double c2 = 0.75;        // appearance false-alarm probability
  double scan_seconds = 1.0;
  double beta = 0.7;       // Euclidean/Manhattan distance mix
  double g_speed_min = 0.5; // m/s
  double g_speed_max = 2.0; // m/s
  double g_time_alpha_lo = 2.5;
  double g_time_alpha_hi = 2.5;
  // Raw window overrides; when set they replace mean -/+ alpha*std.
  std::optional<double> g_time_min_override;
  std::optional<double> g_time_max_override;
  double g_end_fixed = 60.0; // seconds, image_plane end-of-track deadline
  double gamma = 1.0;        // kinematic Gaussian precision
};

inline constexpr double kFeatureSumTolerance = 1e-9;

inline bool feature_normalized(const Feature& f) {
  if (f.empty()) return false;
  double sum = 0.0;
  for (double x : f) {
    if (!(x >= 0.0)) return false;
    sum += x;
  }
  return std::abs(sum - 1.0) <= kFeatureSumTolerance;
}

inline Feature normalize_feature(Feature f) {
  double sum = 0.0;
  for (double& x : f) {
    x = std::max(x, 0.0);
    sum += x;
  }
  if (sum <= 0.0) throw data_error("feature has no mass to normalize");
  for (double& x : f) x /= sum;
  return f;
}

// Returns every invariant violation; the pair is valid iff the list is empty.
inline std::vector<std::string> validate_config(const TrackerConfig& cfg,
                                                const CameraNetworkModel& net) {
  std::vector<std::string> v;
  if (cfg.n_scan < 1) v.push_back("n_scan must be positive");
  if (!(cfg.w_A >= 0.0 && cfg.w_A <= 1.0)) v.push_back("w_A out of [0,1]");
  if (!(cfg.c1 > 0.0 && cfg.c1 < 1.0)) v.push_back("c1 out of (0,1)");
  if (!(cfg.c2 > 0.0 && cfg.c2 < 1.0)) v.push_back("c2 out of (0,1)");
  if (!(cfg.scan_seconds > 0.0)) v.push_back("scan_seconds must be positive");
  if (!(cfg.beta >= 0.0 && cfg.beta <= 1.0)) v.push_back("beta out of [0,1]");
  if (!(cfg.g_speed_min < cfg.g_speed_max))
    v.push_back("g_speed_min must be below g_speed_max");
  if (!(cfg.g_time_alpha_lo >= 0.0)) v.push_back("g_time_alpha_lo negative");
  if (!(cfg.g_time_alpha_hi >= 0.0)) v.push_back("g_time_alpha_hi negative");
  if (!(cfg.gamma > 0.0)) v.push_back("gamma must be positive");
  if (net.mode == Mode::ground_plane) {
    if (!net.ground_area)
      v.push_back("ground_plane mode requires ground_area");
    else if (!(*net.ground_area > 0.0))
      v.push_back("ground_area must be positive");
  } else {
    if (net.points.empty())
      v.push_back("image_plane mode requires entry/exit points");
    if (net.transitions.empty())
      v.push_back("image_plane mode requires transitions");
    if (!(cfg.g_end_fixed > 0.0)) v.push_back("g_end_fixed must be positive");
  }
  for (const auto& [pair, st] : net.transitions) {
    if (!(st.std > 0.0))
      v.push_back("transition (" + std::to_string(pair.first) + "," +
                  std::to_string(pair.second) + ") has non-positive std");
    if (!net.point(pair.first) || !net.point(pair.second))
      v.push_back("transition (" + std::to_string(pair.first) + "," +
                  std::to_string(pair.second) + ") references unknown point");
  }
  return v;
}

// Average of per-step Euclidean speeds over the observation's ground track.
inline double observation_speed(const Observation& o) {
  if (o.history.size() < 2)
    throw data_error("observation_speed undefined for single-point history");
  double sum = 0.0;
  for (std::size_t l = 1; l < o.history.size(); ++l) {
    const auto& a = o.history[l - 1];
    const auto& b = o.history[l];
    if (!a.ground || !b.ground)
      throw data_error("observation_speed requires ground positions");
    const double dx = (*b.ground)[0] - (*a.ground)[0];
    const double dy = (*b.ground)[1] - (*a.ground)[1];
    sum += std::sqrt(dx * dx + dy * dy) / (b.time - a.time);
  }
  return sum / static_cast<double>(o.history.size() - 1);
}

// One line of the observation stream file.
struct StreamEvent {
  enum class Kind { start, extend, end };
  Kind kind = Kind::start;
  int obs_id = -1;
  int camera = -1;
  double time = 0.0;
  double u = 0.0, v = 0.0, w = 0.0, h = 0.0;
  std::optional<std::array<double, 2>> ground;
  std::optional<Feature> feature; // attached on start and end events
};

inline bool event_time_order(const StreamEvent& a, const StreamEvent& b) {
  if (a.time != b.time) return a.time < b.time;
  if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  return a.obs_id < b.obs_id;
}

} // namespace mcmht

#endif // MCMHT_DOMAIN_HPP_
