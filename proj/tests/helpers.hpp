#ifndef MCMHT_TESTS_HELPERS_HPP_
#define MCMHT_TESTS_HELPERS_HPP_

#include <random>

#include "mcmht/domain.hpp"

namespace testutil {

using namespace mcmht;

inline Feature unit_feature(int dim, int hot) {
  Feature f(static_cast<std::size_t>(dim), 0.0);
  f[static_cast<std::size_t>(hot)] = 1.0;
  return f;
}

inline Feature random_feature(std::mt19937_64& rng, int dim) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  Feature f(static_cast<std::size_t>(dim));
  for (double& x : f) x = u(rng);
  return normalize_feature(std::move(f));
}

// Closed observation walking a straight ground path from a to b.
inline Observation ground_obs(int id, int camera, double t0, double t1,
                              std::array<double, 2> a, std::array<double, 2> b,
                              Feature feature, int samples = 5) {
  Observation o;
  o.id = id;
  o.camera = camera;
  o.feature = std::move(feature);
  o.closed = true;
  for (int i = 0; i < samples; ++i) {
    const double s = static_cast<double>(i) / (samples - 1);
    TrackPoint p;
    p.time = t0 + s * (t1 - t0);
    p.ground = std::array<double, 2>{a[0] + s * (b[0] - a[0]),
                                     a[1] + s * (b[1] - a[1])};
    p.u = (*p.ground)[0] * 10.0;
    p.v = (*p.ground)[1] * 10.0;
    p.w = 40.0;
    p.h = 100.0;
    o.history.push_back(p);
  }
  return o;
}

inline CameraNetworkModel ground_network(int n_cameras = 3,
                                         double area = 400.0) {
  CameraNetworkModel net;
  net.mode = Mode::ground_plane;
  net.ground_area = area;
  for (int c = 0; c < n_cameras; ++c) net.cameras.push_back(c);
  return net;
}

// Chain of cameras, one entry and one exit point each; exit of camera k
// connects to entry of camera k+1.
inline CameraNetworkModel image_network(int n_cameras, double mean,
                                        double std) {
  CameraNetworkModel net;
  net.mode = Mode::image_plane;
  for (int c = 0; c < n_cameras; ++c) {
    net.cameras.push_back(c);
    net.points.push_back({2 * c, c, 0.0, 0.0});       // entry
    net.points.push_back({2 * c + 1, c, 100.0, 0.0}); // exit
    if (c > 0) net.transitions[{2 * (c - 1) + 1, 2 * c}] = {mean, std};
  }
  return net;
}

// Four observations over a three-camera chain: o1 in camera 0, o2 and o3
// overlapping in camera 1, o4 in camera 2. Temporal gating admits
// o1->{o2,o3} and {o2,o3}->o4; appearance ties o1, o2, o4 together and
// sets o3 apart.
struct WalkthroughScenario {
  CameraNetworkModel net;
  TrackerConfig cfg;
  std::vector<StreamEvent> events;
  // observation ids
  static constexpr int o1 = 1, o2 = 2, o3 = 3, o4 = 4;
};

inline WalkthroughScenario walkthrough_scenario() {
  WalkthroughScenario s;
  s.net = image_network(3, 0.0, 1.0);
  s.net.transitions.clear();
  s.net.transitions[{1, 2}] = {0.3, 0.1};   // cam0 exit -> cam1 entry
  s.net.transitions[{3, 4}] = {0.45, 0.15}; // cam1 exit -> cam2 entry
  s.cfg.scan_seconds = 1.0;
  s.cfg.g_end_fixed = 0.9;
  s.cfg.n_scan = 2;

  const Feature bright{0.9, 0.1};
  const Feature dark{0.1, 0.9};
  auto add = [&s](StreamEvent::Kind kind, int obs, int cam, double t, double u,
                  std::optional<Feature> f) {
    StreamEvent e;
    e.kind = kind;
    e.obs_id = obs;
    e.camera = cam;
    e.time = t;
    e.u = u;
    e.v = 0.0;
    e.w = 40.0;
    e.h = 100.0;
    e.feature = std::move(f);
    s.events.push_back(e);
  };
  using K = StreamEvent::Kind;
  add(K::start, s.o1, 0, 0.0, 0.0, bright);
  add(K::end, s.o1, 0, 1.8, 100.0, bright);
  add(K::start, s.o2, 1, 2.0, 0.0, bright);
  add(K::start, s.o3, 1, 2.2, 0.0, dark);
  add(K::end, s.o2, 1, 3.5, 100.0, bright);
  add(K::end, s.o3, 1, 3.8, 100.0, dark);
  add(K::start, s.o4, 2, 4.1, 0.0, bright);
  add(K::end, s.o4, 2, 5.2, 100.0, bright);
  std::sort(s.events.begin(), s.events.end(), event_time_order);
  return s;
}

} // namespace testutil

#endif // MCMHT_TESTS_HELPERS_HPP_
