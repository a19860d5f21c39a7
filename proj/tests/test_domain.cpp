#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"

using namespace mcmht;
using testutil::ground_network;
using testutil::image_network;
using testutil::unit_feature;

namespace {

Observation path_obs(const std::vector<std::array<double, 3>>& txy) {
  Observation o;
  o.id = 0;
  o.camera = 0;
  o.closed = true;
  o.feature = unit_feature(4, 0);
  for (const auto& p : txy) {
    TrackPoint tp;
    tp.time = p[0];
    tp.ground = std::array<double, 2>{p[1], p[2]};
    o.history.push_back(tp);
  }
  return o;
}

} // namespace

TEST_CASE("validate_config accepts the default ground-plane setup") {
  TrackerConfig cfg; // stock defaults
  CameraNetworkModel net = ground_network();
  CHECK(validate_config(cfg, net).empty());
}

TEST_CASE("validate_config flags out-of-range weights") {
  TrackerConfig cfg;
  cfg.w_A = 1.2;
  CameraNetworkModel net = ground_network();
  const auto v = validate_config(cfg, net);
  REQUIRE(v.size() == 1);
  CHECK(v[0] == "w_A out of [0,1]");
}

TEST_CASE("validate_config rejects image_plane without transitions") {
  TrackerConfig cfg;
  CameraNetworkModel net;
  net.mode = Mode::image_plane;
  net.cameras = {0, 1};
  const auto v = validate_config(cfg, net);
  CHECK(!v.empty());
}

TEST_CASE("validate_config checks transition std positivity") {
  TrackerConfig cfg;
  CameraNetworkModel net = image_network(2, 30.0, 4.0);
  net.transitions[{1, 2}].std = 0.0;
  CHECK(!validate_config(cfg, net).empty());
}

TEST_CASE("observation_speed averages per-step speeds") {
  CHECK(observation_speed(path_obs({{0, 0, 0}, {1, 1, 0}, {2, 3, 0}})) ==
        doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("observation_speed of a stationary history is zero") {
  CHECK(observation_speed(path_obs({{0, 2, 2}, {1, 2, 2}, {5, 2, 2}})) == 0.0);
}

TEST_CASE("observation_speed single step") {
  CHECK(observation_speed(path_obs({{0, 0, 0}, {5, 3, 4}})) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("observation_speed undefined for single-point history") {
  CHECK_THROWS_AS(observation_speed(path_obs({{0, 0, 0}})), data_error);
}

TEST_CASE("observation_speed is invariant under rigid translation") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::array<double, 3>> pts;
    double t = 0.0;
    for (int i = 0; i < 6; ++i) {
      t += 0.5 + std::abs(u(rng)) * 0.1;
      pts.push_back({t, u(rng), u(rng)});
    }
    const double dx = u(rng), dy = u(rng);
    auto shifted = pts;
    for (auto& p : shifted) {
      p[1] += dx;
      p[2] += dy;
    }
    CHECK(observation_speed(path_obs(pts)) ==
          doctest::Approx(observation_speed(path_obs(shifted))).epsilon(1e-9));
  }
}

TEST_CASE("observation_speed scales linearly with the coordinates") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::array<double, 3>> pts;
    double t = 0.0;
    for (int i = 0; i < 5; ++i) {
      t += 1.0;
      pts.push_back({t, u(rng), u(rng)});
    }
    const double k = 1.0 + std::abs(u(rng));
    auto scaled = pts;
    for (auto& p : scaled) {
      p[1] *= k;
      p[2] *= k;
    }
    CHECK(observation_speed(path_obs(scaled)) ==
          doctest::Approx(k * observation_speed(path_obs(pts))).epsilon(1e-9));
  }
}

TEST_CASE("feature normalization helpers") {
  CHECK(feature_normalized(unit_feature(4, 1)));
  CHECK(!feature_normalized({0.5, 0.6}));
  CHECK(!feature_normalized({-0.5, 1.5}));
  const Feature f = normalize_feature({2.0, 2.0});
  CHECK(f[0] == doctest::Approx(0.5));
  CHECK(feature_normalized(f));
}

TEST_CASE("nearest_point picks within the camera only") {
  const CameraNetworkModel net = image_network(2, 30.0, 4.0);
  CHECK(*net.nearest_point(0, 1.0, 0.0) == 0);
  CHECK(*net.nearest_point(0, 99.0, 0.0) == 1);
  CHECK(*net.nearest_point(1, 99.0, 0.0) == 3);
  CHECK(!net.nearest_point(7, 0.0, 0.0).has_value());
}
