#ifndef MCMHT_SIMULATOR_HPP_
#define MCMHT_SIMULATOR_HPP_

#include <random>

#include "mcmht/domain.hpp"

namespace mcmht {

struct ScenarioSpec {
  std::uint64_t seed = 0;
  Mode mode = Mode::ground_plane;
  CameraNetworkModel network;
  int n_targets = 1;
  double duration = 60.0; // seconds
  std::pair<double, double> speed_range = {0.5, 2.0}; // m/s, ground mode
  int feature_dim = 16;
  double feature_noise = 0.0;     // std of per-observation perturbation
  double transition_jitter = 1.0; // multiplier on transition std
  double fragmentation_prob = 0.0; // chance an observation splits in two
  double clutter_rate = 0.0;       // clutter observations per second
};

struct GroundTruth {
  // identity id -> ordered observation ids it generated
  std::map<int, std::vector<int>> tracks;
};

struct Scenario {
  std::vector<StreamEvent> events; // time-sorted
  GroundTruth truth;
};

namespace detail {

// Deterministic draws with a documented layout, so the generation procedure
// can be re-implemented independently. uniform01 maps the top 53 bits of
// one engine output to [0,1); normal is Box-Muller from two uniform01
// draws (no caching); pick(n) is one engine output modulo n.
struct SimRng {
  std::mt19937_64 eng;

  explicit SimRng(std::uint64_t seed) : eng(seed) {}

  double uniform01() {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  double normal(double mu, double sigma) {
    const double u1 = std::max(uniform01(), 1e-300);
    const double u2 = uniform01();
    return mu + sigma * std::sqrt(-2.0 * std::log(u1)) *
                     std::cos(2.0 * std::numbers::pi * u2);
  }
  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(eng() % n); }
};

// Base appearance for identity t: mass 0.9 on bin (t mod dim), the rest
// spread evenly. Distinct identities are near-disjoint for dim >= targets.
inline Feature base_feature(int identity, int dim) {
  Feature f(static_cast<std::size_t>(dim),
            dim > 1 ? 0.1 / static_cast<double>(dim - 1) : 0.0);
  f[static_cast<std::size_t>(identity % dim)] = dim > 1 ? 0.9 : 1.0;
  return f;
}

inline Feature perturb_feature(const Feature& base, double noise, SimRng& rng) {
  Feature f = base;
  for (double& x : f) x += rng.normal(0.0, noise);
  double sum = 0.0;
  for (double& x : f) {
    x = std::max(x, 0.0);
    sum += x;
  }
  if (sum <= 0.0) return base;
  for (double& x : f) x /= sum;
  return f;
}

} // namespace detail

// Ground-plane camera chain geometry used by the simulator: camera k covers
// x in [k*30, k*30+20] on lane y = identity, with 10 m blind gaps.
inline constexpr double kSimCameraLength = 20.0;
inline constexpr double kSimCameraGap = 10.0;
inline constexpr double kSimSampleStep = 0.5;

namespace detail {

struct Emitter {
  std::vector<StreamEvent>& events;
  GroundTruth& truth;
  int next_obs_id = 0;

  // One within-camera presence as start/extend/end events sampled every
  // kSimSampleStep seconds. Leaves the observation open (no end event)
  // when t_exit exceeds the horizon.
  void emit(int identity, int camera, double t_enter, double t_exit,
            double horizon, const Feature& feature,
            std::array<double, 2> p_enter, std::array<double, 2> p_exit,
            std::array<double, 2> img_enter, std::array<double, 2> img_exit) {
    const int obs = next_obs_id++;
    truth.tracks[identity].push_back(obs);
    const double span = t_exit - t_enter;
    bool closed = t_exit <= horizon;
    std::vector<double> times;
    for (double t = t_enter; t < std::min(t_exit, horizon); t += kSimSampleStep)
      times.push_back(t);
    if (times.empty()) times.push_back(t_enter);
    if (closed) {
      // keep the exact exit time but avoid a near-duplicate final step
      if (times.size() > 1 && t_exit - times.back() < kSimSampleStep / 4.0)
        times.pop_back();
      if (t_exit > times.back()) times.push_back(t_exit);
      else closed = false;
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double t = times[i];
      const double a = span > 0.0 ? (t - t_enter) / span : 0.0;
      StreamEvent e;
      e.obs_id = obs;
      e.camera = camera;
      e.time = t;
      e.u = img_enter[0] + a * (img_exit[0] - img_enter[0]);
      e.v = img_enter[1] + a * (img_exit[1] - img_enter[1]);
      e.w = 40.0;
      e.h = 100.0;
      if (p_enter[0] == p_enter[0]) // ground mode marker, never NaN there
        e.ground = std::array<double, 2>{
            p_enter[0] + a * (p_exit[0] - p_enter[0]),
            p_enter[1] + a * (p_exit[1] - p_enter[1])};
      if (i == 0) {
        e.kind = StreamEvent::Kind::start;
        e.feature = feature;
      } else if (closed && i + 1 == times.size()) {
        e.kind = StreamEvent::Kind::end;
        e.feature = feature;
      } else {
        e.kind = StreamEvent::Kind::extend;
      }
      events.push_back(e);
    }
  }
};

} // namespace detail

// Deterministic synthetic scenario generation. Draw order, per target in
// identity order:
//   ground mode:  speed ~ uniform(speed_range), start ~ uniform(0, 0.5*duration),
//                 then per emitted observation feature_dim normal(0, noise) draws,
//                 plus one uniform01 fragmentation draw per observation when
//                 fragmentation_prob > 0.
//   image mode:   start ~ uniform(0, 0.5*duration), entry point ~ pick(|E|),
//                 then per camera visit: dwell ~ uniform(5, 15), exit point ~
//                 pick(candidates), feature draws and fragmentation draw as
//                 above, next entry ~ pick(successors), transit ~
//                 normal(mean, std*jitter) clipped into [max(0.1, mean-4*s),
//                 mean+4*s] with s = std*jitter.
// Clutter is drawn after all targets: count = floor(clutter_rate * duration),
// each with time ~ uniform(0, max(0, duration-2)), camera or point ~ pick,
// then feature_dim uniform01 draws for a random normalized feature.
inline Scenario generate(const ScenarioSpec& spec) {
  if (spec.n_targets < 0) throw data_error("generate: negative n_targets");
  if (spec.feature_dim < 1) throw data_error("generate: feature_dim < 1");
  if (!(spec.speed_range.first > 0.0 &&
        spec.speed_range.second >= spec.speed_range.first))
    throw data_error("generate: invalid speed_range");
  if (spec.mode == Mode::image_plane && spec.network.transitions.empty())
    throw data_error("generate: image_plane scenario without transitions");

  Scenario out;
  detail::SimRng rng(spec.seed);
  detail::Emitter emit{out.events, out.truth};

  std::vector<int> cams = spec.network.cameras;
  std::sort(cams.begin(), cams.end());

  auto fragment = [&](int identity, int camera, double t0, double t1,
                      const Feature& f, std::array<double, 2> g0,
                      std::array<double, 2> g1, std::array<double, 2> i0,
                      std::array<double, 2> i1) {
    bool split = false;
    if (spec.fragmentation_prob > 0.0)
      split = rng.uniform01() < spec.fragmentation_prob &&
              t1 - t0 > 4.0 * kSimSampleStep && t1 <= spec.duration;
    if (!split) {
      emit.emit(identity, camera, t0, t1, spec.duration, f, g0, g1, i0, i1);
      return;
    }
    const double tm = t0 + (t1 - t0) / 2.0;
    const std::array<double, 2> gm{(g0[0] + g1[0]) / 2.0, (g0[1] + g1[1]) / 2.0};
    const std::array<double, 2> im{(i0[0] + i1[0]) / 2.0, (i0[1] + i1[1]) / 2.0};
    emit.emit(identity, camera, t0, tm, spec.duration, f, g0, gm, i0, im);
    emit.emit(identity, camera, tm + kSimSampleStep / 4.0, t1, spec.duration, f,
              gm, g1, im, i1);
  };

  for (int t = 0; t < spec.n_targets; ++t) {
    const Feature base = detail::base_feature(t, spec.feature_dim);
    if (spec.mode == Mode::ground_plane) {
      const double v = rng.uniform(spec.speed_range.first, spec.speed_range.second);
      const double start = rng.uniform(0.0, spec.duration * 0.5);
      const double lane = static_cast<double>(t);
      for (std::size_t k = 0; k < cams.size(); ++k) {
        const double x0 = static_cast<double>(k) * (kSimCameraLength + kSimCameraGap);
        const double t_enter = start + x0 / v;
        const double t_exit = t_enter + kSimCameraLength / v;
        if (t_enter >= spec.duration) break;
        const Feature f = detail::perturb_feature(base, spec.feature_noise, rng);
        fragment(t, cams[k], t_enter, t_exit, f, {x0, lane},
                 {x0 + kSimCameraLength, lane}, {x0 * 10.0, lane * 10.0},
                 {(x0 + kSimCameraLength) * 10.0, lane * 10.0});
        if (t_exit >= spec.duration) break;
      }
    } else {
      double tau = rng.uniform(0.0, spec.duration * 0.5);
      const auto& pts = spec.network.points;
      if (pts.empty()) throw data_error("generate: image_plane without points");
      const EntryExitPoint* entry = &pts[rng.pick(pts.size())];
      while (tau < spec.duration) {
        const double dwell = rng.uniform(5.0, 15.0);
        // exit through a point of this camera that leads somewhere, if any
        std::vector<const EntryExitPoint*> cand;
        for (const auto& p : pts) {
          if (p.camera != entry->camera) continue;
          for (const auto& [pair, st] : spec.network.transitions)
            if (pair.first == p.id) {
              cand.push_back(&p);
              break;
            }
        }
        if (cand.empty())
          for (const auto& p : pts)
            if (p.camera == entry->camera) cand.push_back(&p);
        const EntryExitPoint* exit = cand[rng.pick(cand.size())];
        const Feature f = detail::perturb_feature(base, spec.feature_noise, rng);
        const std::array<double, 2> nan{std::nan(""), std::nan("")};
        fragment(t, entry->camera, tau, tau + dwell, f, nan, nan,
                 {entry->u, entry->v}, {exit->u, exit->v});
        std::vector<std::pair<int, TransitionStats>> outs;
        for (const auto& [pair, st] : spec.network.transitions)
          if (pair.first == exit->id) outs.emplace_back(pair.second, st);
        if (outs.empty()) break;
        const auto& [next_id, st] = outs[rng.pick(outs.size())];
        const double s = st.std * spec.transition_jitter;
        double dt = rng.normal(st.mean, s);
        dt = std::clamp(dt, std::max(0.1, st.mean - 4.0 * s), st.mean + 4.0 * s);
        tau += dwell + dt;
        entry = spec.network.point(next_id);
        if (!entry) throw data_error("generate: transition to unknown point");
      }
    }
  }

  // clutter: short stationary observations with random features
  const int n_clutter =
      static_cast<int>(spec.clutter_rate * spec.duration);
  for (int c = 0; c < n_clutter; ++c) {
    const double t0 = rng.uniform(0.0, std::max(0.0, spec.duration - 2.0));
    const int cam = cams.empty() ? 0 : cams[rng.pick(cams.size())];
    Feature f(static_cast<std::size_t>(spec.feature_dim));
    for (double& x : f) x = rng.uniform01() + 1e-6;
    f = normalize_feature(std::move(f));
    const double t1 = std::min(t0 + 2.0, spec.duration);
    const int identity = spec.n_targets + c;
    const std::array<double, 2> g{-50.0 - c, -50.0};
    if (spec.mode == Mode::ground_plane)
      emit.emit(identity, cam, t0, t1, spec.duration, f, g, g, {0, 0}, {0, 0});
    else {
      const std::array<double, 2> nan{std::nan(""), std::nan("")};
      const auto& pts = spec.network.points;
      const auto& p = pts[rng.pick(pts.size())];
      emit.emit(identity, p.camera, t0, t1, spec.duration, f, nan, nan,
                {p.u, p.v}, {p.u, p.v});
    }
  }

  std::sort(out.events.begin(), out.events.end(), event_time_order);
  return out;
}

// The evaluation upper bound: tracks exactly equal to per-identity
// observation sequences.
inline std::vector<std::vector<int>> perfect_tracks(const GroundTruth& truth) {
  std::vector<std::vector<int>> tracks;
  for (const auto& [identity, obs] : truth.tracks) tracks.push_back(obs);
  return tracks;
}

} // namespace mcmht

#endif // MCMHT_SIMULATOR_HPP_
