#ifndef MCMHT_GATING_HPP_
#define MCMHT_GATING_HPP_

#include <cmath>
#include <limits>

#include "mcmht/domain.hpp"

namespace mcmht {

enum class GateReason {
  pass,
  too_fast,
  too_slow,
  no_transition,
  time_out_of_window,
  mode_mismatch,
};

struct GateDecision {
  bool admissible = false;
  GateReason reason = GateReason::mode_mismatch;

  static GateDecision ok() { return {true, GateReason::pass}; }
  static GateDecision reject(GateReason r) { return {false, r}; }
};

// beta * ||a-b||_2 + (1-beta) * ||a-b||_1
inline double mixed_distance(const std::array<double, 2>& a,
                             const std::array<double, 2>& b, double beta) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double l2 = std::sqrt(dx * dx + dy * dy);
  const double l1 = std::abs(dx) + std::abs(dy);
  return beta * l2 + (1.0 - beta) * l1;
}

// Ground-plane gate: the implied gap speed must lie strictly inside
// (g_speed_min, g_speed_max).
inline GateDecision speed_gate(const Observation& last, const Observation& cand,
                               const TrackerConfig& cfg) {
  if (!last.closed)
    throw data_error("speed_gate: predecessor observation is still open");
  const auto& a = last.history.back().ground;
  const auto& b = cand.history.front().ground;
  if (!a || !b) return GateDecision::reject(GateReason::mode_mismatch);
  const double dt = cand.first_time() - last.last_time();
  if (!(dt > 0.0))
    throw data_error("speed_gate: non-positive time gap between observations");
  const double speed = mixed_distance(*b, *a, cfg.beta) / dt;
  if (!(speed > cfg.g_speed_min)) return GateDecision::reject(GateReason::too_slow);
  if (!(speed < cfg.g_speed_max)) return GateDecision::reject(GateReason::too_fast);
  return GateDecision::ok();
}

inline std::pair<double, double> temporal_window(const TransitionStats& st,
                                                 const TrackerConfig& cfg) {
  const double lo = cfg.g_time_min_override
                        ? *cfg.g_time_min_override
                        : st.mean - cfg.g_time_alpha_lo * st.std;
  const double hi = cfg.g_time_max_override
                        ? *cfg.g_time_max_override
                        : st.mean + cfg.g_time_alpha_hi * st.std;
  return {lo, hi};
}

// Image-plane gate: the transition must exist and the time gap must lie
// strictly inside the transition's time window.
inline GateDecision temporal_gate(const Observation& last,
                                  const Observation& cand,
                                  const CameraNetworkModel& net,
                                  const TrackerConfig& cfg) {
  if (!last.exit_point || !cand.entry_point)
    return GateDecision::reject(GateReason::mode_mismatch);
  if (!net.transition_allowed(*last.exit_point, *cand.entry_point))
    return GateDecision::reject(GateReason::no_transition);
  const TransitionStats* st = net.stats(*last.exit_point, *cand.entry_point);
  if (!st)
    throw data_error("temporal_gate: missing stats for allowed transition");
  const double dt = cand.first_time() - last.last_time();
  const auto [lo, hi] = temporal_window(*st, cfg);
  if (!(dt > lo && dt < hi))
    return GateDecision::reject(GateReason::time_out_of_window);
  return GateDecision::ok();
}

inline GateDecision gate_pair(const Observation& last, const Observation& cand,
                              const CameraNetworkModel& net,
                              const TrackerConfig& cfg) {
  return net.mode == Mode::ground_plane ? speed_gate(last, cand, cfg)
                                        : temporal_gate(last, cand, net, cfg);
}

// How long a closed observation keeps searching before its leaves freeze.
// Ground plane: sqrt(area) / speed. Image plane: one fixed deadline for all.
// A permanently stationary target never times out.
inline double end_of_track_deadline(const Observation& o,
                                    const CameraNetworkModel& net,
                                    const TrackerConfig& cfg) {
  if (net.mode == Mode::image_plane) return cfg.g_end_fixed;
  if (!net.ground_area)
    throw data_error("end_of_track_deadline: ground_area not set");
  const double speed = o.history.size() < 2 ? 0.0 : observation_speed(o);
  if (speed <= 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(*net.ground_area) / speed;
}

} // namespace mcmht

#endif // MCMHT_GATING_HPP_
