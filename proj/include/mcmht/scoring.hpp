#ifndef MCMHT_SCORING_HPP_
#define MCMHT_SCORING_HPP_

#include <cmath>
#include <limits>
#include <numbers>

#include "mcmht/domain.hpp"
#include "mcmht/gating.hpp"

namespace mcmht {

// Per-branch score bookkeeping: cumulative log likelihood ratio, number of
// associated observations and the running-average appearance model.
struct BranchScoreState {
  double log_score = 0.0;
  int assoc_count = 0;
  Feature mean_feature;

  static BranchScoreState initial(const TrackerConfig& cfg, const Feature& f) {
    return {cfg.c0, 1, f};
  }
};

// Bhattacharyya coefficient between two normalized histograms, in [0,1].
inline double appearance_similarity(const Feature& a, const Feature& b) {
  if (a.size() != b.size())
    throw data_error("appearance_similarity: dimension mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::sqrt(a[k] * b[k]);
  return std::min(s, 1.0);
}

// mean' = ((k-1)/k) mean + (1/k) f, with k the new association count.
inline BranchScoreState update_mean_feature(BranchScoreState state,
                                            const Feature& f) {
  if (state.mean_feature.size() != f.size())
    throw data_error("update_mean_feature: dimension mismatch");
  const double k = static_cast<double>(state.assoc_count + 1);
  for (std::size_t i = 0; i < f.size(); ++i)
    state.mean_feature[i] = (k - 1.0) / k * state.mean_feature[i] + f[i] / k;
  state.assoc_count += 1;
  return state;
}

inline double gaussian_density(double x, double mean, double variance) {
  return std::exp(-(x - mean) * (x - mean) / (2.0 * variance)) /
         std::sqrt(2.0 * std::numbers::pi * variance);
}

// N(dt; mu, sigma^2)
inline double kinematic_likelihood_temporal(double dt, double mu, double sigma) {
  if (!(sigma > 0.0))
    throw data_error("kinematic_likelihood_temporal: sigma must be positive");
  return gaussian_density(dt, mu, sigma * sigma);
}

// N(d_hat - d; 0, speed/gamma), with d_hat the predecessor's estimated
// travel distance over the gap. speed = 0 degenerates to a point mass.
inline double kinematic_likelihood_distance(const Observation& last,
                                            const Observation& cand,
                                            const TrackerConfig& cfg) {
  const auto& a = last.history.back().ground;
  const auto& b = cand.history.front().ground;
  if (!a || !b)
    throw data_error("kinematic_likelihood_distance: missing ground positions");
  const double speed = last.history.size() < 2 ? 0.0 : observation_speed(last);
  const double dt = cand.first_time() - last.last_time();
  const double d_hat = speed * dt;
  const double d = mixed_distance(*b, *a, cfg.beta);
  if (speed <= 0.0) return d_hat == d ? 1.0 : 0.0;
  return gaussian_density(d_hat - d, 0.0, speed / cfg.gamma);
}

// w_A log(p_A/C2) + w_X log(p_X/C1). Returns -inf when either likelihood
// vanishes; callers discard the association then.
inline double delta_log_score(const BranchScoreState& state,
                              const Observation& last, const Observation& cand,
                              const CameraNetworkModel& net,
                              const TrackerConfig& cfg) {
  const double p_a = appearance_similarity(cand.feature, state.mean_feature);
  double p_x;
  if (net.mode == Mode::ground_plane) {
    p_x = kinematic_likelihood_distance(last, cand, cfg);
  } else {
    if (!last.exit_point || !cand.entry_point)
      throw data_error("delta_log_score: entry/exit points not set");
    const TransitionStats* st = net.stats(*last.exit_point, *cand.entry_point);
    if (!st) throw data_error("delta_log_score: no stats for transition");
    p_x = kinematic_likelihood_temporal(cand.first_time() - last.last_time(),
                                        st->mean, st->std);
  }
  if (p_a <= 0.0 || p_x <= 0.0) return -std::numeric_limits<double>::infinity();
  const double w_x = 1.0 - cfg.w_A;
  return cfg.w_A * std::log(p_a / cfg.c2) + w_x * std::log(p_x / cfg.c1);
}

inline double total_log_score(const std::vector<double>& increments,
                              const TrackerConfig& cfg) {
  double s = cfg.c0;
  for (double d : increments) s += d;
  return s;
}

} // namespace mcmht

#endif // MCMHT_SCORING_HPP_
