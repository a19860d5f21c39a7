#ifndef MCMHT_TRACKER_HPP_
#define MCMHT_TRACKER_HPP_

#include <chrono>
#include <functional>

#include "mcmht/mwis.hpp"

namespace mcmht {

struct ScanStats {
  int scan = 0;
  bool grew = false;       // scan received new observations
  double seconds = 0.0;    // ingest + solve + prune wall time
  std::size_t leaf_count = 0;
};

struct TrackResult {
  std::vector<std::vector<int>> tracks;
  std::vector<double> track_scores;
  std::vector<ScanStats> scan_stats;
  std::size_t peak_leaves = 0;
  int scans = 0;
  std::size_t observation_count = 0;
  std::map<int, double> observation_durations; // for identity metrics
};

struct TrackOptions {
  bool prune = true;
  // called after each scan's solve step with the interim best hypothesis;
  // the pointer is null on scans without new observations
  std::function<void(const HypothesisForest&, const GlobalHypothesis*)> on_scan;
};

// Replays an event stream scan by scan: ingest, then on growth scans the
// best-hypothesis solve and N-scan prune. Clocked purely by event
// timestamps, so replays are deterministic.
inline TrackResult run_tracker(const std::vector<StreamEvent>& events,
                               const CameraNetworkModel& net,
                               const TrackerConfig& cfg,
                               const TrackOptions& opts = {}) {
  {
    const auto violations = validate_config(cfg, net);
    if (!violations.empty())
      throw data_error("invalid configuration: " + violations.front());
  }

  std::vector<StreamEvent> sorted = events;
  std::sort(sorted.begin(), sorted.end(), event_time_order);

  int last_scan = -1;
  for (const auto& e : sorted)
    last_scan = std::max(last_scan,
                         static_cast<int>(std::floor(e.time / cfg.scan_seconds)));

  HypothesisForest forest(net, cfg);
  TrackResult result;
  std::size_t cursor = 0;
  for (int scan = 0; scan <= last_scan; ++scan) {
    const auto t0 = std::chrono::steady_clock::now();
    const double hi = (scan + 1) * cfg.scan_seconds;
    std::size_t begin = cursor;
    while (cursor < sorted.size() && sorted[cursor].time < hi) ++cursor;
    const std::span<const StreamEvent> batch(sorted.data() + begin,
                                             cursor - begin);
    bool grew = false;
    for (const auto& e : batch)
      if (e.kind == StreamEvent::Kind::start) grew = true;

    forest.ingest_scan(batch);
    if (grew) {
      const GlobalHypothesis best = best_global_hypothesis(forest);
      if (opts.prune) forest.n_scan_prune(best);
      if (opts.on_scan) opts.on_scan(forest, &best);
    } else if (opts.on_scan) {
      opts.on_scan(forest, nullptr);
    }

    const auto t1 = std::chrono::steady_clock::now();
    ScanStats st;
    st.scan = scan;
    st.grew = grew;
    st.seconds = std::chrono::duration<double>(t1 - t0).count();
    st.leaf_count = forest.leaves().size();
    result.peak_leaves = std::max(result.peak_leaves, st.leaf_count);
    result.scan_stats.push_back(st);
  }

  const GlobalHypothesis final_best = best_global_hypothesis(forest);
  for (std::size_t i = 0; i < final_best.tracks.size(); ++i) {
    result.tracks.push_back(final_best.tracks[i]);
    result.track_scores.push_back(final_best.branches[i]->score.log_score);
  }
  result.scans = last_scan + 1;
  result.observation_count = forest.observations().size();
  for (const auto& [id, o] : forest.observations())
    result.observation_durations[id] = o.last_time() - o.first_time();
  return result;
}

struct BenchReport {
  double mean_scan_seconds = 0.0;
  double max_scan_seconds = 0.0;
  std::size_t peak_leaves = 0;
  int scans = 0;
  double total_seconds = 0.0;
};

inline BenchReport bench_from_result(const TrackResult& r) {
  BenchReport b;
  b.scans = r.scans;
  b.peak_leaves = r.peak_leaves;
  for (const auto& st : r.scan_stats) {
    b.total_seconds += st.seconds;
    b.max_scan_seconds = std::max(b.max_scan_seconds, st.seconds);
  }
  if (!r.scan_stats.empty())
    b.mean_scan_seconds = b.total_seconds / static_cast<double>(r.scan_stats.size());
  return b;
}

} // namespace mcmht

#endif // MCMHT_TRACKER_HPP_
