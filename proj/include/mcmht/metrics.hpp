#ifndef MCMHT_METRICS_HPP_
#define MCMHT_METRICS_HPP_

#include "mcmht/simulator.hpp"

namespace mcmht {

struct IdReport {
  double idp = 0.0;
  double idr = 0.0;
  double idf1 = 0.0;
  // truth identity -> computed track index, matched pairs only
  std::vector<std::pair<int, int>> matching;
};

namespace detail {

// Exact rectangular assignment (Hungarian algorithm with potentials),
// minimizing total cost. Returns, for each row, the assigned column.
inline std::vector<int> min_cost_assignment(
    const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  if (n == 0) return {};
  const int m = static_cast<int>(cost[0].size());
  // pad to square implicitly by allowing "no column" cost 0 via a square
  // matrix of size max(n, m) filled with zeros
  const int dim = std::max(n, m);
  auto c = [&](int i, int j) -> double {
    return (i < n && j < m) ? cost[static_cast<std::size_t>(i)]
                                  [static_cast<std::size_t>(j)]
                            : 0.0;
  };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(dim) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(dim) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(dim) + 1, 0);
  std::vector<int> way(static_cast<std::size_t>(dim) + 1, 0);
  for (int i = 1; i <= dim; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(dim) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(dim) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= dim; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = c(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                           v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= dim; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= dim; ++j) {
    const int i = p[static_cast<std::size_t>(j)];
    if (i >= 1 && i <= n && j <= m)
      row_to_col[static_cast<std::size_t>(i - 1)] = j - 1;
  }
  return row_to_col;
}

} // namespace detail

// Observation-granularity ID measures under the optimal one-to-one
// truth-to-track matching. weights: observation id -> duration.
inline IdReport evaluate(const std::vector<std::vector<int>>& computed,
                         const GroundTruth& truth,
                         const std::map<int, double>& weights) {
  auto weight_of = [&](int obs) {
    auto it = weights.find(obs);
    if (it == weights.end())
      throw data_error("evaluate: no weight for observation " +
                       std::to_string(obs));
    return it->second;
  };

  std::set<int> seen;
  double total_computed = 0.0;
  for (const auto& track : computed)
    for (int obs : track) {
      if (!seen.insert(obs).second)
        throw data_error("evaluate: computed tracks overlap on observation " +
                         std::to_string(obs));
      total_computed += weight_of(obs);
    }
  double total_truth = 0.0;
  std::vector<int> identities;
  for (const auto& [identity, obs_list] : truth.tracks) {
    identities.push_back(identity);
    for (int obs : obs_list) total_truth += weight_of(obs);
  }

  // overlap matrix: truth identity x computed track, in matched duration
  const int n = static_cast<int>(identities.size());
  const int m = static_cast<int>(computed.size());
  std::vector<std::vector<double>> overlap(
      static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(m), 0.0));
  std::map<int, int> obs_to_track;
  for (int j = 0; j < m; ++j)
    for (int obs : computed[static_cast<std::size_t>(j)]) obs_to_track[obs] = j;
  for (int i = 0; i < n; ++i)
    for (int obs : truth.tracks.at(identities[static_cast<std::size_t>(i)])) {
      auto it = obs_to_track.find(obs);
      if (it != obs_to_track.end())
        overlap[static_cast<std::size_t>(i)]
               [static_cast<std::size_t>(it->second)] += weight_of(obs);
    }

  std::vector<std::vector<double>> cost = overlap;
  for (auto& row : cost)
    for (double& x : row) x = -x;
  const std::vector<int> assign = detail::min_cost_assignment(cost);

  IdReport report;
  double matched = 0.0;
  for (int i = 0; i < n; ++i) {
    const int j = assign[static_cast<std::size_t>(i)];
    if (j < 0) continue;
    const double w = overlap[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    if (w <= 0.0) continue;
    matched += w;
    report.matching.emplace_back(identities[static_cast<std::size_t>(i)], j);
  }
  report.idp = total_computed > 0.0 ? matched / total_computed : 0.0;
  report.idr = total_truth > 0.0 ? matched / total_truth : 0.0;
  report.idf1 = (report.idp + report.idr) > 0.0
                    ? 2.0 * report.idp * report.idr / (report.idp + report.idr)
                    : 0.0;
  return report;
}

} // namespace mcmht

#endif // MCMHT_METRICS_HPP_
