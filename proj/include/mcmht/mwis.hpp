#ifndef MCMHT_MWIS_HPP_
#define MCMHT_MWIS_HPP_

#include <cstdint>
#include <numeric>
#include <unordered_map>

#include "mcmht/forest.hpp"

namespace mcmht {

// Conflict graph over branches: vertices are leaves weighted by their
// cumulative log score, edges mark shared observations.
struct ConflictGraph {
  struct Vertex {
    int id = -1;
    const HypNode* leaf = nullptr;
    double weight = 0.0;
  };
  std::vector<Vertex> vertices;
  std::vector<std::pair<int, int>> edges; // unordered pairs, stored i < j
};

struct MwisSolution {
  std::vector<int> selected; // vertex ids, ascending
  double total_weight = 0.0;
};

inline ConflictGraph build_conflict_graph(const HypothesisForest& forest) {
  ConflictGraph g;
  std::unordered_map<int, std::vector<int>> by_obs; // obs id -> vertex ids
  for (const HypNode* leaf : forest.leaves()) {
    const int vid = static_cast<int>(g.vertices.size());
    g.vertices.push_back({vid, leaf, leaf->score.log_score});
    for (int obs : HypothesisForest::branch_observations(leaf))
      by_obs[obs].push_back(vid);
  }
  std::set<std::pair<int, int>> edges;
  for (const auto& [obs, vids] : by_obs)
    for (std::size_t a = 0; a < vids.size(); ++a)
      for (std::size_t b = a + 1; b < vids.size(); ++b)
        edges.insert({std::min(vids[a], vids[b]), std::max(vids[a], vids[b])});
  g.edges.assign(edges.begin(), edges.end());
  return g;
}

namespace detail {

// Fixed-capacity bitset over graph vertices.
struct VertexSet {
  std::vector<std::uint64_t> blocks;

  explicit VertexSet(std::size_t n = 0) : blocks((n + 63) / 64, 0) {}
  void set(std::size_t i) { blocks[i / 64] |= std::uint64_t{1} << (i % 64); }
  void reset(std::size_t i) { blocks[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
  bool test(std::size_t i) const {
    return (blocks[i / 64] >> (i % 64)) & 1;
  }
  bool empty() const {
    for (auto b : blocks)
      if (b) return false;
    return true;
  }
  void subtract(const VertexSet& o) {
    for (std::size_t i = 0; i < blocks.size(); ++i) blocks[i] &= ~o.blocks[i];
  }
  bool intersects(const VertexSet& o) const {
    for (std::size_t i = 0; i < blocks.size(); ++i)
      if (blocks[i] & o.blocks[i]) return true;
    return false;
  }
};

// True if ids a (sorted) precedes b (sorted) lexicographically.
inline bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct BnbSolver {
  // vertices re-indexed in (weight desc, id asc) order
  std::vector<double> weight;
  std::vector<int> orig_id;
  std::vector<VertexSet> adj;
  std::size_t n = 0;

  std::vector<int> best_ids; // original ids, sorted
  double best_weight = 0.0;
  bool have_best = false;

  // Clique-cover bound: partition the candidates greedily into cliques;
  // at most one vertex per clique can enter, so the class maxima bound
  // the achievable weight.
  double upper_bound(const VertexSet& cand, const std::vector<int>& order) const {
    std::vector<VertexSet> classes;
    std::vector<double> class_max;
    double bound = 0.0;
    for (int v : order) {
      if (!cand.test(static_cast<std::size_t>(v))) continue;
      bool placed = false;
      for (std::size_t c = 0; c < classes.size(); ++c) {
        // vertex joins a clique only if adjacent to all current members,
        // i.e. its non-neighbors miss the class entirely
        VertexSet non_members = classes[c];
        non_members.subtract(adj[static_cast<std::size_t>(v)]);
        if (non_members.empty()) {
          classes[c].set(static_cast<std::size_t>(v));
          placed = true;
          break;
        }
      }
      if (!placed) {
        VertexSet cls(n);
        cls.set(static_cast<std::size_t>(v));
        classes.push_back(std::move(cls));
        class_max.push_back(std::max(0.0, weight[static_cast<std::size_t>(v)]));
        bound += class_max.back();
      }
    }
    return bound;
  }

  void offer(const std::vector<int>& cur_orig, double cur_weight) {
    std::vector<int> ids = cur_orig;
    std::sort(ids.begin(), ids.end());
    if (!have_best || cur_weight > best_weight ||
        (cur_weight == best_weight && lex_less(ids, best_ids))) {
      have_best = true;
      best_weight = cur_weight;
      best_ids = std::move(ids);
    }
  }

  void search(VertexSet cand, std::vector<int>& cur, double cur_weight,
              const std::vector<int>& order, std::size_t order_pos) {
    // first remaining candidate in weight order
    std::size_t pos = order_pos;
    while (pos < order.size() &&
           !cand.test(static_cast<std::size_t>(order[pos])))
      ++pos;
    if (pos == order.size()) {
      offer(cur, cur_weight);
      return;
    }
    if (cur_weight + upper_bound(cand, order) < best_weight && have_best)
      return;

    const int v = order[pos];
    // include v
    VertexSet with = cand;
    with.reset(static_cast<std::size_t>(v));
    with.subtract(adj[static_cast<std::size_t>(v)]);
    cur.push_back(orig_id[static_cast<std::size_t>(v)]);
    search(with, cur, cur_weight + weight[static_cast<std::size_t>(v)], order,
           pos + 1);
    cur.pop_back();
    // exclude v
    VertexSet without = cand;
    without.reset(static_cast<std::size_t>(v));
    search(without, cur, cur_weight, order, pos + 1);
  }
};

} // namespace detail

// Exact branch-and-bound MWIS. Deterministic tie-break: among optima the
// lexicographically smallest sorted vertex-id set wins. Negative-weight
// vertices can never help and are excluded up front.
inline MwisSolution solve_mwis(const ConflictGraph& g) {
  std::vector<int> keep;
  for (const auto& v : g.vertices)
    if (v.weight >= 0.0) keep.push_back(v.id);

  detail::BnbSolver s;
  s.n = keep.size();
  std::unordered_map<int, std::size_t> index;
  s.weight.reserve(s.n);
  s.orig_id.reserve(s.n);
  // order by weight descending, id ascending
  std::sort(keep.begin(), keep.end(), [&](int a, int b) {
    const double wa = g.vertices[static_cast<std::size_t>(a)].weight;
    const double wb = g.vertices[static_cast<std::size_t>(b)].weight;
    if (wa != wb) return wa > wb;
    return a < b;
  });
  for (std::size_t i = 0; i < keep.size(); ++i) {
    index[keep[i]] = i;
    s.weight.push_back(g.vertices[static_cast<std::size_t>(keep[i])].weight);
    s.orig_id.push_back(keep[i]);
  }
  s.adj.assign(s.n, detail::VertexSet(s.n));
  for (const auto& [a, b] : g.edges) {
    auto ia = index.find(a), ib = index.find(b);
    if (ia == index.end() || ib == index.end()) continue;
    s.adj[ia->second].set(ib->second);
    s.adj[ib->second].set(ia->second);
  }

  detail::VertexSet all(s.n);
  std::vector<int> order(s.n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = 0; i < s.n; ++i) all.set(i);
  std::vector<int> cur;
  s.offer(cur, 0.0); // empty set is always feasible
  s.search(all, cur, 0.0, order, 0);
  return {s.best_ids, s.best_weight};
}

// Exhaustive oracle over all independent subsets, same tie-break.
inline MwisSolution brute_force_mwis(const ConflictGraph& g) {
  const std::size_t n = g.vertices.size();
  if (n > 25) throw data_error("brute_force_mwis: graph too large (>25 vertices)");
  std::vector<std::uint32_t> adj(n, 0);
  for (const auto& [a, b] : g.edges) {
    adj[static_cast<std::size_t>(a)] |= std::uint32_t{1} << b;
    adj[static_cast<std::size_t>(b)] |= std::uint32_t{1} << a;
  }
  std::vector<int> best_ids;
  double best_weight = 0.0;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    bool independent = true;
    double w = 0.0;
    for (std::size_t i = 0; i < n && independent; ++i) {
      if (!(mask & (std::uint32_t{1} << i))) continue;
      if (adj[i] & mask) independent = false;
      w += g.vertices[i].weight;
    }
    if (!independent) continue;
    std::vector<int> ids;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::uint32_t{1} << i)) ids.push_back(static_cast<int>(i));
    if (w > best_weight ||
        (w == best_weight && detail::lex_less(ids, best_ids))) {
      best_weight = w;
      best_ids = std::move(ids);
    }
  }
  return {best_ids, best_weight};
}

// Builds the conflict graph, solves it exactly and maps the winners back
// onto branches. Verifies the disjointness constraint on the result.
inline GlobalHypothesis best_global_hypothesis(const HypothesisForest& forest) {
  const ConflictGraph g = build_conflict_graph(forest);
  const MwisSolution sol = solve_mwis(g);

  GlobalHypothesis best;
  best.total_weight = sol.total_weight;
  std::set<int> seen;
  bool all_positive = true;
  for (const auto& v : g.vertices)
    if (!(v.weight > 0.0)) all_positive = false;
  for (int vid : sol.selected) {
    const HypNode* leaf = g.vertices[static_cast<std::size_t>(vid)].leaf;
    best.branches.push_back(leaf);
    auto track = HypothesisForest::branch_observations(leaf);
    for (int obs : track)
      if (!seen.insert(obs).second)
        throw internal_error("best_global_hypothesis: selected branches share "
                             "observation " + std::to_string(obs));
    best.tracks.push_back(std::move(track));
  }
  if (all_positive) {
    for (const auto& [id, o] : forest.observations())
      if (!seen.count(id))
        throw internal_error("best_global_hypothesis: observation " +
                             std::to_string(id) + " left uncovered");
  }
  return best;
}

} // namespace mcmht

#endif // MCMHT_MWIS_HPP_
