#ifndef MCMHT_FOREST_HPP_
#define MCMHT_FOREST_HPP_

#include <iomanip>
#include <memory>
#include <set>
#include <span>
#include <sstream>
#include <unordered_map>

#include "mcmht/domain.hpp"
#include "mcmht/gating.hpp"
#include "mcmht/scoring.hpp"

namespace mcmht {

enum class Status { w1_tracking, w2_searching, w3_end };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::w1_tracking: return "w1";
    case Status::w2_searching: return "w2";
    case Status::w3_end: return "w3";
  }
  return "?";
}

struct HypNode {
  int node_id = -1;
  int obs_id = -1;      // dummy nodes repeat the parent's obs_id
  bool dummy = false;
  HypNode* parent = nullptr;
  std::vector<std::unique_ptr<HypNode>> children;
  Status status = Status::w1_tracking; // meaningful on leaves only
  BranchScoreState score;
  std::optional<double> search_started_at; // set on w1 -> w2

  bool is_leaf() const { return children.empty(); }
};

// A conflict-free set of branches: the current multi-camera tracks.
struct GlobalHypothesis {
  std::vector<const HypNode*> branches;
  std::vector<std::vector<int>> tracks; // observation ids, dummies elided
  double total_weight = 0.0;
};

// The set of track-hypothesis trees, extended scan by scan.
class HypothesisForest {
 public:
  HypothesisForest(CameraNetworkModel net, TrackerConfig cfg)
      : net_(std::move(net)), cfg_(std::move(cfg)) {}

  const CameraNetworkModel& network() const { return net_; }
  const TrackerConfig& config() const { return cfg_; }
  int scan_counter() const { return scan_counter_; }
  double clock() const { return clock_; }
  const std::map<int, Observation>& observations() const { return observations_; }
  const std::vector<std::unique_ptr<HypNode>>& trees() const { return trees_; }

  std::vector<HypNode*> leaves() {
    std::vector<HypNode*> out;
    for (auto& root : trees_) collect_leaves(root.get(), out);
    return out;
  }
  std::vector<const HypNode*> leaves() const {
    std::vector<const HypNode*> out;
    for (const auto& root : trees_) collect_leaves_const(root.get(), out);
    return out;
  }

  // Advances the forest by one scan. Events must all fall inside the scan's
  // time interval. Order of effects: end flips (w1 -> w2), deadline flips
  // (w2 -> w3), then, only if the scan brought new observations, tree
  // initiation, gated extension of w2 leaves and dummy extension of every
  // pre-existing leaf.
  void ingest_scan(std::span<const StreamEvent> events) {
    const double scan_start = scan_counter_ * cfg_.scan_seconds;
    const double scan_end = scan_start + cfg_.scan_seconds;

    std::vector<StreamEvent> sorted(events.begin(), events.end());
    std::sort(sorted.begin(), sorted.end(), event_time_order);
    std::vector<int> new_ids;
    for (const auto& e : sorted) {
      if (e.time < scan_start - 1e-9 || e.time >= scan_end)
        throw data_error("ingest_scan: event at t=" + std::to_string(e.time) +
                         " outside scan " + std::to_string(scan_counter_));
      apply_event(e);
      if (e.kind == StreamEvent::Kind::start) new_ids.push_back(e.obs_id);
    }

    // (1) leaves of closed observations stop tracking and start searching
    for (HypNode* leaf : leaves()) {
      if (leaf->status != Status::w1_tracking) continue;
      const Observation& o = observations_.at(leaf->obs_id);
      if (o.closed) {
        leaf->status = Status::w2_searching;
        leaf->search_started_at = o.last_time();
      }
    }

    // (2) searching leaves past their deadline freeze; elapsed time is
    // measured up to the start of the current scan
    for (HypNode* leaf : leaves()) {
      if (leaf->status != Status::w2_searching) continue;
      const Observation& o = observations_.at(leaf->obs_id);
      const double deadline = end_of_track_deadline(o, net_, cfg_);
      if (scan_start - *leaf->search_started_at > deadline)
        leaf->status = Status::w3_end;
    }

    // (3)/(4) grow only on scans that received new observations
    if (!new_ids.empty()) {
      std::vector<HypNode*> snapshot = leaves();
      for (HypNode* leaf : snapshot) {
        if (leaf->status == Status::w2_searching) {
          const Observation& last = observations_.at(leaf->obs_id);
          for (int nid : new_ids) {
            const Observation& cand = observations_.at(nid);
            if (!(cand.first_time() > last.last_time())) continue;
            if (!gate_pair(last, cand, net_, cfg_).admissible) continue;
            const double inc = delta_log_score(leaf->score, last, cand, net_, cfg_);
            if (!std::isfinite(inc)) continue;
            auto child = std::make_unique<HypNode>();
            child->node_id = next_node_id_++;
            child->obs_id = nid;
            child->parent = leaf;
            child->status = Status::w1_tracking;
            child->score = update_mean_feature(leaf->score, cand.feature);
            child->score.log_score = leaf->score.log_score + inc;
            leaf->children.push_back(std::move(child));
          }
        }
        // dummy sibling: the branch was not extended this scan
        auto dummy = std::make_unique<HypNode>();
        dummy->node_id = next_node_id_++;
        dummy->obs_id = leaf->obs_id;
        dummy->dummy = true;
        dummy->parent = leaf;
        dummy->status = leaf->status;
        dummy->score = leaf->score;
        dummy->search_started_at = leaf->search_started_at;
        leaf->children.push_back(std::move(dummy));
      }
      for (int nid : new_ids) {
        auto root = std::make_unique<HypNode>();
        root->node_id = next_node_id_++;
        root->obs_id = nid;
        root->status = Status::w1_tracking;
        root->score = BranchScoreState::initial(cfg_, observations_.at(nid).feature);
        trees_.push_back(std::move(root));
      }
      ++growth_scans_;
    }

    ++scan_counter_;
    clock_ = scan_counter_ * cfg_.scan_seconds;
  }

  // Root-to-leaf observation ids with consecutive dummy repeats collapsed.
  static std::vector<int> branch_observations(const HypNode* leaf) {
    std::vector<int> rev;
    for (const HypNode* n = leaf; n; n = n->parent)
      if (!n->dummy) rev.push_back(n->obs_id);
    return {rev.rbegin(), rev.rend()};
  }

  static bool conflict(const HypNode* a, const HypNode* b) {
    const auto oa = branch_observations(a);
    std::set<int> sa(oa.begin(), oa.end());
    for (const HypNode* n = b; n; n = n->parent)
      if (!n->dummy && sa.count(n->obs_id)) return true;
    return false;
  }

  // Standard N-scan pruning against the current best hypothesis: keep only
  // the best path above each selected leaf's decision node, and drop whole
  // unselected trees whose root observation the best hypothesis claims.
  void n_scan_prune(const GlobalHypothesis& best) {
    std::set<int> claimed;
    for (const auto& track : best.tracks)
      claimed.insert(track.begin(), track.end());
    std::unordered_map<const HypNode*, const HypNode*> selected_by_root;
    for (const HypNode* leaf : best.branches) {
      const HypNode* root = leaf;
      while (root->parent) root = root->parent;
      selected_by_root[root] = leaf;
    }

    for (std::size_t i = 0; i < trees_.size();) {
      HypNode* root = trees_[i].get();
      auto it = selected_by_root.find(root);
      if (it == selected_by_root.end()) {
        if (claimed.count(root->obs_id)) {
          trees_.erase(trees_.begin() + static_cast<std::ptrdiff_t>(i));
          continue;
        }
        ++i;
        continue;
      }
      prune_tree(it->second);
      ++i;
    }
  }

  // Indented text dump with a stable field order, for debugging and
  // golden-file tests.
  std::string dump() const {
    std::ostringstream os;
    os << "forest scan=" << scan_counter_ << " clock=" << clock_
       << " trees=" << trees_.size() << "\n";
    for (const auto& root : trees_) dump_node(os, root.get(), 0);
    return os.str();
  }

 private:
  void apply_event(const StreamEvent& e) {
    switch (e.kind) {
      case StreamEvent::Kind::start: {
        if (observations_.count(e.obs_id))
          throw data_error("ingest_scan: duplicate start for observation " +
                           std::to_string(e.obs_id));
        Observation o;
        o.id = e.obs_id;
        o.camera = e.camera;
        o.history.push_back({e.time, e.u, e.v, e.w, e.h, e.ground});
        if (!e.feature)
          throw data_error("ingest_scan: start event without feature");
        if (!feature_normalized(*e.feature))
          throw data_error("ingest_scan: feature not normalized (obs " +
                           std::to_string(e.obs_id) + ")");
        o.feature = *e.feature;
        if (net_.mode == Mode::image_plane)
          o.entry_point = net_.nearest_point(e.camera, e.u, e.v);
        observations_.emplace(e.obs_id, std::move(o));
        break;
      }
      case StreamEvent::Kind::extend: {
        Observation& o = obs_mut(e.obs_id);
        if (o.closed)
          throw data_error("ingest_scan: extend after end for observation " +
                           std::to_string(e.obs_id));
        if (!(e.time > o.last_time()))
          throw data_error("ingest_scan: non-monotone time in observation " +
                           std::to_string(e.obs_id));
        o.history.push_back({e.time, e.u, e.v, e.w, e.h, e.ground});
        break;
      }
      case StreamEvent::Kind::end: {
        Observation& o = obs_mut(e.obs_id);
        if (o.closed)
          throw data_error("ingest_scan: duplicate end for observation " +
                           std::to_string(e.obs_id));
        if (e.time > o.last_time())
          o.history.push_back({e.time, e.u, e.v, e.w, e.h, e.ground});
        if (e.feature) {
          if (!feature_normalized(*e.feature))
            throw data_error("ingest_scan: feature not normalized (obs " +
                             std::to_string(e.obs_id) + ")");
          o.feature = *e.feature;
        }
        o.closed = true;
        if (net_.mode == Mode::image_plane)
          o.exit_point = net_.nearest_point(o.camera, o.history.back().u,
                                            o.history.back().v);
        break;
      }
    }
  }

  Observation& obs_mut(int id) {
    auto it = observations_.find(id);
    if (it == observations_.end())
      throw data_error("ingest_scan: unknown observation id " + std::to_string(id));
    return it->second;
  }

  static void collect_leaves(HypNode* n, std::vector<HypNode*>& out) {
    if (n->is_leaf()) {
      out.push_back(n);
      return;
    }
    for (auto& c : n->children) collect_leaves(c.get(), out);
  }

  // Keep only the selected branch above the decision node (N parents up
  // from the selected leaf); ambiguity within the last N growth levels
  // survives untouched. Trees too shallow to ascend N times are left alone.
  void prune_tree(const HypNode* selected) const {
    std::vector<const HypNode*> path; // root .. selected
    for (const HypNode* n = selected; n; n = n->parent) path.push_back(n);
    std::reverse(path.begin(), path.end());

    if (static_cast<std::size_t>(cfg_.n_scan) >= path.size()) return;
    const std::size_t decision_idx = path.size() - 1 -
                                     static_cast<std::size_t>(cfg_.n_scan);

    for (std::size_t i = 0; i + 1 < path.size() && i <= decision_idx; ++i) {
      HypNode* node = const_cast<HypNode*>(path[i]);
      const HypNode* keep = path[i + 1];
      std::erase_if(node->children,
                    [keep](const std::unique_ptr<HypNode>& c) {
                      return c.get() != keep;
                    });
    }
  }

  static void collect_leaves_const(const HypNode* n,
                                   std::vector<const HypNode*>& out) {
    if (n->is_leaf()) {
      out.push_back(n);
      return;
    }
    for (const auto& c : n->children) collect_leaves_const(c.get(), out);
  }

  void dump_node(std::ostringstream& os, const HypNode* n, int depth) const {
    for (int i = 0; i < depth; ++i) os << "  ";
    os << "node=" << n->node_id << " obs=" << n->obs_id
       << " dummy=" << (n->dummy ? 1 : 0) << " status=" << to_string(n->status)
       << " score=" << std::setprecision(12) << n->score.log_score << "\n";
    for (const auto& c : n->children) dump_node(os, c.get(), depth + 1);
  }

  CameraNetworkModel net_;
  TrackerConfig cfg_;
  std::map<int, Observation> observations_;
  std::vector<std::unique_ptr<HypNode>> trees_;
  int scan_counter_ = 0;
  double clock_ = 0.0;
  int next_node_id_ = 0;
  int growth_scans_ = 0;
};

} // namespace mcmht

#endif // MCMHT_FOREST_HPP_
