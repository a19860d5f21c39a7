#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "helpers.hpp"
#include "mcmht/mwis.hpp"

using namespace mcmht;
using testutil::ground_network;
using testutil::walkthrough_scenario;
using testutil::WalkthroughScenario;

namespace {

// Feed every scan from the forest's current position up to `upto_scan`
// inclusive, batching events by scan interval.
void run_scans(HypothesisForest& f, const std::vector<StreamEvent>& ev,
               int upto_scan) {
  while (f.scan_counter() <= upto_scan) {
    const double s0 = f.scan_counter() * f.config().scan_seconds;
    const double s1 = s0 + f.config().scan_seconds;
    std::vector<StreamEvent> batch;
    for (const auto& e : ev)
      if (e.time >= s0 && e.time < s1) batch.push_back(e);
    f.ingest_scan(batch);
  }
}

std::multiset<std::vector<int>> leaf_branches(const HypothesisForest& f) {
  std::multiset<std::vector<int>> out;
  for (const HypNode* leaf : std::as_const(f).leaves())
    out.insert(HypothesisForest::branch_observations(leaf));
  return out;
}

std::size_t count_nodes(const HypNode* n) {
  std::size_t total = 1;
  for (const auto& c : n->children) total += count_nodes(c.get());
  return total;
}

std::size_t forest_nodes(const HypothesisForest& f) {
  std::size_t total = 0;
  for (const auto& root : f.trees()) total += count_nodes(root.get());
  return total;
}

StreamEvent ground_event(StreamEvent::Kind kind, int obs, int cam, double t,
                         std::array<double, 2> g,
                         std::optional<Feature> feature) {
  StreamEvent e;
  e.kind = kind;
  e.obs_id = obs;
  e.camera = cam;
  e.time = t;
  e.u = g[0] * 10.0;
  e.v = g[1] * 10.0;
  e.w = 40.0;
  e.h = 100.0;
  e.ground = g;
  e.feature = std::move(feature);
  return e;
}

} // namespace

TEST_CASE("walkthrough: first scan plants a single-node tree") {
  const auto s = walkthrough_scenario();
  HypothesisForest f(s.net, s.cfg);
  run_scans(f, s.events, 0);
  REQUIRE(f.trees().size() == 1);
  const HypNode* root = f.trees()[0].get();
  CHECK(root->is_leaf());
  CHECK(root->obs_id == WalkthroughScenario::o1);
  CHECK(root->status == Status::w1_tracking);
  CHECK(root->score.log_score == doctest::Approx(s.cfg.c0));
}

TEST_CASE("walkthrough: end of observation flips the leaf to searching") {
  const auto s = walkthrough_scenario();
  HypothesisForest f(s.net, s.cfg);
  run_scans(f, s.events, 1);
  REQUIRE(f.trees().size() == 1);
  const HypNode* root = f.trees()[0].get();
  CHECK(root->is_leaf()); // no new observations, so no dummies either
  CHECK(root->status == Status::w2_searching);
  REQUIRE(root->search_started_at.has_value());
  CHECK(*root->search_started_at == doctest::Approx(1.8));
}

TEST_CASE("walkthrough: two new observations branch the searching leaf") {
  const auto s = walkthrough_scenario();
  HypothesisForest f(s.net, s.cfg);
  run_scans(f, s.events, 2);
  REQUIRE(f.trees().size() == 3);
  const HypNode* root = f.trees()[0].get();
  REQUIRE(root->children.size() == 3); // o2, o3, dummy
  int dummies = 0;
  std::set<int> child_obs;
  for (const auto& c : root->children) {
    if (c->dummy) {
      ++dummies;
      CHECK(c->obs_id == WalkthroughScenario::o1);
      CHECK(c->status == Status::w2_searching);
      CHECK(c->score.log_score == doctest::Approx(root->score.log_score));
    } else {
      child_obs.insert(c->obs_id);
      CHECK(c->status == Status::w1_tracking);
      CHECK(c->score.log_score > root->score.log_score);
    }
  }
  CHECK(dummies == 1);
  CHECK(child_obs == std::set<int>{WalkthroughScenario::o2,
                                   WalkthroughScenario::o3});
  // fresh single-node trees for the new observations
  CHECK(f.trees()[1]->is_leaf());
  CHECK(f.trees()[2]->is_leaf());
}

TEST_CASE("walkthrough: quiet scan only updates statuses") {
  const auto s = walkthrough_scenario();
  HypothesisForest f(s.net, s.cfg);
  run_scans(f, s.events, 2);
  const std::size_t nodes_before = forest_nodes(f);
  run_scans(f, s.events, 3); // o2 and o3 end, nothing starts
  CHECK(forest_nodes(f) == nodes_before);

  // every o2/o3 leaf is now searching; the dummy branch of o1 timed out
  for (const HypNode* leaf : std::as_const(f).leaves()) {
    if (leaf->obs_id == WalkthroughScenario::o1)
      CHECK(leaf->status == Status::w3_end);
    else
      CHECK(leaf->status == Status::w2_searching);
  }
}

TEST_CASE("walkthrough: fifth scan yields the ten known branches") {
  const auto s = walkthrough_scenario();
  HypothesisForest f(s.net, s.cfg);
  run_scans(f, s.events, 4);
  REQUIRE(f.trees().size() == 4);

  const int o1 = WalkthroughScenario::o1, o2 = WalkthroughScenario::o2;
  const int o3 = WalkthroughScenario::o3, o4 = WalkthroughScenario::o4;
  const std::multiset<std::vector<int>> expected{
      {o1, o2, o4}, {o1, o2}, {o1, o3, o4}, {o1, o3}, {o1},
      {o2, o4},     {o2},     {o3, o4},     {o3},     {o4}};
  CHECK(leaf_branches(f) == expected);

  // the frozen branch keeps its end-of-track status through the dummy
  for (const HypNode* leaf : std::as_const(f).leaves())
    if (HypothesisForest::branch_observations(leaf) == std::vector<int>{o1})
      CHECK(leaf->status == Status::w3_end);
}

TEST_CASE("walkthrough: best hypothesis pairs the similar observations") {
  const auto s = walkthrough_scenario();
  HypothesisForest f(s.net, s.cfg);
  run_scans(f, s.events, 5);
  CHECK(leaf_branches(f).size() == 10); // sixth scan grew nothing

  const GlobalHypothesis best = best_global_hypothesis(f);
  std::set<std::vector<int>> tracks(best.tracks.begin(), best.tracks.end());
  const std::set<std::vector<int>> expected{
      {WalkthroughScenario::o1, WalkthroughScenario::o2,
       WalkthroughScenario::o4},
      {WalkthroughScenario::o3}};
  CHECK(tracks == expected);
}

TEST_CASE("walkthrough: two-scan pruning resolves the old ambiguity") {
  const auto s = walkthrough_scenario();
  HypothesisForest f(s.net, s.cfg);
  run_scans(f, s.events, 5);
  f.n_scan_prune(best_global_hypothesis(f));

  REQUIRE(f.trees().size() == 2); // trees rooted at o2 and o4 were claimed
  const int o1 = WalkthroughScenario::o1, o2 = WalkthroughScenario::o2;
  const int o3 = WalkthroughScenario::o3, o4 = WalkthroughScenario::o4;
  // tree 1 is deep enough to prune at its root; the two-level tree of o3
  // sits entirely inside the two-scan window and survives whole
  const std::multiset<std::vector<int>> expected{
      {o1, o2, o4}, {o1, o2}, {o3, o4}, {o3}};
  CHECK(leaf_branches(f) == expected);

  // surviving tree 1 is now the chain o1 -> o2 -> {o4, dummy}
  const HypNode* root = f.trees()[0].get();
  REQUIRE(root->children.size() == 1);
  CHECK(root->children[0]->obs_id == o2);
  CHECK(root->children[0]->children.size() == 2);
}

TEST_CASE("pruning at a decision node below the root") {
  // four-camera chain with a decoy in camera 1; the best branch is four
  // deep, so with N=2 the decision node is the second node of the path
  TrackerConfig cfg;
  cfg.scan_seconds = 1.0;
  cfg.g_end_fixed = 0.9;
  cfg.n_scan = 2;
  CameraNetworkModel net = testutil::image_network(4, 0.3, 0.1);

  const Feature bright{0.9, 0.1};
  const Feature dark{0.1, 0.9};
  std::vector<StreamEvent> ev;
  auto add = [&ev](StreamEvent::Kind kind, int obs, int cam, double t,
                   double u, std::optional<Feature> f) {
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
    ev.push_back(e);
  };
  using K = StreamEvent::Kind;
  add(K::start, 1, 0, 0.0, 0.0, bright);
  add(K::end, 1, 0, 1.8, 100.0, bright);
  add(K::start, 2, 1, 2.0, 0.0, bright);
  add(K::start, 5, 1, 2.2, 0.0, dark); // decoy
  add(K::end, 2, 1, 3.8, 100.0, bright);
  add(K::end, 5, 1, 3.8, 100.0, dark);
  add(K::start, 3, 2, 4.1, 0.0, bright);
  add(K::end, 3, 2, 5.8, 100.0, bright);
  add(K::start, 4, 3, 6.1, 0.0, bright);
  add(K::end, 4, 3, 7.2, 100.0, bright);
  std::sort(ev.begin(), ev.end(), event_time_order);

  HypothesisForest f(net, cfg);
  run_scans(f, ev, 7);
  const GlobalHypothesis best = best_global_hypothesis(f);
  std::set<std::vector<int>> tracks(best.tracks.begin(), best.tracks.end());
  REQUIRE(tracks == std::set<std::vector<int>>{{1, 2, 3, 4}, {5}});

  f.n_scan_prune(best);
  // the decoy subtree under the selected root is gone, but ambiguity at
  // the third level (within the last two scans) survives
  const std::multiset<std::vector<int>> expected{
      {1, 2, 3, 4}, {1, 2, 3}, {5}};
  CHECK(leaf_branches(f) == expected);
  const HypNode* root = f.trees()[0].get();
  REQUIRE(root->children.size() == 1);
  CHECK(root->children[0]->obs_id == 2);
  REQUIRE(root->children[0]->children.size() == 1);
  CHECK(root->children[0]->children[0]->obs_id == 3);
  CHECK(root->children[0]->children[0]->children.size() == 2);
}

TEST_CASE("a wide pruning horizon keeps all ambiguity") {
  auto s = walkthrough_scenario();
  s.cfg.n_scan = 10;
  HypothesisForest f(s.net, s.cfg);
  run_scans(f, s.events, 5);
  f.n_scan_prune(best_global_hypothesis(f));

  // claimed single-node trees still vanish, but nothing inside the
  // selected trees is cut
  REQUIRE(f.trees().size() == 2);
  // 10 branches minus the claimed trees rooted at o2 and o4
  CHECK(leaf_branches(f).size() == 7);
}

TEST_CASE("ingesting an empty scan changes nothing structurally") {
  const auto s = walkthrough_scenario();
  HypothesisForest f(s.net, s.cfg);
  run_scans(f, s.events, 2);
  const std::size_t nodes = forest_nodes(f);
  const auto branches = leaf_branches(f);
  f.ingest_scan({});
  CHECK(forest_nodes(f) == nodes);
  CHECK(leaf_branches(f) == branches);
  CHECK(f.scan_counter() == 4);
}

TEST_CASE("events outside the scan interval are rejected") {
  const auto s = walkthrough_scenario();
  HypothesisForest f(s.net, s.cfg);
  std::vector<StreamEvent> late{s.events.back()}; // t = 5.2, scan 0
  CHECK_THROWS_AS(f.ingest_scan(late), data_error);
}

TEST_CASE("ground-plane growth: gating filters candidate extensions") {
  TrackerConfig cfg;
  cfg.scan_seconds = 1.0;
  CameraNetworkModel net = ground_network(3, 400.0);
  const Feature bright = normalize_feature({0.9, 0.1});

  using K = StreamEvent::Kind;
  std::vector<StreamEvent> ev{
      ground_event(K::start, 1, 0, 0.1, {0.0, 0.0}, bright),
      ground_event(K::end, 1, 0, 0.9, {0.8, 0.0}, bright), // 1 m/s
      // both B and C open a plausible walk from (0.8, 0) at t=0.9
      ground_event(K::start, 2, 1, 2.0, {2.0, 0.0}, bright),
      ground_event(K::start, 3, 1, 2.2, {2.3, 0.0}, bright),
      // D would require > 2 m/s: gated out
      ground_event(K::start, 4, 2, 2.4, {15.0, 0.0}, bright),
  };
  HypothesisForest f(net, cfg);
  run_scans(f, ev, 2);

  REQUIRE(f.trees().size() == 4);
  const std::multiset<std::vector<int>> expected{
      {1, 2}, {1, 3}, {1}, {2}, {3}, {4}};
  CHECK(leaf_branches(f) == expected);
}

TEST_CASE("branch_observations collapses dummies") {
  HypNode root;
  root.obs_id = 7;
  auto dummy = std::make_unique<HypNode>();
  dummy->obs_id = 7;
  dummy->dummy = true;
  dummy->parent = &root;
  auto child = std::make_unique<HypNode>();
  child->obs_id = 9;
  child->parent = dummy.get();
  const HypNode* leaf = child.get();
  dummy->children.push_back(std::move(child));
  root.children.push_back(std::move(dummy));
  CHECK(HypothesisForest::branch_observations(leaf) ==
        std::vector<int>{7, 9});
  CHECK(HypothesisForest::branch_observations(&root) == std::vector<int>{7});
}

TEST_CASE("conflict detects any shared observation") {
  // two chains: 1 -> 2 and 3 -> 2 share observation 2
  HypNode a0, b0;
  a0.obs_id = 1;
  b0.obs_id = 3;
  auto a1 = std::make_unique<HypNode>();
  a1->obs_id = 2;
  a1->parent = &a0;
  auto b1 = std::make_unique<HypNode>();
  b1->obs_id = 2;
  b1->parent = &b0;
  CHECK(HypothesisForest::conflict(a1.get(), b1.get()));
  CHECK(!HypothesisForest::conflict(&a0, &b0));
  CHECK(HypothesisForest::conflict(a1.get(), a1.get()));
}

TEST_CASE("leaf statuses never move backwards across scans") {
  const auto s = walkthrough_scenario();
  HypothesisForest f(s.net, s.cfg);
  std::map<int, Status> last_status; // node id -> status
  for (int scan = 0; scan <= 5; ++scan) {
    run_scans(f, s.events, scan);
    for (const HypNode* leaf : std::as_const(f).leaves()) {
      auto it = last_status.find(leaf->node_id);
      if (it != last_status.end())
        CHECK(static_cast<int>(leaf->status) >= static_cast<int>(it->second));
      last_status[leaf->node_id] = leaf->status;
    }
  }
}
