#include <map>
#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "crsn/dsac.hpp"
#include "crsn/energy.hpp"
#include "test_support.hpp"

using namespace crsn;
using namespace crsn::dsac;
using crsn::testing::make_scenario;
using crsn::testing::make_uniform_scenario;

namespace {

std::vector<std::vector<NodeId>> groups(const Clustering& c) {
  std::vector<std::vector<NodeId>> out;
  for (const Cluster& cluster : c.clusters) {
    out.push_back(cluster.members);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void check_round_invariants(const SimState& state, const RoundReport& report) {
  REQUIRE_FALSE(constraint_error(state.clustering, state.scenario).has_value());
  std::map<ClusterId, ClusterId> sent;
  for (const auto& inv : report.invitations) {
    CHECK(sent.emplace(inv.source, inv.target).second);
  }
  std::set<std::pair<ClusterId, ClusterId>> mutual;
  for (const auto& [source, target] : sent) {
    auto back = sent.find(target);
    if (source < target && back != sent.end() && back->second == source) {
      mutual.emplace(source, target);
    }
  }
  std::set<std::pair<ClusterId, ClusterId>> merged;
  for (const Event& e : report.merges) {
    REQUIRE(e.clusters.size() == 3);
    merged.emplace(e.clusters[0], e.clusters[1]);
  }
  CHECK(merged == mutual);
}

}  // namespace

TEST_CASE("init_state") {
  const Scenario s = generate_scenario(FieldConfig{100, 100, 30, 6, 3, 20, 50, 9});
  const SimState state = init_state(s, 4);
  CHECK(state.clustering.size() == 30);
  CHECK(state.round == 0);
  CHECK(state.next_cluster_id == 30);
  for (const Cluster& c : state.clustering.clusters) {
    REQUIRE(c.members.size() == 1);
    CHECK(c.id == c.members[0]);
    CHECK(c.head == c.members[0]);
    CHECK(c.common_channels == s.nodes[c.id].channels);
  }
  // K_opt(30, 50, 0.003) = 6
  CHECK(state.size_cap == 5);
  CHECK(init_state(s, 4, Options{4}).size_cap == 8);

  SimState a = init_state(s, 77);
  SimState b = init_state(s, 77);
  run_to_convergence(a, 1, 40);
  run_to_convergence(b, 1, 40);
  CHECK(a.clustering == b.clustering);
  CHECK(a.event_log == b.event_log);
}

TEST_CASE("can_hear needs range and a shared channel") {
  const Scenario s = make_scenario({{0, 0}, {30, 40}, {0, 10}, {70, 0}}, {{0}, {0}, {1}, {0}}, 2);
  CHECK(can_hear(s, 0, 1));
  CHECK(can_hear(s, 1, 0));
  CHECK_FALSE(can_hear(s, 0, 2));
  CHECK_FALSE(can_hear(s, 0, 3));
  CHECK_FALSE(can_hear(s, 0, 0));
}

TEST_CASE("two mutually nearest singletons merge in one round") {
  const Scenario s = make_uniform_scenario({{0, 0}, {10, 0}}, {0, 1}, 2);
  SimState state = init_state(s, 1, Options{1});
  const RoundReport report = step_round(state);
  CHECK(report.round == 1);
  CHECK(state.round == 1);
  REQUIRE(report.merges.size() == 1);
  CHECK(report.merges[0].clusters == std::vector<ClusterId>{0, 1, 0});
  CHECK(groups(state.clustering) == std::vector<std::vector<NodeId>>{{0, 1}});
  CHECK(state.clustering.clusters[0].common_channels == ChannelSet::of({0, 1}));
  check_round_invariants(state, report);
}

TEST_CASE("a node without a shared channel stays alone") {
  const Scenario s = make_scenario({{0, 0}, {5, 0}, {10, 0}}, {{0}, {0}, {1}}, 2);
  SimState state = init_state(s, 1, Options{1});
  for (int r = 0; r < 5; ++r) {
    check_round_invariants(state, step_round(state));
  }
  CHECK(groups(state.clustering) == std::vector<std::vector<NodeId>>{{0, 1}, {2}});
}

TEST_CASE("well-separated pairs merge in parallel") {
  const Scenario s = make_uniform_scenario({{0, 0}, {3, 0}, {40, 40}, {43, 40}}, {0}, 1, 20.0);
  SimState state = init_state(s, 1, Options{2});
  const RoundReport report = step_round(state);
  CHECK(report.merges.size() == 2);
  CHECK(groups(state.clustering) == std::vector<std::vector<NodeId>>{{0, 1}, {2, 3}});
}

TEST_CASE("nearest-neighbour chains resolve one mutual pair at a time") {
  // 1 is nearest to 2, 2 is nearest to 1; 0 prefers 1 but is not chosen back.
  const Scenario s = make_uniform_scenario({{0, 0}, {5, 0}, {8, 0}}, {0}, 1);
  SimState state = init_state(s, 3, Options{1});
  const RoundReport first = step_round(state);
  check_round_invariants(state, first);
  CHECK(groups(state.clustering) == std::vector<std::vector<NodeId>>{{0}, {1, 2}});
  const RoundReport second = step_round(state);
  check_round_invariants(state, second);
  CHECK(groups(state.clustering) == std::vector<std::vector<NodeId>>{{0, 1, 2}});
}

TEST_CASE("clusters at the size cap stop inviting") {
  const Scenario s = make_uniform_scenario({{0, 0}, {2, 0}, {4, 0}, {6, 0}}, {0}, 1);
  // cap = ceil(4 / 2) = 2
  SimState state = init_state(s, 5, Options{2});
  CHECK(state.size_cap == 2);
  const auto result = run_to_convergence(state, 1, 10);
  CHECK(result.converged);
  CHECK(groups(result.clustering) == std::vector<std::vector<NodeId>>{{0, 1}, {2, 3}});
}

TEST_CASE("pairs farther apart than d_max never merge") {
  const Scenario s = make_uniform_scenario({{0, 0}, {30, 0}}, {0}, 1, 25.0);
  SimState state = init_state(s, 1, Options{1});
  const auto result = run_to_convergence(state, 1, 5);
  CHECK(result.converged);
  CHECK(result.rounds == 1);
  CHECK(result.merges == 0);
  CHECK(result.clustering.size() == 2);
}

TEST_CASE("run_to_convergence") {
  SUBCASE("infeasible scenario converges in one round") {
    const Scenario s = make_scenario({{0, 0}, {2, 0}, {4, 0}}, {{0}, {1}, {2}}, 3);
    SimState state = init_state(s, 1, Options{1});
    const auto r = run_to_convergence(state, 1, 10);
    CHECK(r.converged);
    CHECK(r.rounds == 1);
    CHECK(r.merges == 0);
    CHECK(r.clustering.size() == 3);
  }
  SUBCASE("a feasible pair needs one round") {
    const Scenario s = make_uniform_scenario({{0, 0}, {6, 8}}, {2}, 3);
    SimState state = init_state(s, 1, Options{1});
    const auto r = run_to_convergence(state, 1, 10);
    CHECK(r.converged);
    CHECK(r.rounds == 1);
    CHECK(r.clustering.size() == 1);
  }
  SUBCASE("a target already met runs no round") {
    const Scenario s = make_uniform_scenario({{0, 0}, {6, 8}}, {2}, 3);
    SimState state = init_state(s, 1, Options{1});
    const auto r = run_to_convergence(state, 2, 10);
    CHECK(r.converged);
    CHECK(r.rounds == 0);
  }
  SUBCASE("running out of rounds is reported") {
    const Scenario s = make_uniform_scenario({{0, 0}, {5, 0}, {8, 0}}, {0}, 1);
    SimState state = init_state(s, 1, Options{1});
    const auto r = run_to_convergence(state, 1, 1);
    CHECK_FALSE(r.converged);
    CHECK(r.rounds == 1);
    CHECK(r.clustering.size() == 2);
    SimState other = init_state(s, 1, Options{1});
    CHECK_THROWS_AS(run_to_convergence(other, 1, 0), std::invalid_argument);
  }
}

TEST_CASE("protocol invariants on random deployments") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const std::size_t n = 10 + seed % 60;
    const Scenario s = generate_scenario(FieldConfig{100, 100, n, seed % 11, 3, 20, 50, seed});
    SimState state = init_state(s, seed * 13);
    const std::size_t k = energy::optimal_cluster_count(n, 50, s.density);
    std::size_t merges = 0;
    CAPTURE(seed);
    for (std::size_t r = 0; r < n + 1 && state.clustering.size() > k; ++r) {
      const RoundReport report = step_round(state);
      check_round_invariants(state, report);
      merges += report.merges.size();
      if (report.merges.empty()) {
        break;
      }
    }
    CHECK(merges == n - state.clustering.size());
    CHECK(merges <= n - 1);
  }
}

TEST_CASE("apply_pu_event") {
  SUBCASE("a PU with nobody in range changes nothing") {
    Scenario s = make_uniform_scenario({{0, 0}, {4, 0}}, {0, 1}, 2);
    s.pus.push_back(PrimaryUser{s.pus.size(), {s.config.width - 0.5, s.config.height - 0.5}, 0,
                                false});
    s.config.num_pus = s.pus.size();
    SimState state = init_state(s, 1, Options{1});
    run_to_convergence(state, 1, 5);
    const Clustering before = state.clustering;
    const auto affected = apply_pu_event(state, PuEvent{s.pus.size() - 1, true, state.round});
    CHECK(affected.empty());
    CHECK(state.clustering == before);
    REQUIRE_FALSE(state.event_log.empty());
    CHECK(state.event_log.back().kind == EventKind::kPuToggle);
  }
  SUBCASE("losing the only common channel splits the node out") {
    // Nodes 0 and 1 share only channel 0; a PU on channel 0 switches on over 1.
    Scenario s = make_scenario({{0, 0}, {10, 0}, {20, 0}}, {{0, 1}, {0, 2}, {0, 1}}, 3);
    s.pus.push_back(PrimaryUser{s.pus.size(), {10, 0}, 0, false});
    s.config.num_pus = s.pus.size();
    SimState state = init_state(s, 1, Options{1});
    run_to_convergence(state, 1, 10);
    REQUIRE(state.clustering.size() == 1);
    const ClusterId old_id = state.clustering.clusters[0].id;

    const auto affected = apply_pu_event(state, PuEvent{s.pus.size() - 1, true, state.round});
    CHECK(affected == std::vector<NodeId>{1});
    CHECK(groups(state.clustering) == std::vector<std::vector<NodeId>>{{0, 2}, {1}});
    const auto ids = cluster_ids(state);
    CHECK(ids[0] == old_id);
    CHECK(ids[2] == old_id);
    CHECK(ids[1] >= 3);
    CHECK(state.scenario.nodes[1].channels == ChannelSet::of({2}));
    CHECK(state.clustering.clusters[0].common_channels == ChannelSet::of({0, 1}));
    CHECK_FALSE(constraint_error(state.clustering, state.scenario).has_value());

    // Node 1 can no longer join anyone.
    const auto r = run_to_convergence(state, 1, 10);
    CHECK(r.converged);
    CHECK(r.clustering.size() == 2);

    // Switching the PU off gives channel 0 back; node 1 re-senses and rejoins.
    const auto back = apply_pu_event(state, PuEvent{s.pus.size() - 1, false, state.round});
    CHECK(back == std::vector<NodeId>{1});
    const auto again = run_to_convergence(state, 1, 10);
    CHECK(again.clustering.size() == 1);
  }
  SUBCASE("unknown PU") {
    const Scenario s = make_uniform_scenario({{0, 0}}, {0}, 1);
    SimState state = init_state(s, 1);
    CHECK_THROWS_AS(apply_pu_event(state, PuEvent{99, true, 0}), std::out_of_range);
  }
}

TEST_CASE("PU toggles only touch nodes in range") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Scenario s = generate_scenario(FieldConfig{100, 100, 50, 10, 3, 20, 50, seed});
    SimState state = init_state(s, seed);
    run_to_convergence(state, 8, 51);
    const PuId pu = seed % 10;
    const auto before = cluster_ids(state);
    const auto affected = apply_pu_event(state, PuEvent{pu, false, state.round});
    const auto after = cluster_ids(state);
    const auto in_range = nodes_in_protection_range(state.scenario, pu);
    CAPTURE(seed);
    CHECK(std::includes(in_range.begin(), in_range.end(), affected.begin(), affected.end()));
    for (NodeId i = 0; i < 50; ++i) {
      if (!std::binary_search(affected.begin(), affected.end(), i)) {
        CHECK(before[i] == after[i]);
      } else {
        CHECK(before[i] != after[i]);
      }
    }
    CHECK_FALSE(constraint_error(state.clustering, state.scenario).has_value());
    CHECK(run_to_convergence(state, 8, 51).converged);
  }
}

TEST_CASE("select_cluster_head") {
  Rng rng(1);
  CHECK(select_cluster_head(Cluster{0, {4}, {}, 4}, rng) == 4);

  const Cluster c{0, {2, 5, 7, 9}, {}, 2};
  Rng a(55);
  Rng b(55);
  CHECK(select_cluster_head(c, a) == select_cluster_head(c, b));

  std::map<NodeId, int> counts;
  Rng draws(2024);
  const int total = 100000;
  for (int i = 0; i < total; ++i) {
    ++counts[select_cluster_head(c, draws)];
  }
  for (NodeId m : c.members) {
    CHECK(static_cast<double>(counts[m]) / total == doctest::Approx(0.25).epsilon(0.04));
  }
  CHECK_THROWS_AS(select_cluster_head(Cluster{}, rng), std::invalid_argument);
}

TEST_CASE("event log CSV") {
  std::vector<Event> events{
      Event{1, EventKind::kMerge, {0, 3, 0}, {0, 3}, {}},
      Event{2, EventKind::kPuToggle, {}, {4, 6}, 2},
      Event{2, EventKind::kSplit, {0, 11}, {4}, {}},
      Event{3, EventKind::kHeadRotation, {0}, {3}, {}},
  };
  std::ostringstream out;
  write_event_log_csv(out, events);
  CHECK(out.str() ==
        "round,event,cluster_ids,node_ids,pu\n"
        "1,merge,0;3;0,0;3,\n"
        "2,pu_toggle,,4;6,2\n"
        "2,split,0;11,4,\n"
        "3,head_rotation,0,3,\n");
}
