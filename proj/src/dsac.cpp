#include "crsn/dsac.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

#include "crsn/energy.hpp"

namespace crsn::dsac {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Per-round delivery fabric. Messages land in the inbox of every node that
// can physically receive them.
class Radio {
 public:
  explicit Radio(const Scenario& scenario)
      : scenario_(scenario), inbox_(scenario.nodes.size()) {}

  void broadcast(const Message& message) {
    for (NodeId r = 0; r < inbox_.size(); ++r) {
      if (r != message.sender && can_hear(scenario_, message.sender, r)) {
        inbox_[r].push_back(message);
        ++delivered_;
      }
    }
  }

  // Directed transmission; a node can always hand a message to itself.
  void unicast(const Message& message, NodeId receiver) {
    if (receiver == message.sender || can_hear(scenario_, message.sender, receiver)) {
      inbox_[receiver].push_back(message);
      ++delivered_;
    }
  }

  const std::vector<Message>& inbox(NodeId node) const { return inbox_[node]; }

  void clear() {
    for (auto& box : inbox_) {
      box.clear();
    }
  }

  std::size_t delivered() const { return delivered_; }

 private:
  const Scenario& scenario_;
  std::vector<std::vector<Message>> inbox_;
  std::size_t delivered_ = 0;
};

void sort_clusters(Clustering& clustering) {
  std::sort(clustering.clusters.begin(), clustering.clusters.end(),
            [](const Cluster& a, const Cluster& b) { return a.id < b.id; });
}

// Channel sensing. Nodes whose available set changed declare themselves new
// singleton clusters; the clusters they leave keep their id, recompute the
// common channel set, and replace a departed head.
std::vector<NodeId> resense(SimState& state, std::size_t round) {
  Scenario& scenario = state.scenario;
  const std::size_t n = scenario.nodes.size();
  std::vector<NodeId> changed;
  std::vector<bool> is_changed(n, false);
  for (Node& node : scenario.nodes) {
    const ChannelSet now =
        available_channels(node.position, scenario.pus, scenario.config.protection_range,
                           scenario.config.num_channels);
    if (now != node.channels) {
      node.channels = now;
      changed.push_back(node.id);
      is_changed[node.id] = true;
    }
  }
  if (changed.empty()) {
    return changed;
  }

  std::vector<ClusterId> old_id(n);
  Clustering next;
  for (Cluster& cluster : state.clustering.clusters) {
    std::vector<NodeId> staying;
    for (NodeId m : cluster.members) {
      old_id[m] = cluster.id;
      if (!is_changed[m]) {
        staying.push_back(m);
      }
    }
    if (staying.empty()) {
      continue;
    }
    // Staying members kept their channel sets, so the intersection over them
    // contains the old common set and stays non-empty.
    cluster.members = std::move(staying);
    cluster.common_channels = groupwise_common_channels(cluster.members, scenario);
    if (is_changed[cluster.head]) {
      cluster.head = select_cluster_head(cluster, state.rng);
    }
    next.clusters.push_back(std::move(cluster));
  }
  for (NodeId id : changed) {
    const ClusterId fresh = state.next_cluster_id++;
    next.clusters.push_back(Cluster{fresh, {id}, scenario.nodes[id].channels, id});
    state.event_log.push_back(Event{round, EventKind::kSplit, {old_id[id], fresh}, {id}, {}});
  }
  sort_clusters(next);
  state.clustering = std::move(next);
  return changed;
}

struct NeighborView {
  NodeId head = 0;
  std::size_t size = 0;
  ChannelSet common;
  // Neighbor member -> number of own members that measured it.
  std::map<NodeId, std::size_t> reports;
  double max_distance = 0.0;
};

}  // namespace

std::string to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kMerge:
      return "merge";
    case EventKind::kSplit:
      return "split";
    case EventKind::kPuToggle:
      return "pu_toggle";
    case EventKind::kHeadRotation:
      return "head_rotation";
  }
  return "unknown";
}

bool can_hear(const Scenario& scenario, NodeId sender, NodeId receiver) {
  const Node& s = scenario.nodes[sender];
  const Node& r = scenario.nodes[receiver];
  const double range = scenario.config.d_max;
  return sender != receiver && s.channels.intersects(r.channels) &&
         squared_distance(s.position, r.position) <= range * range;
}

SimState init_state(const Scenario& scenario, std::uint64_t seed, const Options& options) {
  validate(scenario);
  const std::size_t n = scenario.nodes.size();
  const std::size_t k =
      options.target_clusters.value_or(energy::optimal_cluster_count(
          n, scenario.config.d_max, scenario.density));
  if (k == 0) {
    throw std::invalid_argument("dsac: target cluster count must be at least 1");
  }

  SimState state;
  state.scenario = scenario;
  state.clustering = singleton_clustering(scenario);
  state.rng = Rng(seed);
  state.size_cap = (n + k - 1) / k;
  state.next_cluster_id = n;
  return state;
}

NodeId select_cluster_head(const Cluster& cluster, Rng& rng) {
  if (cluster.members.empty()) {
    throw std::invalid_argument("cannot select a head for an empty cluster");
  }
  return cluster.members[rng.index(cluster.members.size())];
}

std::vector<ClusterId> cluster_ids(const SimState& state) {
  std::vector<ClusterId> ids(state.scenario.nodes.size());
  for (const Cluster& cluster : state.clustering.clusters) {
    for (NodeId m : cluster.members) {
      ids[m] = cluster.id;
    }
  }
  return ids;
}

RoundReport step_round(SimState& state) {
  const std::size_t round = state.round + 1;
  RoundReport report;
  report.round = round;

  // Channel sensing.
  report.resensed = resense(state, round);

  const Scenario& scenario = state.scenario;
  const std::vector<ClusterId> cluster_of = cluster_ids(state);
  std::map<ClusterId, const Cluster*> by_id;
  for (const Cluster& cluster : state.clustering.clusters) {
    by_id.emplace(cluster.id, &cluster);
  }
  Radio radio(scenario);

  // 1. Node beacons.
  for (const Node& node : scenario.nodes) {
    radio.broadcast(Message{node.id, NodeBeacon{node.id, cluster_of[node.id], node.channels}});
  }
  std::vector<std::vector<MeasuredDistance>> measured(scenario.nodes.size());
  for (const Node& node : scenario.nodes) {
    for (const Message& message : radio.inbox(node.id)) {
      const auto& beacon = std::get<NodeBeacon>(message.payload);
      if (beacon.cluster != cluster_of[node.id]) {
        measured[node.id].push_back(MeasuredDistance{
            node.id, beacon.node, beacon.cluster,
            distance(node.position, scenario.nodes[beacon.node].position)});
      }
    }
  }
  radio.clear();

  // 2. Cluster beacons from each head.
  for (const Cluster& cluster : state.clustering.clusters) {
    radio.broadcast(Message{cluster.head, ClusterBeacon{cluster.id, cluster.members.size(),
                                                        cluster.common_channels}});
  }
  std::map<ClusterId, std::map<ClusterId, NeighborView>> views;
  for (const Cluster& cluster : state.clustering.clusters) {
    auto& view = views[cluster.id];
    for (const Message& message : radio.inbox(cluster.head)) {
      if (const auto* beacon = std::get_if<ClusterBeacon>(&message.payload)) {
        NeighborView& neighbor = view[beacon->cluster];
        neighbor.head = message.sender;
        neighbor.size = beacon->size;
        neighbor.common = beacon->common_channels;
      }
    }
  }
  radio.clear();

  // 3. Intra-cluster coordination: members announce measured distances to
  // their head, which derives complete-link distances to neighbor clusters.
  for (const Cluster& cluster : state.clustering.clusters) {
    for (NodeId m : cluster.members) {
      radio.unicast(Message{m, DistanceAnnouncement{measured[m]}}, cluster.head);
    }
  }
  std::map<ClusterId, ClusterId> invited;
  for (const Cluster& cluster : state.clustering.clusters) {
    auto& view = views[cluster.id];
    for (const Message& message : radio.inbox(cluster.head)) {
      const auto* announcement = std::get_if<DistanceAnnouncement>(&message.payload);
      if (announcement == nullptr) {
        continue;
      }
      for (const MeasuredDistance& d : announcement->distances) {
        auto it = view.find(d.neighbor_cluster);
        if (it == view.end()) {
          continue;
        }
        ++it->second.reports[d.neighbor];
        it->second.max_distance = std::max(it->second.max_distance, d.distance);
      }
    }

    if (cluster.members.size() >= state.size_cap) {
      continue;
    }
    double best = kInf;
    ClusterId best_id = 0;
    for (const auto& [id, neighbor] : view) {
      if (id == cluster.id || neighbor.size >= state.size_cap) {
        continue;
      }
      // Members of the neighbor heard by every one of our members.
      std::size_t heard = 0;
      for (const auto& [node, count] : neighbor.reports) {
        if (count == cluster.members.size()) {
          ++heard;
        }
      }
      double d = neighbor.max_distance;
      if (heard < neighbor.size || !cluster.common_channels.intersects(neighbor.common)) {
        d = kInf;
      }
      if (d < best) {
        best = d;
        best_id = id;
      }
    }
    if (best < kInf) {
      invited.emplace(cluster.id, best_id);
    }
  }
  radio.clear();

  // 4. Inter-cluster coordination: invitations travel head to head.
  for (const auto& [source, target] : invited) {
    const MergeInvitation invitation{source, target};
    report.invitations.push_back(invitation);
    radio.unicast(Message{by_id.at(source)->head, invitation},
                  views.at(source).at(target).head);
  }
  Clustering next;
  std::vector<bool> absorbed(state.next_cluster_id, false);
  for (const Cluster& cluster : state.clustering.clusters) {
    if (absorbed[cluster.id]) {
      continue;
    }
    const auto own = invited.find(cluster.id);
    bool mutual = false;
    if (own != invited.end()) {
      for (const Message& message : radio.inbox(cluster.head)) {
        const auto* inv = std::get_if<MergeInvitation>(&message.payload);
        if (inv != nullptr && inv->target == cluster.id && inv->source == own->second) {
          mutual = true;
        }
      }
    }
    if (!mutual) {
      next.clusters.push_back(cluster);
      continue;
    }
    // Clusters are visited in id order, so the partner has the larger id.
    const Cluster& partner = *by_id.at(own->second);
    Cluster merged;
    merged.id = cluster.id;
    std::merge(cluster.members.begin(), cluster.members.end(), partner.members.begin(),
               partner.members.end(), std::back_inserter(merged.members));
    merged.common_channels = cluster.common_channels & partner.common_channels;
    merged.head = cluster.head;
    absorbed[partner.id] = true;
    Event event{round, EventKind::kMerge, {cluster.id, partner.id, merged.id}, merged.members, {}};
    state.event_log.push_back(event);
    report.merges.push_back(std::move(event));
    next.clusters.push_back(std::move(merged));
  }

  // 5. Every cluster rotates its head.
  for (Cluster& cluster : next.clusters) {
    cluster.head = select_cluster_head(cluster, state.rng);
    state.event_log.push_back(
        Event{round, EventKind::kHeadRotation, {cluster.id}, {cluster.head}, {}});
  }

  report.messages_delivered = radio.delivered();
  state.clustering = std::move(next);
  state.round = round;
  return report;
}

ConvergenceResult run_to_convergence(SimState& state, std::size_t k_target,
                                     std::size_t max_rounds) {
  if (max_rounds == 0) {
    throw std::invalid_argument("run_to_convergence: max_rounds must be at least 1");
  }
  ConvergenceResult result;
  while (true) {
    if (state.clustering.size() <= k_target) {
      result.converged = true;
      break;
    }
    if (result.rounds >= max_rounds) {
      break;
    }
    const RoundReport report = step_round(state);
    ++result.rounds;
    result.merges += report.merges.size();
    if (report.merges.empty()) {
      result.converged = true;
      break;
    }
  }
  result.clustering = state.clustering;
  return result;
}

std::vector<NodeId> apply_pu_event(SimState& state, const PuEvent& event) {
  if (event.pu >= state.scenario.pus.size()) {
    throw std::out_of_range("PU event references unknown PU " + std::to_string(event.pu));
  }
  state.scenario.pus[event.pu].active = event.new_active;
  const std::size_t log_mark = state.event_log.size();
  std::vector<NodeId> affected = resense(state, event.round);
  state.event_log.insert(state.event_log.begin() + static_cast<std::ptrdiff_t>(log_mark),
                         Event{event.round, EventKind::kPuToggle, {}, affected, event.pu});
  return affected;
}

namespace {

template <typename Ids>
void write_ids(std::ostream& out, const Ids& ids) {
  bool first = true;
  for (const auto id : ids) {
    if (!first) {
      out << ';';
    }
    out << id;
    first = false;
  }
}

}  // namespace

void write_event_log_csv(std::ostream& out, const std::vector<Event>& events) {
  out << "round,event,cluster_ids,node_ids,pu\n";
  for (const Event& event : events) {
    out << event.round << ',' << to_string(event.kind) << ',';
    write_ids(out, event.clusters);
    out << ',';
    write_ids(out, event.nodes);
    out << ',';
    if (event.pu) {
      out << *event.pu;
    }
    out << '\n';
  }
}

}  // namespace crsn::dsac
