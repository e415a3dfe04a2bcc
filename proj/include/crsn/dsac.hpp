#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "crsn/cluster.hpp"
#include "crsn/rng.hpp"
#include "crsn/scenario.hpp"

// Distributed spectrum-aware clustering simulated in synchronous rounds.
// Each round runs: channel sensing and node beacons, cluster beacons,
// intra-cluster distance announcements, mutual merge invitations, and head
// rotation. Nodes act only on messages they could physically receive: a
// message reaches a node iff it lies within d_max of the sender and shares at
// least one available channel with it.
namespace crsn::dsac {

struct NodeBeacon {
  NodeId node = 0;
  ClusterId cluster = 0;
  ChannelSet channels;
};

struct ClusterBeacon {
  ClusterId cluster = 0;
  std::size_t size = 0;
  ChannelSet common_channels;
};

struct MeasuredDistance {
  NodeId member = 0;
  NodeId neighbor = 0;
  ClusterId neighbor_cluster = 0;
  double distance = 0.0;
};

struct DistanceAnnouncement {
  std::vector<MeasuredDistance> distances;
};

struct MergeInvitation {
  ClusterId source = 0;
  ClusterId target = 0;
};

enum class MessageKind { kNodeBeacon, kClusterBeacon, kDistanceAnnouncement, kMergeInvitation };

struct Message {
  NodeId sender = 0;
  std::variant<NodeBeacon, ClusterBeacon, DistanceAnnouncement, MergeInvitation> payload;

  MessageKind kind() const { return static_cast<MessageKind>(payload.index()); }
};

enum class EventKind { kMerge, kSplit, kPuToggle, kHeadRotation };

std::string to_string(EventKind kind);

struct Event {
  std::size_t round = 0;
  EventKind kind = EventKind::kMerge;
  /// merge: {source a, source b, result}; split: {old, new};
  /// head_rotation: {cluster}; pu_toggle: empty.
  std::vector<ClusterId> clusters;
  /// merge: members of the result; split: the node; head_rotation: the new
  /// head; pu_toggle: the affected nodes.
  std::vector<NodeId> nodes;
  /// Set for pu_toggle only.
  std::optional<PuId> pu;

  friend bool operator==(const Event&, const Event&) = default;
};

struct SimState {
  /// PU activity evolves with events; node channels hold the last sensed
  /// sets.
  Scenario scenario;
  /// Sorted by cluster id.
  Clustering clustering;
  std::size_t round = 0;
  Rng rng;
  std::vector<Event> event_log;
  /// Clusters at or above this size neither send nor accept invitations.
  std::size_t size_cap = 1;
  ClusterId next_cluster_id = 0;
};

struct Options {
  /// Cluster count used to derive the size cap ceil(N / K). Defaults to the
  /// optimal cluster count for the scenario.
  std::optional<std::size_t> target_clusters;
};

/// Every node a singleton cluster with itself as head, round 0.
SimState init_state(const Scenario& scenario, std::uint64_t seed, const Options& options = {});

/// True iff a transmission from `sender` reaches `receiver` (distinct nodes).
bool can_hear(const Scenario& scenario, NodeId sender, NodeId receiver);

struct RoundReport {
  std::size_t round = 0;
  std::vector<MergeInvitation> invitations;
  std::vector<Event> merges;
  /// Nodes split out by channel changes detected while sensing.
  std::vector<NodeId> resensed;
  std::size_t messages_delivered = 0;
};

/// Executes one full protocol round and advances state.round.
RoundReport step_round(SimState& state);

struct ConvergenceResult {
  Clustering clustering;
  std::size_t rounds = 0;
  std::size_t merges = 0;
  /// False when max_rounds ran out while merges were still happening.
  bool converged = false;
};

/// Runs rounds until one produces no merge or at most k_target clusters
/// remain. Checks the cluster count before each round.
ConvergenceResult run_to_convergence(SimState& state, std::size_t k_target,
                                     std::size_t max_rounds);

struct PuEvent {
  PuId pu = 0;
  bool new_active = false;
  std::size_t round = 0;
};

/// Applies a PU state change: nodes re-sense, and every node whose channel set
/// changed leaves its cluster as a fresh singleton. The clusters they left
/// recompute their common channels and, if the head left, pick a new head.
/// Returns the affected node ids in ascending order.
std::vector<NodeId> apply_pu_event(SimState& state, const PuEvent& event);

/// Uniform over members.
NodeId select_cluster_head(const Cluster& cluster, Rng& rng);

/// Node id -> current cluster id.
std::vector<ClusterId> cluster_ids(const SimState& state);

/// CSV with header `round,event,cluster_ids,node_ids,pu`; id lists are
/// ';'-separated.
void write_event_log_csv(std::ostream& out, const std::vector<Event>& events);

}  // namespace crsn::dsac
