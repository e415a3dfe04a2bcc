#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crsn/channel_set.hpp"
#include "crsn/geometry.hpp"
#include "crsn/scenario.hpp"

namespace crsn {

using ClusterId = std::size_t;

struct Cluster {
  ClusterId id = 0;
  /// Sorted ascending.
  std::vector<NodeId> members;
  /// Intersection of the members' channel sets.
  ChannelSet common_channels;
  NodeId head = 0;

  friend bool operator==(const Cluster&, const Cluster&) = default;
};

struct Clustering {
  std::vector<Cluster> clusters;

  std::size_t size() const { return clusters.size(); }

  friend bool operator==(const Clustering&, const Clustering&) = default;
};

/// Intersection of the channel sets of `members`. Empty input yields the
/// empty set.
ChannelSet groupwise_common_channels(std::span<const NodeId> members, const Scenario& scenario);

Point centroid(std::span<const NodeId> members, std::span<const Point> positions);

/// Largest pairwise member distance; 0 for singletons.
double diameter(std::span<const NodeId> members, std::span<const Point> positions);

/// Builds a cluster with sorted members, their common channels, and the member
/// nearest the centroid as head (lowest id on ties).
Cluster make_cluster(ClusterId id, std::vector<NodeId> members, const Scenario& scenario);

/// Clustering with every node alone in a cluster whose id is the node id.
Clustering singleton_clustering(const Scenario& scenario);

/// Node id -> index into clustering.clusters.
std::vector<std::size_t> cluster_index_of(const Clustering& clustering, std::size_t num_nodes);

/// Returns a description of the first problem found, or nullopt when the
/// clusters are non-empty, disjoint, cover 0..num_nodes-1, and each head is a
/// member.
std::optional<std::string> partition_error(const Clustering& clustering, std::size_t num_nodes);

/// Partition check plus, for every cluster, stored common channels equal to the
/// members' intersection; for every multi-node cluster, a non-empty
/// intersection and diameter <= d_max.
std::optional<std::string> constraint_error(const Clustering& clustering,
                                            const Scenario& scenario);

}  // namespace crsn
