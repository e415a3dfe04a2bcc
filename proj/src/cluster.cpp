#include "crsn/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace crsn {

ChannelSet groupwise_common_channels(std::span<const NodeId> members, const Scenario& scenario) {
  if (members.empty()) {
    return {};
  }
  ChannelSet common = scenario.nodes.at(members.front()).channels;
  for (NodeId id : members.subspan(1)) {
    common = common & scenario.nodes.at(id).channels;
  }
  return common;
}

Point centroid(std::span<const NodeId> members, std::span<const Point> positions) {
  if (members.empty()) {
    throw std::invalid_argument("centroid of an empty cluster");
  }
  double sx = 0.0;
  double sy = 0.0;
  for (NodeId id : members) {
    sx += positions[id].x;
    sy += positions[id].y;
  }
  const auto n = static_cast<double>(members.size());
  return {sx / n, sy / n};
}

double diameter(std::span<const NodeId> members, std::span<const Point> positions) {
  double best = 0.0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      best = std::max(best, squared_distance(positions[members[i]], positions[members[j]]));
    }
  }
  return std::sqrt(best);
}

Cluster make_cluster(ClusterId id, std::vector<NodeId> members, const Scenario& scenario) {
  if (members.empty()) {
    throw std::invalid_argument("cluster must have at least one member");
  }
  std::sort(members.begin(), members.end());
  Cluster cluster;
  cluster.id = id;
  cluster.common_channels = groupwise_common_channels(members, scenario);

  double sx = 0.0;
  double sy = 0.0;
  for (NodeId m : members) {
    sx += scenario.nodes.at(m).position.x;
    sy += scenario.nodes.at(m).position.y;
  }
  const auto n = static_cast<double>(members.size());
  const Point center{sx / n, sy / n};
  double best = std::numeric_limits<double>::infinity();
  for (NodeId m : members) {
    const double d = squared_distance(scenario.nodes[m].position, center);
    if (d < best) {
      best = d;
      cluster.head = m;
    }
  }
  cluster.members = std::move(members);
  return cluster;
}

Clustering singleton_clustering(const Scenario& scenario) {
  Clustering out;
  out.clusters.reserve(scenario.nodes.size());
  for (const Node& node : scenario.nodes) {
    out.clusters.push_back(Cluster{node.id, {node.id}, node.channels, node.id});
  }
  return out;
}

std::vector<std::size_t> cluster_index_of(const Clustering& clustering, std::size_t num_nodes) {
  std::vector<std::size_t> index(num_nodes, std::numeric_limits<std::size_t>::max());
  for (std::size_t c = 0; c < clustering.clusters.size(); ++c) {
    for (NodeId id : clustering.clusters[c].members) {
      index.at(id) = c;
    }
  }
  return index;
}

std::optional<std::string> partition_error(const Clustering& clustering, std::size_t num_nodes) {
  std::vector<bool> seen(num_nodes, false);
  std::size_t covered = 0;
  for (const Cluster& cluster : clustering.clusters) {
    const std::string tag = "cluster " + std::to_string(cluster.id);
    if (cluster.members.empty()) {
      return tag + " is empty";
    }
    bool head_found = false;
    for (NodeId id : cluster.members) {
      if (id >= num_nodes) {
        return tag + " has unknown node " + std::to_string(id);
      }
      if (seen[id]) {
        return "node " + std::to_string(id) + " appears in more than one cluster";
      }
      seen[id] = true;
      ++covered;
      head_found = head_found || id == cluster.head;
    }
    if (!head_found) {
      return tag + " head is not a member";
    }
  }
  if (covered != num_nodes) {
    return "clusters cover " + std::to_string(covered) + " of " + std::to_string(num_nodes) +
           " nodes";
  }
  return std::nullopt;
}

std::optional<std::string> constraint_error(const Clustering& clustering,
                                            const Scenario& scenario) {
  if (auto err = partition_error(clustering, scenario.nodes.size())) {
    return err;
  }
  const std::vector<Point> positions = scenario.positions();
  // Absolute slack for the diameter cap; distances are recomputed from the
  // same coordinates so only rounding of sqrt can differ.
  const double cap = scenario.config.d_max * (1.0 + 1e-12);
  for (const Cluster& cluster : clustering.clusters) {
    const std::string tag = "cluster " + std::to_string(cluster.id);
    const ChannelSet common = groupwise_common_channels(cluster.members, scenario);
    if (common != cluster.common_channels) {
      return tag + " stores stale common channels";
    }
    if (cluster.members.size() >= 2) {
      if (common.empty()) {
        return tag + " violates the groupwise channel constraint";
      }
      if (diameter(cluster.members, positions) > cap) {
        return tag + " exceeds the d_max diameter cap";
      }
    }
  }
  return std::nullopt;
}

}  // namespace crsn
