#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "crsn/channel_set.hpp"
#include "crsn/geometry.hpp"

namespace crsn {

using NodeId = std::size_t;
using PuId = std::size_t;

/// Deployment parameters for one random field. Lengths are in meters.
struct FieldConfig {
  double width = 100.0;
  double height = 100.0;
  std::size_t num_nodes = 50;
  std::size_t num_pus = 10;
  int num_channels = 3;
  double protection_range = 20.0;
  /// Maximal transmission range of a sensor node.
  double d_max = 50.0;
  std::uint64_t seed = 1;

  friend bool operator==(const FieldConfig&, const FieldConfig&) = default;
};

/// Throws std::invalid_argument naming the first violated constraint.
void validate(const FieldConfig& config);

struct Node {
  NodeId id = 0;
  Point position;
  ChannelSet channels;

  friend bool operator==(const Node&, const Node&) = default;
};

struct PrimaryUser {
  PuId id = 0;
  Point position;
  Channel channel = 0;
  bool active = true;

  friend bool operator==(const PrimaryUser&, const PrimaryUser&) = default;
};

struct Scenario {
  FieldConfig config;
  std::vector<Node> nodes;
  std::vector<PrimaryUser> pus;
  /// Nodes per square meter.
  double density = 0.0;

  std::vector<Point> positions() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Channels left to a sensor at `position` once every active PU within
/// `protection_range` (inclusive) has claimed its channel.
ChannelSet available_channels(const Point& position, std::span<const PrimaryUser> pus,
                              double protection_range, int num_channels);

/// Uniform i.i.d. node positions, then uniform PU positions and channels.
/// All PUs start active. Node draws precede PU draws, so for a fixed seed the
/// node layout does not depend on num_pus and the PU list for m PUs is a prefix
/// of the list for m+1.
Scenario generate_scenario(const FieldConfig& config);

/// Checks config validity, node ids and bounds, PU channels, and that every
/// node's channel set matches available_channels. Throws std::invalid_argument.
void validate(const Scenario& scenario);

/// Recomputes every node's channel set from the current PU states.
void refresh_channels(Scenario& scenario);

/// Ids of nodes whose distance to the PU is within its protection range.
std::vector<NodeId> nodes_in_protection_range(const Scenario& scenario, PuId pu);

}  // namespace crsn
