#include "crsn/scenario.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "crsn/rng.hpp"

namespace crsn {

void validate(const FieldConfig& config) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(config.width) || !positive(config.height)) {
    throw std::invalid_argument("field width and height must be positive");
  }
  if (!positive(config.protection_range)) {
    throw std::invalid_argument("protection_range must be positive");
  }
  if (!positive(config.d_max)) {
    throw std::invalid_argument("d_max must be positive");
  }
  if (config.num_channels < 1 || config.num_channels > ChannelSet::kMaxChannels) {
    throw std::invalid_argument("num_channels must be in [1, " +
                                std::to_string(ChannelSet::kMaxChannels) + "]");
  }
  if (config.num_nodes < 1) {
    throw std::invalid_argument("num_nodes must be at least 1");
  }
}

std::vector<Point> Scenario::positions() const {
  std::vector<Point> out;
  out.reserve(nodes.size());
  for (const Node& node : nodes) {
    out.push_back(node.position);
  }
  return out;
}

ChannelSet available_channels(const Point& position, std::span<const PrimaryUser> pus,
                              double protection_range, int num_channels) {
  ChannelSet channels = ChannelSet::full(num_channels);
  const double range_sq = protection_range * protection_range;
  for (const PrimaryUser& pu : pus) {
    if (pu.active && squared_distance(position, pu.position) <= range_sq) {
      channels.erase(pu.channel);
    }
  }
  return channels;
}

Scenario generate_scenario(const FieldConfig& config) {
  validate(config);
  Rng rng(config.seed);

  Scenario scenario;
  scenario.config = config;
  scenario.density =
      static_cast<double>(config.num_nodes) / (config.width * config.height);

  scenario.nodes.reserve(config.num_nodes);
  for (NodeId id = 0; id < config.num_nodes; ++id) {
    const double x = rng.uniform(0.0, config.width);
    const double y = rng.uniform(0.0, config.height);
    scenario.nodes.push_back(Node{id, {x, y}, {}});
  }

  scenario.pus.reserve(config.num_pus);
  for (PuId id = 0; id < config.num_pus; ++id) {
    const double x = rng.uniform(0.0, config.width);
    const double y = rng.uniform(0.0, config.height);
    const auto channel =
        static_cast<Channel>(rng.index(static_cast<std::size_t>(config.num_channels)));
    scenario.pus.push_back(PrimaryUser{id, {x, y}, channel, true});
  }

  refresh_channels(scenario);
  return scenario;
}

void refresh_channels(Scenario& scenario) {
  for (Node& node : scenario.nodes) {
    node.channels = available_channels(node.position, scenario.pus,
                                       scenario.config.protection_range,
                                       scenario.config.num_channels);
  }
}

void validate(const Scenario& scenario) {
  const FieldConfig& config = scenario.config;
  validate(config);
  if (scenario.nodes.size() != config.num_nodes) {
    throw std::invalid_argument("node count does not match config.num_nodes");
  }
  if (scenario.pus.size() != config.num_pus) {
    throw std::invalid_argument("PU count does not match config.num_pus");
  }
  if (!(scenario.density > 0.0)) {
    throw std::invalid_argument("density must be positive");
  }
  for (std::size_t i = 0; i < scenario.pus.size(); ++i) {
    const PrimaryUser& pu = scenario.pus[i];
    if (pu.id != i) {
      throw std::invalid_argument("PU ids must be 0..num_pus-1 in order");
    }
    if (pu.channel < 0 || pu.channel >= config.num_channels) {
      throw std::invalid_argument("PU " + std::to_string(i) + " channel out of range");
    }
  }
  const ChannelSet all = ChannelSet::full(config.num_channels);
  for (std::size_t i = 0; i < scenario.nodes.size(); ++i) {
    const Node& node = scenario.nodes[i];
    if (node.id != i) {
      throw std::invalid_argument("node ids must be 0..num_nodes-1 in order");
    }
    const Point& p = node.position;
    if (!(p.x >= 0.0 && p.x <= config.width && p.y >= 0.0 && p.y <= config.height)) {
      throw std::invalid_argument("node " + std::to_string(i) + " lies outside the field");
    }
    if (!node.channels.is_subset_of(all)) {
      throw std::invalid_argument("node " + std::to_string(i) + " has an unknown channel");
    }
    if (node.channels != available_channels(p, scenario.pus, config.protection_range,
                                            config.num_channels)) {
      throw std::invalid_argument("node " + std::to_string(i) +
                                  " channels disagree with PU geometry");
    }
  }
}

std::vector<NodeId> nodes_in_protection_range(const Scenario& scenario, PuId pu) {
  if (pu >= scenario.pus.size()) {
    throw std::out_of_range("unknown PU id " + std::to_string(pu));
  }
  const Point& center = scenario.pus[pu].position;
  const double range_sq = scenario.config.protection_range * scenario.config.protection_range;
  std::vector<NodeId> out;
  for (const Node& node : scenario.nodes) {
    if (squared_distance(node.position, center) <= range_sq) {
      out.push_back(node.id);
    }
  }
  return out;
}

}  // namespace crsn
