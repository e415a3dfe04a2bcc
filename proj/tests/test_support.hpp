#pragma once

#include <algorithm>
#include <vector>

#include "crsn/scenario.hpp"

namespace crsn::testing {

// Builds a PU-consistent scenario with hand-picked node positions and channel
// sets. Each missing channel is claimed by a PU sitting on the node with a
// protection range smaller than any node spacing, so it affects that node only.
// Nodes must be at least 1 m apart.
inline Scenario make_scenario(const std::vector<Point>& points,
                              const std::vector<std::vector<Channel>>& channels,
                              int num_channels, double d_max = 50.0) {
  Scenario s;
  double w = 1.0;
  double h = 1.0;
  for (const Point& p : points) {
    w = std::max(w, p.x + 1.0);
    h = std::max(h, p.y + 1.0);
  }
  s.config = FieldConfig{w, h, points.size(), 0, num_channels, 0.25, d_max, 7};
  for (std::size_t i = 0; i < points.size(); ++i) {
    const ChannelSet want = ChannelSet::of(channels.at(i));
    for (Channel c = 0; c < num_channels; ++c) {
      if (!want.contains(c)) {
        s.pus.push_back(PrimaryUser{s.pus.size(), points[i], c, true});
      }
    }
  }
  s.config.num_pus = s.pus.size();
  for (std::size_t i = 0; i < points.size(); ++i) {
    s.nodes.push_back(Node{i, points[i], {}});
  }
  s.density = static_cast<double>(points.size()) / (w * h);
  refresh_channels(s);
  return s;
}

// Every node gets the same channel set.
inline Scenario make_uniform_scenario(const std::vector<Point>& points, std::vector<Channel> channels,
                              int num_channels, double d_max = 50.0) {
  return make_scenario(points, std::vector<std::vector<Channel>>(points.size(), channels),
                       num_channels, d_max);
}

}  // namespace crsn::testing
