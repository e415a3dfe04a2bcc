#include "crsn/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "crsn/energy.hpp"
#include "crsn/rng.hpp"

namespace crsn::clustering {

namespace {

constexpr std::uint64_t kKMeansStream = 0x6b6d65616e73ULL;

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::optional<double> complete_link_distance(const Cluster& a, const Cluster& b,
                                             const Scenario& scenario) {
  if (!a.common_channels.intersects(b.common_channels)) {
    return std::nullopt;
  }
  double worst = 0.0;
  for (NodeId i : a.members) {
    for (NodeId j : b.members) {
      worst = std::max(worst, squared_distance(scenario.nodes.at(i).position,
                                               scenario.nodes.at(j).position));
    }
  }
  const double d = std::sqrt(worst);
  if (d > scenario.config.d_max) {
    return std::nullopt;
  }
  return d;
}

GcacResult gcac(const Scenario& scenario, std::size_t k_target) {
  if (k_target == 0) {
    throw std::invalid_argument("gcac: k_target must be at least 1");
  }
  const std::size_t n = scenario.nodes.size();
  const double cap_sq = scenario.config.d_max * scenario.config.d_max;

  // Slot i holds the cluster whose id is i; merges fold the higher slot into
  // the lower one, so a slot's id is always its smallest member.
  std::vector<std::vector<NodeId>> members(n);
  std::vector<ChannelSet> common(n);
  std::vector<bool> active(n, true);
  // Complete-link squared distances; the Lance-Williams update for complete
  // linkage is the element-wise max.
  std::vector<double> link(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    members[i] = {i};
    common[i] = scenario.nodes[i].channels;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = squared_distance(scenario.nodes[i].position, scenario.nodes[j].position);
      link[i * n + j] = d;
      link[j * n + i] = d;
    }
  }

  GcacResult result;
  std::size_t count = n;
  while (count > k_target) {
    double best = kInf;
    std::size_t best_i = 0;
    std::size_t best_j = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) {
        continue;
      }
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!active[j]) {
          continue;
        }
        const double d = link[i * n + j];
        if (d < best && d <= cap_sq && common[i].intersects(common[j])) {
          best = d;
          best_i = i;
          best_j = j;
        }
      }
    }
    if (best == kInf) {
      break;
    }

    members[best_i].insert(members[best_i].end(), members[best_j].begin(), members[best_j].end());
    members[best_j].clear();
    common[best_i] = common[best_i] & common[best_j];
    active[best_j] = false;
    for (std::size_t k = 0; k < n; ++k) {
      if (active[k] && k != best_i) {
        const double d = std::max(link[best_i * n + k], link[best_j * n + k]);
        link[best_i * n + k] = d;
        link[k * n + best_i] = d;
      }
    }
    --count;
    result.history.push_back(MergeStep{result.merges, best_i, best_j, std::sqrt(best)});
    ++result.merges;
  }

  result.target_reached = count <= k_target;
  for (std::size_t i = 0; i < n; ++i) {
    if (active[i]) {
      result.clustering.clusters.push_back(make_cluster(i, std::move(members[i]), scenario));
    }
  }
  return result;
}

KMeansResult kmeans(const Scenario& scenario, std::size_t k, std::size_t max_iters) {
  const std::size_t n = scenario.nodes.size();
  if (k == 0 || k > n) {
    throw std::invalid_argument("kmeans: k must be in [1, num_nodes], got " + std::to_string(k));
  }
  const std::vector<Point> points = scenario.positions();

  // k distinct seeds by partial Fisher-Yates.
  Rng rng(derive_seed(scenario.config.seed, kKMeansStream));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(order[i], order[i + rng.index(n - i)]);
  }
  std::vector<Point> centers(k);
  for (std::size_t c = 0; c < k; ++c) {
    centers[c] = points[order[c]];
  }

  constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> assign(n, kUnassigned);
  std::vector<std::size_t> counts(k);

  auto recompute_centers = [&] {
    std::vector<Point> sums(k);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      sums[assign[i]].x += points[i].x;
      sums[assign[i]].y += points[i].y;
      ++counts[assign[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        const auto m = static_cast<double>(counts[c]);
        centers[c] = {sums[c].x / m, sums[c].y / m};
      }
    }
  };

  KMeansResult result;
  while (result.iterations < max_iters) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = assign[i];
      double best_d = best == kUnassigned ? kInf : squared_distance(points[i], centers[best]);
      for (std::size_t c = 0; c < k; ++c) {
        const double d = squared_distance(points[i], centers[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (best != assign[i]) {
        assign[i] = best;
        changed = true;
      }
    }
    recompute_centers();

    for (std::size_t empty = 0; empty < k; ++empty) {
      if (counts[empty] != 0) {
        continue;
      }
      const std::size_t largest = static_cast<std::size_t>(
          std::max_element(counts.begin(), counts.end()) - counts.begin());
      std::size_t far = kUnassigned;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (assign[i] == largest) {
          const double d = squared_distance(points[i], centers[largest]);
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
      }
      assign[far] = empty;
      changed = true;
      recompute_centers();
    }

    ++result.iterations;
    Clustering snapshot;
    std::vector<std::vector<NodeId>> groups(k);
    for (std::size_t i = 0; i < n; ++i) {
      groups[assign[i]].push_back(i);
    }
    for (std::size_t c = 0; c < k; ++c) {
      snapshot.clusters.push_back(Cluster{c, groups[c], {}, groups[c].front()});
    }
    result.sse_history.push_back(energy::sse(snapshot, points));

    if (!changed) {
      result.converged = true;
      break;
    }
  }

  std::vector<std::vector<NodeId>> groups(k);
  for (std::size_t i = 0; i < n; ++i) {
    groups[assign[i]].push_back(i);
  }
  for (std::size_t c = 0; c < k; ++c) {
    result.clustering.clusters.push_back(make_cluster(c, std::move(groups[c]), scenario));
  }
  return result;
}

namespace {

struct PartitionSearch {
  const Scenario& scenario;
  std::vector<Point> points;
  std::size_t k = 0;
  double cap_sq = 0.0;

  std::vector<std::vector<NodeId>> blocks;
  std::vector<ChannelSet> block_common;
  double best_sse = kInf;
  std::vector<std::vector<NodeId>> best_blocks;

  bool fits(std::size_t block, NodeId node) const {
    if (!block_common[block].intersects(scenario.nodes[node].channels)) {
      return false;
    }
    for (NodeId other : blocks[block]) {
      if (squared_distance(points[node], points[other]) > cap_sq) {
        return false;
      }
    }
    return true;
  }

  void visit(NodeId node) {
    const std::size_t n = points.size();
    if (node == n) {
      if (blocks.size() != k) {
        return;
      }
      double total = 0.0;
      std::vector<Point> member_points;
      for (const auto& block : blocks) {
        member_points.clear();
        for (NodeId id : block) {
          member_points.push_back(points[id]);
        }
        total += energy::scatter(member_points);
      }
      if (total < best_sse) {
        best_sse = total;
        best_blocks = blocks;
      }
      return;
    }
    const std::size_t remaining = n - node;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      // Leave enough nodes to open the blocks still missing.
      if (remaining - 1 < k - blocks.size()) {
        break;
      }
      if (!fits(b, node)) {
        continue;
      }
      const ChannelSet saved = block_common[b];
      blocks[b].push_back(node);
      block_common[b] = saved & scenario.nodes[node].channels;
      visit(node + 1);
      blocks[b].pop_back();
      block_common[b] = saved;
    }
    if (blocks.size() < k) {
      blocks.push_back({node});
      block_common.push_back(scenario.nodes[node].channels);
      visit(node + 1);
      blocks.pop_back();
      block_common.pop_back();
    }
  }
};

}  // namespace

std::optional<Clustering> brute_force_optimal(const Scenario& scenario, std::size_t k) {
  const std::size_t n = scenario.nodes.size();
  if (n > kBruteForceMaxNodes) {
    throw std::invalid_argument("brute_force_optimal supports at most " +
                                std::to_string(kBruteForceMaxNodes) + " nodes");
  }
  if (k == 0 || k > n) {
    return std::nullopt;
  }
  PartitionSearch search{scenario, scenario.positions(), k,
                         scenario.config.d_max * scenario.config.d_max, {}, {}, kInf, {}};
  search.visit(0);
  if (search.best_blocks.empty()) {
    return std::nullopt;
  }
  Clustering out;
  for (std::size_t b = 0; b < search.best_blocks.size(); ++b) {
    out.clusters.push_back(make_cluster(b, std::move(search.best_blocks[b]), scenario));
  }
  return out;
}

}  // namespace crsn::clustering
