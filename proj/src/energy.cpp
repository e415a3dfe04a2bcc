#include "crsn/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crsn::energy {

void validate(const EnergyParams& params) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(params.c0pr) || !positive(params.d_max) || !positive(params.density)) {
    throw std::invalid_argument("energy parameters c0pr, d_max and density must be positive");
  }
}

double inter_cluster_power(std::size_t k, const EnergyParams& params) {
  return static_cast<double>(k) * params.c0pr * params.d_max * params.d_max;
}

double intra_cluster_power_given_head(std::span<const Point> cluster, std::size_t head_index,
                                      const EnergyParams& params) {
  if (cluster.empty()) {
    throw std::invalid_argument("intra-cluster power of an empty cluster");
  }
  if (head_index >= cluster.size()) {
    throw std::out_of_range("head index outside the cluster");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < cluster.size(); ++i) {
    if (i != head_index) {
      sum += squared_distance(cluster[i], cluster[head_index]);
    }
  }
  return params.c0pr * sum;
}

double scatter(std::span<const Point> cluster) {
  if (cluster.empty()) {
    return 0.0;
  }
  double sx = 0.0;
  double sy = 0.0;
  for (const Point& p : cluster) {
    sx += p.x;
    sy += p.y;
  }
  const auto n = static_cast<double>(cluster.size());
  const Point center{sx / n, sy / n};
  double sum = 0.0;
  for (const Point& p : cluster) {
    sum += squared_distance(p, center);
  }
  return sum;
}

double sse(const Clustering& clustering, std::span<const Point> positions) {
  double total = 0.0;
  std::vector<Point> members;
  for (const Cluster& cluster : clustering.clusters) {
    if (cluster.members.empty()) {
      throw std::invalid_argument("SSE of a clustering with an empty cluster");
    }
    members.clear();
    for (NodeId id : cluster.members) {
      members.push_back(positions[id]);
    }
    total += scatter(members);
  }
  return total;
}

double expected_intra_cluster_power(const Clustering& clustering,
                                    std::span<const Point> positions,
                                    const EnergyParams& params) {
  return 2.0 * params.c0pr * sse(clustering, positions);
}

PowerBreakdown total_power(const Clustering& clustering, std::span<const Point> positions,
                           const EnergyParams& params) {
  PowerBreakdown out;
  out.inter = inter_cluster_power(clustering.size(), params);
  out.intra = expected_intra_cluster_power(clustering, positions, params);
  out.total = out.inter + out.intra;
  return out;
}

double expected_total_power(std::size_t n, std::size_t k, const EnergyParams& params) {
  if (k == 0) {
    throw std::invalid_argument("expected_total_power needs at least one cluster");
  }
  validate(params);
  const auto nn = static_cast<double>(n);
  const auto kk = static_cast<double>(k);
  return params.c0pr * (nn * nn / (3.0 * params.density * kk) + kk * params.d_max * params.d_max);
}

double optimal_cluster_count_real(std::size_t n, double d_max, double density) {
  if (!(d_max > 0.0) || !(density > 0.0)) {
    throw std::invalid_argument("d_max and density must be positive");
  }
  return static_cast<double>(n) / (d_max * std::sqrt(3.0 * density));
}

std::size_t optimal_cluster_count(std::size_t n, double d_max, double density) {
  if (n == 0) {
    throw std::invalid_argument("optimal_cluster_count needs at least one node");
  }
  const double k = std::floor(optimal_cluster_count_real(n, d_max, density) + 0.5);
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(k, 0.0)), 1, n);
}

}  // namespace crsn::energy
