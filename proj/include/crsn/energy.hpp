#pragma once

#include <cstddef>
#include <span>

#include "crsn/cluster.hpp"
#include "crsn/geometry.hpp"

namespace crsn::energy {

// Communication power model under free-space d^2 path loss. The loss
// constant and the minimal receive power only ever appear as a product, so
// they are carried as one scale factor `c0pr`.
struct EnergyParams {
  double c0pr = 1.0;
  double d_max = 50.0;
  /// Nodes per square meter.
  double density = 0.0;
};

void validate(const EnergyParams& params);

struct PowerBreakdown {
  double inter = 0.0;
  double intra = 0.0;
  double total = 0.0;
};

/// Cluster heads relay at full range: k * c0pr * d_max^2.
double inter_cluster_power(std::size_t k, const EnergyParams& params);

/// Members report to the given head: c0pr * sum_i d^2(member_i, head).
double intra_cluster_power_given_head(std::span<const Point> cluster, std::size_t head_index,
                                      const EnergyParams& params);

/// Sum of squared member-to-centroid distances of one cluster.
double scatter(std::span<const Point> cluster);

/// Sum of scatter over clusters (SSE).
double sse(const Clustering& clustering, std::span<const Point> positions);

/// Intra-cluster power averaged over uniformly rotated heads:
/// 2 * c0pr * SSE.
double expected_intra_cluster_power(const Clustering& clustering,
                                    std::span<const Point> positions,
                                    const EnergyParams& params);

/// Inter power for clustering.size() heads plus rotation-averaged intra power.
PowerBreakdown total_power(const Clustering& clustering, std::span<const Point> positions,
                           const EnergyParams& params);

/// Expected total power for n uniformly deployed nodes in k clusters:
/// c0pr * (n^2 / (3 density k) + k d_max^2). Throws for k == 0.
double expected_total_power(std::size_t n, std::size_t k, const EnergyParams& params);

/// Real-valued minimizer of expected_total_power: n / (d_max sqrt(3 density)).
double optimal_cluster_count_real(std::size_t n, double d_max, double density);

/// floor(n / (d_max sqrt(3 density)) + 0.5), clamped to [1, n].
std::size_t optimal_cluster_count(std::size_t n, double d_max, double density);

}  // namespace crsn::energy
