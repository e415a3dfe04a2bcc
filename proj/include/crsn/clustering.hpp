#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "crsn/cluster.hpp"
#include "crsn/scenario.hpp"

namespace crsn::clustering {

/// Complete-link distance between two clusters under the spectrum-aware
/// constraint. nullopt means the pair may not merge: either the clusters have
/// no common channel, or some cross pair is farther apart than d_max.
std::optional<double> complete_link_distance(const Cluster& a, const Cluster& b,
                                             const Scenario& scenario);

struct MergeStep {
  std::size_t iteration = 0;
  ClusterId kept = 0;
  ClusterId absorbed = 0;
  double distance = 0.0;
};

struct GcacResult {
  Clustering clustering;
  /// Merges performed; always num_nodes - clustering.size().
  std::size_t merges = 0;
  /// False when constraints blocked every merge before reaching the target.
  bool target_reached = false;
  std::vector<MergeStep> history;
};

/// Groupwise-constrained agglomerative clustering.
///
/// Starts from singletons (cluster id = node id) and repeatedly merges the
/// feasible pair with the smallest complete-link distance until `k_target`
/// clusters remain or no feasible pair is left. Equal distances go to the
/// lexicographically smallest (id, id) pair. A merged cluster keeps the
/// smaller id. Heads are the member nearest each final centroid.
GcacResult gcac(const Scenario& scenario, std::size_t k_target);

struct KMeansResult {
  Clustering clustering;
  /// Lloyd iterations executed, including the one that detected convergence.
  std::size_t iterations = 0;
  bool converged = false;
  /// SSE of the partition after each iteration.
  std::vector<double> sse_history;
};

/// Lloyd's K-means with k distinct initial centers drawn from the nodes using a
/// stream derived from the scenario seed. Channel constraints are not
/// enforced; common_channels is still filled in and may be empty.
/// An emptied cluster takes the point farthest from the center of the
/// currently largest cluster.
KMeansResult kmeans(const Scenario& scenario, std::size_t k, std::size_t max_iters);

/// Largest scenario size brute_force_optimal accepts.
inline constexpr std::size_t kBruteForceMaxNodes = 10;

/// Exact minimum-SSE partition into exactly k clusters that each satisfy the
/// groupwise channel constraint and the d_max diameter cap. nullopt when no
/// such partition exists. Throws std::invalid_argument above
/// kBruteForceMaxNodes nodes.
std::optional<Clustering> brute_force_optimal(const Scenario& scenario, std::size_t k);

}  // namespace crsn::clustering
