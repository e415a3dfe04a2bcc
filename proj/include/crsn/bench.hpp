#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "crsn/scenario.hpp"

// Monte Carlo experiment harness.
//
// Trial t of an experiment uses trial seed derive_seed(config.seed, t) for
// every sweep value (common random numbers), so curves are compared on the
// same node layouts. The scenario for a trial is generated with that seed,
// and the protocol simulation and PU toggle choices draw from fixed child
// streams of it. Results do not depend on the thread count.
namespace crsn::bench {

enum class ExperimentKind { kScalability, kEnergyVsK, kPuSweep, kStability };
enum class Algo { kDsac, kGcac, kKMeans };

std::string to_string(ExperimentKind kind);
std::string to_string(Algo algo);
ExperimentKind parse_experiment_kind(const std::string& text);
Algo parse_algo(const std::string& text);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kScalability;
  std::size_t trials = 1000;
  FieldConfig base;
  /// Node counts, cluster counts, PU counts, or toggles per trial.
  std::vector<double> sweep;
  std::uint64_t seed = 1;
};

void validate(const ExperimentConfig& config);

/// The published setup for each experiment at desk-scale trial count.
ExperimentConfig default_config(ExperimentKind kind);

struct ExperimentRecord {
  double sweep_value = 0.0;
  Algo algo = Algo::kGcac;
  std::string metric;
  double mean = 0.0;
  double std = 0.0;
  std::size_t trials = 0;
};

inline constexpr std::size_t kKMeansMaxIterations = 100;

std::uint64_t trial_seed(std::uint64_t experiment_seed, std::size_t trial);

// Per-trial building blocks. Each one checks partition and constraint
// invariants of every clustering it produces and throws std::logic_error on a
// violation.

struct ScalabilityTrial {
  std::size_t nodes = 0;
  std::size_t k_target = 0;
  std::size_t gcac_merges = 0;
  std::size_t gcac_clusters = 0;
  std::size_t dsac_rounds = 0;
  std::size_t dsac_merges = 0;
  std::size_t dsac_clusters = 0;
  bool dsac_converged = false;
  std::size_t kmeans_iterations = 0;
};

/// All three engines at K_opt for `nodes` nodes on the base field.
ScalabilityTrial scalability_trial(const FieldConfig& base, std::size_t nodes,
                                   std::uint64_t seed);

struct PowerTrial {
  std::size_t k_target = 0;
  /// Total power divided by node count.
  double gcac = 0.0;
  double dsac = 0.0;
  double kmeans = 0.0;
  std::size_t gcac_clusters = 0;
  std::size_t dsac_clusters = 0;
  std::size_t kmeans_clusters = 0;
};

/// Mean node power of each engine asked for k_target clusters on the field
/// generated from `field` (its seed included).
PowerTrial power_trial(const FieldConfig& field, std::size_t k_target);

struct ToggleOutcome {
  PuId pu = 0;
  std::size_t affected = 0;
  std::size_t in_range = 0;
  bool affected_within_range = false;
  bool unaffected_kept_ids = false;
  std::size_t dsac_rounds = 0;
  bool dsac_converged = false;
  std::size_t gcac_scope = 0;
  std::size_t gcac_merges = 0;
};

/// Converges DSAC at K_opt, then applies `toggles` random single-PU toggles,
/// re-converging after each; GCAC re-clusters from scratch after each toggle.
std::vector<ToggleOutcome> stability_trial(const FieldConfig& field, std::size_t toggles);

struct RunOptions {
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

std::vector<ExperimentRecord> exp_scalability(const ExperimentConfig& config,
                                              const RunOptions& options = {});
std::vector<ExperimentRecord> exp_energy_vs_k(const ExperimentConfig& config,
                                              const RunOptions& options = {});
std::vector<ExperimentRecord> exp_pu_sweep(const ExperimentConfig& config,
                                           const RunOptions& options = {});
std::vector<ExperimentRecord> exp_stability(const ExperimentConfig& config,
                                            const RunOptions& options = {});

/// Dispatches on config.kind.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config,
                                             const RunOptions& options = {});

/// Header `sweep_value,algo,metric,mean,std,trials`, LF endings, shortest
/// round-trip decimal formatting.
void write_csv(std::ostream& out, const std::vector<ExperimentRecord>& records);

}  // namespace crsn::bench
