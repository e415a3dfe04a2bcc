#include "crsn/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "crsn/clustering.hpp"
#include "crsn/dsac.hpp"
#include "crsn/energy.hpp"
#include "crsn/rng.hpp"
#include "crsn/stats.hpp"

namespace crsn::bench {

namespace {

constexpr std::uint64_t kDsacStream = 0x64736163ULL;
constexpr std::uint64_t kToggleStream = 0x746f67676c65ULL;

void check_clustering(const Clustering& clustering, const Scenario& scenario, const char* who) {
  if (auto err = constraint_error(clustering, scenario)) {
    throw std::logic_error(std::string(who) + " produced an invalid clustering: " + *err);
  }
}

void check_partition(const Clustering& clustering, const Scenario& scenario, const char* who) {
  if (auto err = partition_error(clustering, scenario.nodes.size())) {
    throw std::logic_error(std::string(who) + " produced an invalid partition: " + *err);
  }
}

std::size_t dsac_max_rounds(std::size_t nodes) { return nodes + 1; }

energy::EnergyParams energy_params(const Scenario& scenario) {
  return energy::EnergyParams{1.0, scenario.config.d_max, scenario.density};
}

double power_per_node(const Clustering& clustering, const Scenario& scenario,
                      std::span<const Point> positions) {
  return energy::total_power(clustering, positions, energy_params(scenario)).total /
         static_cast<double>(scenario.nodes.size());
}

std::size_t as_count(double value, const char* what) {
  if (!(value >= 0.0) || value != std::floor(value) || value > 1e9) {
    throw std::invalid_argument(std::string(what) + " must be a non-negative integer");
  }
  return static_cast<std::size_t>(value);
}

// Runs fn(trial) for every trial, in parallel when asked. Results are stored by
// trial index so the reduction that follows is order-independent.
template <typename T, typename Fn>
std::vector<T> run_trials(std::size_t trials, unsigned threads, Fn fn) {
  std::vector<T> out(trials);
  if (threads == 0) {
    threads = std::max(1U, std::thread::hardware_concurrency());
  }
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, trials));
  if (threads <= 1) {
    for (std::size_t t = 0; t < trials; ++t) {
      out[t] = fn(t);
    }
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&] {
        for (std::size_t t = next++; t < trials; t = next++) {
          try {
            out[t] = fn(t);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) {
              failure = std::current_exception();
            }
            next = trials;
          }
        }
      });
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
  return out;
}

ExperimentRecord summarize(double sweep_value, Algo algo, std::string metric,
                           const std::vector<double>& samples) {
  return ExperimentRecord{sweep_value, algo, std::move(metric), stats::mean(samples),
                          stats::sample_std(samples), samples.size()};
}

FieldConfig with_seed(FieldConfig field, std::uint64_t seed) {
  field.seed = seed;
  return field;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kScalability:
      return "scalability";
    case ExperimentKind::kEnergyVsK:
      return "energy_vs_k";
    case ExperimentKind::kPuSweep:
      return "pu_sweep";
    case ExperimentKind::kStability:
      return "stability";
  }
  return "unknown";
}

std::string to_string(Algo algo) {
  switch (algo) {
    case Algo::kDsac:
      return "dsac";
    case Algo::kGcac:
      return "gcac";
    case Algo::kKMeans:
      return "kmeans";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& text) {
  for (auto kind : {ExperimentKind::kScalability, ExperimentKind::kEnergyVsK,
                    ExperimentKind::kPuSweep, ExperimentKind::kStability}) {
    if (to_string(kind) == text) {
      return kind;
    }
  }
  throw std::invalid_argument("unknown experiment kind '" + text + "'");
}

Algo parse_algo(const std::string& text) {
  for (auto algo : {Algo::kDsac, Algo::kGcac, Algo::kKMeans}) {
    if (to_string(algo) == text) {
      return algo;
    }
  }
  throw std::invalid_argument("unknown algorithm '" + text + "'");
}

void validate(const ExperimentConfig& config) {
  if (config.trials < 1) {
    throw std::invalid_argument("trials must be at least 1");
  }
  if (config.sweep.empty()) {
    throw std::invalid_argument("sweep must not be empty");
  }
  for (double v : config.sweep) {
    const std::size_t count = as_count(v, "sweep values");
    const bool zero_ok = config.kind == ExperimentKind::kPuSweep;
    if (count == 0 && !zero_ok) {
      throw std::invalid_argument("sweep values must be positive for " + to_string(config.kind));
    }
  }
  validate(config.base);
  if (config.kind == ExperimentKind::kStability && config.base.num_pus == 0) {
    throw std::invalid_argument("stability needs at least one PU to toggle");
  }
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig config;
  config.kind = kind;
  config.base = FieldConfig{100.0, 100.0, 50, 10, 3, 20.0, 50.0, 1};
  switch (kind) {
    case ExperimentKind::kScalability:
      config.sweep = {20, 40, 60, 80, 100};
      break;
    case ExperimentKind::kEnergyVsK:
      config.base.num_nodes = 20;
      config.base.num_pus = 5;
      config.sweep = {3, 4, 5, 6, 7, 8};
      break;
    case ExperimentKind::kPuSweep:
      config.base.num_nodes = 30;
      config.sweep = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
      break;
    case ExperimentKind::kStability:
      config.sweep = {1};
      break;
  }
  return config;
}

std::uint64_t trial_seed(std::uint64_t experiment_seed, std::size_t trial) {
  return derive_seed(experiment_seed, trial);
}

ScalabilityTrial scalability_trial(const FieldConfig& base, std::size_t nodes,
                                   std::uint64_t seed) {
  FieldConfig field = with_seed(base, seed);
  field.num_nodes = nodes;
  const Scenario scenario = generate_scenario(field);
  ScalabilityTrial out;
  out.nodes = nodes;
  out.k_target = energy::optimal_cluster_count(nodes, field.d_max, scenario.density);

  const auto g = clustering::gcac(scenario, out.k_target);
  check_clustering(g.clustering, scenario, "gcac");
  out.gcac_merges = g.merges;
  out.gcac_clusters = g.clustering.size();

  dsac::SimState state = dsac::init_state(scenario, derive_seed(seed, kDsacStream));
  const auto d = dsac::run_to_convergence(state, out.k_target, dsac_max_rounds(nodes));
  check_clustering(d.clustering, state.scenario, "dsac");
  out.dsac_rounds = d.rounds;
  out.dsac_merges = d.merges;
  out.dsac_clusters = d.clustering.size();
  out.dsac_converged = d.converged;

  const auto km = clustering::kmeans(scenario, out.k_target, kKMeansMaxIterations);
  check_partition(km.clustering, scenario, "kmeans");
  out.kmeans_iterations = km.iterations;
  return out;
}

PowerTrial power_trial(const FieldConfig& field, std::size_t k_target) {
  const Scenario scenario = generate_scenario(field);
  const std::vector<Point> positions = scenario.positions();
  const std::size_t n = scenario.nodes.size();
  const std::size_t k = std::min(k_target, n);
  PowerTrial out;
  out.k_target = k;

  const auto g = clustering::gcac(scenario, k);
  check_clustering(g.clustering, scenario, "gcac");
  out.gcac = power_per_node(g.clustering, scenario, positions);
  out.gcac_clusters = g.clustering.size();

  dsac::SimState state = dsac::init_state(scenario, derive_seed(field.seed, kDsacStream),
                                          dsac::Options{k});
  const auto d = dsac::run_to_convergence(state, k, dsac_max_rounds(n));
  check_clustering(d.clustering, state.scenario, "dsac");
  out.dsac = power_per_node(d.clustering, scenario, positions);
  out.dsac_clusters = d.clustering.size();

  const auto km = clustering::kmeans(scenario, k, kKMeansMaxIterations);
  check_partition(km.clustering, scenario, "kmeans");
  out.kmeans = power_per_node(km.clustering, scenario, positions);
  out.kmeans_clusters = km.clustering.size();
  return out;
}

std::vector<ToggleOutcome> stability_trial(const FieldConfig& field, std::size_t toggles) {
  const Scenario scenario = generate_scenario(field);
  if (scenario.pus.empty()) {
    throw std::invalid_argument("stability trial needs at least one PU");
  }
  const std::size_t n = scenario.nodes.size();
  const std::size_t k = energy::optimal_cluster_count(n, field.d_max, scenario.density);

  dsac::SimState state = dsac::init_state(scenario, derive_seed(field.seed, kDsacStream));
  const auto initial = dsac::run_to_convergence(state, k, dsac_max_rounds(n));
  check_clustering(initial.clustering, state.scenario, "dsac");

  Rng picker(derive_seed(field.seed, kToggleStream));
  std::vector<ToggleOutcome> out;
  out.reserve(toggles);
  for (std::size_t e = 0; e < toggles; ++e) {
    ToggleOutcome outcome;
    outcome.pu = picker.index(scenario.pus.size());
    const bool new_active = !state.scenario.pus[outcome.pu].active;

    const std::vector<ClusterId> before = dsac::cluster_ids(state);
    const std::vector<NodeId> affected =
        dsac::apply_pu_event(state, dsac::PuEvent{outcome.pu, new_active, state.round});
    const std::vector<ClusterId> after = dsac::cluster_ids(state);
    check_clustering(state.clustering, state.scenario, "dsac after PU event");

    const std::vector<NodeId> in_range = nodes_in_protection_range(state.scenario, outcome.pu);
    outcome.affected = affected.size();
    outcome.in_range = in_range.size();
    outcome.affected_within_range =
        std::includes(in_range.begin(), in_range.end(), affected.begin(), affected.end());
    outcome.unaffected_kept_ids = true;
    for (NodeId i = 0; i < n; ++i) {
      if (!std::binary_search(affected.begin(), affected.end(), i) && before[i] != after[i]) {
        outcome.unaffected_kept_ids = false;
      }
    }

    const auto again = dsac::run_to_convergence(state, k, dsac_max_rounds(n));
    check_clustering(again.clustering, state.scenario, "dsac");
    outcome.dsac_rounds = again.rounds;
    outcome.dsac_converged = again.converged;

    // The centralized engine has no incremental mode: it re-clusters every node.
    const auto g = clustering::gcac(state.scenario, k);
    check_clustering(g.clustering, state.scenario, "gcac");
    outcome.gcac_scope = n;
    outcome.gcac_merges = g.merges;
    out.push_back(outcome);
  }
  return out;
}

std::vector<ExperimentRecord> exp_scalability(const ExperimentConfig& config,
                                              const RunOptions& options) {
  validate(config);
  std::vector<ExperimentRecord> records;
  for (double value : config.sweep) {
    const std::size_t nodes = as_count(value, "node count");
    const auto trials = run_trials<ScalabilityTrial>(
        config.trials, options.threads, [&](std::size_t t) {
          return scalability_trial(config.base, nodes, trial_seed(config.seed, t));
        });
    std::vector<double> dsac_steps;
    std::vector<double> gcac_steps;
    std::vector<double> kmeans_steps;
    for (const auto& trial : trials) {
      dsac_steps.push_back(static_cast<double>(trial.dsac_rounds));
      gcac_steps.push_back(static_cast<double>(trial.gcac_merges));
      kmeans_steps.push_back(static_cast<double>(trial.kmeans_iterations));
    }
    records.push_back(summarize(value, Algo::kDsac, "steps", dsac_steps));
    records.push_back(summarize(value, Algo::kGcac, "steps", gcac_steps));
    records.push_back(summarize(value, Algo::kKMeans, "steps", kmeans_steps));
  }
  return records;
}

namespace {

std::vector<ExperimentRecord> power_records(double value, const std::vector<PowerTrial>& trials) {
  std::vector<double> dsac;
  std::vector<double> gcac;
  std::vector<double> kmeans;
  for (const auto& trial : trials) {
    dsac.push_back(trial.dsac);
    gcac.push_back(trial.gcac);
    kmeans.push_back(trial.kmeans);
  }
  return {summarize(value, Algo::kDsac, "power_per_node", dsac),
          summarize(value, Algo::kGcac, "power_per_node", gcac),
          summarize(value, Algo::kKMeans, "power_per_node", kmeans)};
}

}  // namespace

std::vector<ExperimentRecord> exp_energy_vs_k(const ExperimentConfig& config,
                                              const RunOptions& options) {
  validate(config);
  std::vector<ExperimentRecord> records;
  for (double value : config.sweep) {
    const std::size_t k = as_count(value, "cluster count");
    const auto trials = run_trials<PowerTrial>(config.trials, options.threads, [&](std::size_t t) {
      return power_trial(with_seed(config.base, trial_seed(config.seed, t)), k);
    });
    auto rows = power_records(value, trials);
    records.insert(records.end(), rows.begin(), rows.end());
  }
  return records;
}

std::vector<ExperimentRecord> exp_pu_sweep(const ExperimentConfig& config,
                                           const RunOptions& options) {
  validate(config);
  std::vector<ExperimentRecord> records;
  const double density = static_cast<double>(config.base.num_nodes) /
                         (config.base.width * config.base.height);
  const std::size_t k =
      energy::optimal_cluster_count(config.base.num_nodes, config.base.d_max, density);
  for (double value : config.sweep) {
    FieldConfig field = config.base;
    field.num_pus = as_count(value, "PU count");
    const auto trials = run_trials<PowerTrial>(config.trials, options.threads, [&](std::size_t t) {
      return power_trial(with_seed(field, trial_seed(config.seed, t)), k);
    });
    auto rows = power_records(value, trials);
    records.insert(records.end(), rows.begin(), rows.end());
  }
  return records;
}

std::vector<ExperimentRecord> exp_stability(const ExperimentConfig& config,
                                            const RunOptions& options) {
  validate(config);
  std::vector<ExperimentRecord> records;
  const auto n = static_cast<double>(config.base.num_nodes);
  for (double value : config.sweep) {
    const std::size_t toggles = as_count(value, "toggle count");
    const auto trials = run_trials<std::vector<ToggleOutcome>>(
        config.trials, options.threads, [&](std::size_t t) {
          return stability_trial(with_seed(config.base, trial_seed(config.seed, t)), toggles);
        });
    std::vector<double> dsac_fraction;
    std::vector<double> dsac_steps;
    std::vector<double> gcac_fraction;
    std::vector<double> gcac_steps;
    for (const auto& outcomes : trials) {
      double affected = 0.0;
      double rounds = 0.0;
      double scope = 0.0;
      double merges = 0.0;
      for (const auto& o : outcomes) {
        affected += static_cast<double>(o.affected);
        rounds += static_cast<double>(o.dsac_rounds);
        scope += static_cast<double>(o.gcac_scope);
        merges += static_cast<double>(o.gcac_merges);
      }
      const auto m = static_cast<double>(outcomes.size());
      dsac_fraction.push_back(affected / m / n);
      dsac_steps.push_back(rounds / m);
      gcac_fraction.push_back(scope / m / n);
      gcac_steps.push_back(merges / m);
    }
    records.push_back(summarize(value, Algo::kDsac, "affected_fraction", dsac_fraction));
    records.push_back(summarize(value, Algo::kDsac, "reconverge_steps", dsac_steps));
    records.push_back(summarize(value, Algo::kGcac, "affected_fraction", gcac_fraction));
    records.push_back(summarize(value, Algo::kGcac, "reconverge_steps", gcac_steps));
  }
  return records;
}

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config,
                                             const RunOptions& options) {
  switch (config.kind) {
    case ExperimentKind::kScalability:
      return exp_scalability(config, options);
    case ExperimentKind::kEnergyVsK:
      return exp_energy_vs_k(config, options);
    case ExperimentKind::kPuSweep:
      return exp_pu_sweep(config, options);
    case ExperimentKind::kStability:
      return exp_stability(config, options);
  }
  throw std::invalid_argument("unknown experiment kind");
}

namespace {

void write_number(std::ostream& out, double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  out.write(buf, result.ptr - buf);
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  out << "sweep_value,algo,metric,mean,std,trials\n";
  for (const auto& r : records) {
    write_number(out, r.sweep_value);
    out << ',' << to_string(r.algo) << ',' << r.metric << ',';
    write_number(out, r.mean);
    out << ',';
    write_number(out, r.std);
    out << ',' << r.trials << '\n';
  }
}

}  // namespace crsn::bench
