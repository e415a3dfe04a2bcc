// crsn: scenario generation, clustering, and experiment runner.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "crsn/bench.hpp"
#include "crsn/clustering.hpp"
#include "crsn/dsac.hpp"
#include "crsn/energy.hpp"
#include "crsn/json_io.hpp"
#include "crsn/rng.hpp"

namespace {

using crsn::json;

constexpr std::uint64_t kCliDsacStream = 0x64736163ULL;

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  return out;
}

int run_generate(const std::string& config_path, const std::string& out_path) {
  crsn::FieldConfig config = crsn::read_json_file(config_path).get<crsn::FieldConfig>();
  const crsn::Scenario scenario = crsn::generate_scenario(config);
  crsn::write_json_file(out_path, json(scenario));
  std::printf("generated %zu nodes, %zu PUs (density %.6g)\n", scenario.nodes.size(),
              scenario.pus.size(), scenario.density);
  return 0;
}

struct ClusterArgs {
  std::string scenario_path;
  std::string algo;
  std::optional<std::size_t> k;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::string log_path;
};

int run_cluster(const ClusterArgs& args) {
  const crsn::Scenario scenario = crsn::read_json_file(args.scenario_path).get<crsn::Scenario>();
  const std::size_t n = scenario.nodes.size();
  const std::size_t k = args.k.value_or(
      crsn::energy::optimal_cluster_count(n, scenario.config.d_max, scenario.density));
  const crsn::bench::Algo algo = crsn::bench::parse_algo(args.algo);

  crsn::Clustering clustering;
  std::size_t steps = 0;
  bool done = true;
  std::vector<crsn::dsac::Event> events;

  switch (algo) {
    case crsn::bench::Algo::kGcac: {
      auto result = crsn::clustering::gcac(scenario, k);
      clustering = std::move(result.clustering);
      steps = result.merges;
      done = result.target_reached;
      for (const auto& step : result.history) {
        events.push_back(crsn::dsac::Event{step.iteration + 1,
                                           crsn::dsac::EventKind::kMerge,
                                           {step.kept, step.absorbed, step.kept},
                                           {},
                                           {}});
      }
      break;
    }
    case crsn::bench::Algo::kKMeans: {
      if (!args.log_path.empty()) {
        throw std::invalid_argument("--log is not available for kmeans");
      }
      auto result = crsn::clustering::kmeans(scenario, k, crsn::bench::kKMeansMaxIterations);
      clustering = std::move(result.clustering);
      steps = result.iterations;
      done = result.converged;
      break;
    }
    case crsn::bench::Algo::kDsac: {
      const std::uint64_t seed =
          args.seed.value_or(crsn::derive_seed(scenario.config.seed, kCliDsacStream));
      auto state = crsn::dsac::init_state(scenario, seed, crsn::dsac::Options{k});
      auto result = crsn::dsac::run_to_convergence(state, k, n + 1);
      clustering = std::move(result.clustering);
      steps = result.rounds;
      done = result.converged;
      events = std::move(state.event_log);
      break;
    }
  }

  crsn::write_json_file(args.out_path, json(clustering));
  if (!args.log_path.empty()) {
    auto log = open_output(args.log_path);
    crsn::dsac::write_event_log_csv(log, events);
  }

  const auto positions = scenario.positions();
  const crsn::energy::EnergyParams params{1.0, scenario.config.d_max, scenario.density};
  const auto power = crsn::energy::total_power(clustering, positions, params);
  std::printf("algo=%s k_target=%zu clusters=%zu steps=%zu %s sse=%.6g power_per_node=%.6g\n",
              args.algo.c_str(), k, clustering.size(), steps,
              algo == crsn::bench::Algo::kKMeans ? (done ? "converged" : "max_iters")
                                                 : (done ? "converged" : "target_not_reached"),
              crsn::energy::sse(clustering, positions), power.total / static_cast<double>(n));
  return 0;
}

int run_experiment(const std::string& kind, const std::string& config_path,
                   const std::string& out_path, unsigned threads) {
  const auto parsed_kind = crsn::bench::parse_experiment_kind(kind);
  const json document = config_path.empty() ? json::object() : crsn::read_json_file(config_path);
  const auto config = crsn::bench::parse_experiment_config(document, parsed_kind);
  const auto records = crsn::bench::run_experiment(config, {threads});
  auto out = open_output(out_path);
  crsn::bench::write_csv(out, records);
  std::printf("%s: %zu records, %zu trials each -> %s\n", kind.c_str(), records.size(),
              config.trials, out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectrum-aware clustering toolkit for cognitive radio sensor networks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  auto* generate = app.add_subcommand("generate", "Generate a random deployment");
  generate->add_option("--config", config_path, "Field config JSON")->required();
  generate->add_option("--out", out_path, "Scenario JSON output")->required();

  ClusterArgs cluster_args;
  auto* cluster = app.add_subcommand("cluster", "Cluster a scenario");
  cluster->add_option("--scenario", cluster_args.scenario_path, "Scenario JSON")->required();
  cluster->add_option("--algo", cluster_args.algo, "dsac | gcac | kmeans")
      ->required()
      ->check(CLI::IsMember({"dsac", "gcac", "kmeans"}));
  cluster->add_option("--k", cluster_args.k, "Target cluster count (default: optimal)");
  cluster->add_option("--seed", cluster_args.seed, "DSAC simulation seed");
  cluster->add_option("--out", cluster_args.out_path, "Clustering JSON output")->required();
  cluster->add_option("--log", cluster_args.log_path, "Event log CSV output");

  std::string kind;
  std::string exp_config;
  std::string exp_out;
  unsigned threads = 0;
  auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo experiment");
  experiment->add_option("--kind", kind, "scalability | energy_vs_k | pu_sweep | stability")
      ->required()
      ->check(CLI::IsMember({"scalability", "energy_vs_k", "pu_sweep", "stability"}));
  experiment->add_option("--config", exp_config, "Experiment config JSON");
  experiment->add_option("--out", exp_out, "Results CSV")->required();
  experiment->add_option("--threads", threads, "Worker threads (0 = all cores)");

  std::size_t nodes = 0;
  double dmax = 0.0;
  double density = 0.0;
  auto* kopt = app.add_subcommand("kopt", "Print the optimal cluster count");
  kopt->add_option("--nodes", nodes)->required()->check(CLI::PositiveNumber);
  kopt->add_option("--dmax", dmax)->required()->check(CLI::PositiveNumber);
  kopt->add_option("--density", density)->required()->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) {
      return run_generate(config_path, out_path);
    }
    if (cluster->parsed()) {
      return run_cluster(cluster_args);
    }
    if (experiment->parsed()) {
      return run_experiment(kind, exp_config, exp_out, threads);
    }
    if (kopt->parsed()) {
      std::cout << crsn::energy::optimal_cluster_count(nodes, dmax, density) << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
