#include "crsn/json_io.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace crsn {

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed, const char* what) {
  if (!j.is_object()) {
    throw std::invalid_argument(std::string(what) + " must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    if (allowed.count(key) == 0) {
      throw std::invalid_argument(std::string("unknown key '") + key + "' in " + what);
    }
  }
}

template <typename T>
void read_if_present(const json& j, const char* key, T& target) {
  if (auto it = j.find(key); it != j.end()) {
    it->get_to(target);
  }
}

}  // namespace

void to_json(json& j, const FieldConfig& c) {
  j = json{{"width", c.width},
           {"height", c.height},
           {"num_nodes", c.num_nodes},
           {"num_pus", c.num_pus},
           {"num_channels", c.num_channels},
           {"protection_range", c.protection_range},
           {"d_max", c.d_max},
           {"seed", c.seed}};
}

void from_json(const json& j, FieldConfig& c) {
  reject_unknown_keys(j,
                      {"width", "height", "num_nodes", "num_pus", "num_channels",
                       "protection_range", "d_max", "seed"},
                      "field config");
  read_if_present(j, "width", c.width);
  read_if_present(j, "height", c.height);
  read_if_present(j, "num_nodes", c.num_nodes);
  read_if_present(j, "num_pus", c.num_pus);
  read_if_present(j, "num_channels", c.num_channels);
  read_if_present(j, "protection_range", c.protection_range);
  read_if_present(j, "d_max", c.d_max);
  read_if_present(j, "seed", c.seed);
}

void to_json(json& j, const Scenario& s) {
  json nodes = json::array();
  for (const Node& node : s.nodes) {
    nodes.push_back(json{{"id", node.id},
                         {"x", node.position.x},
                         {"y", node.position.y},
                         {"channels", node.channels.to_vector()}});
  }
  json pus = json::array();
  for (const PrimaryUser& pu : s.pus) {
    pus.push_back(json{{"id", pu.id},
                       {"x", pu.position.x},
                       {"y", pu.position.y},
                       {"channel", pu.channel},
                       {"active", pu.active}});
  }
  j = json{{"config", s.config}, {"nodes", std::move(nodes)}, {"pus", std::move(pus)}};
}

void from_json(const json& j, Scenario& s) {
  reject_unknown_keys(j, {"config", "nodes", "pus"}, "scenario");
  Scenario out;
  out.config = FieldConfig{};
  j.at("config").get_to(out.config);
  for (const json& node : j.at("nodes")) {
    reject_unknown_keys(node, {"id", "x", "y", "channels"}, "scenario node");
    out.nodes.push_back(Node{node.at("id").get<NodeId>(),
                             {node.at("x").get<double>(), node.at("y").get<double>()},
                             ChannelSet::of(node.at("channels").get<std::vector<Channel>>())});
  }
  for (const json& pu : j.at("pus")) {
    reject_unknown_keys(pu, {"id", "x", "y", "channel", "active"}, "scenario PU");
    out.pus.push_back(PrimaryUser{pu.at("id").get<PuId>(),
                                  {pu.at("x").get<double>(), pu.at("y").get<double>()},
                                  pu.at("channel").get<Channel>(),
                                  pu.at("active").get<bool>()});
  }
  validate(out.config);
  out.density = static_cast<double>(out.config.num_nodes) / (out.config.width * out.config.height);
  validate(out);
  s = std::move(out);
}

void to_json(json& j, const Cluster& c) {
  j = json{{"id", c.id},
           {"members", c.members},
           {"common_channels", c.common_channels.to_vector()},
           {"head", c.head}};
}

void from_json(const json& j, Cluster& c) {
  reject_unknown_keys(j, {"id", "members", "common_channels", "head"}, "cluster");
  j.at("id").get_to(c.id);
  j.at("members").get_to(c.members);
  c.common_channels = ChannelSet::of(j.at("common_channels").get<std::vector<Channel>>());
  j.at("head").get_to(c.head);
}

void to_json(json& j, const Clustering& c) { j = json{{"clusters", c.clusters}}; }

void from_json(const json& j, Clustering& c) {
  reject_unknown_keys(j, {"clusters"}, "clustering");
  j.at("clusters").get_to(c.clusters);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& document) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  out << document.dump(2) << '\n';
}

namespace bench {

void to_json(json& j, const ExperimentConfig& c) {
  j = json{{"kind", to_string(c.kind)},
           {"trials", c.trials},
           {"base", c.base},
           {"sweep", c.sweep},
           {"seed", c.seed}};
}

ExperimentConfig parse_experiment_config(const json& j, std::optional<ExperimentKind> kind) {
  reject_unknown_keys(j, {"kind", "trials", "base", "sweep", "seed"}, "experiment config");
  if (!kind) {
    if (!j.contains("kind")) {
      throw std::invalid_argument("experiment config needs a kind");
    }
    kind = parse_experiment_kind(j.at("kind").get<std::string>());
  }
  ExperimentConfig config = default_config(*kind);
  read_if_present(j, "trials", config.trials);
  read_if_present(j, "base", config.base);
  read_if_present(j, "sweep", config.sweep);
  read_if_present(j, "seed", config.seed);
  validate(config);
  return config;
}

}  // namespace bench

}  // namespace crsn
