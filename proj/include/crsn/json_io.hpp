#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "crsn/bench.hpp"
#include "crsn/cluster.hpp"
#include "crsn/scenario.hpp"

namespace crsn {

using json = nlohmann::json;

// FieldConfig reads any subset of its fields over the current values and
// rejects unknown keys.
void to_json(json& j, const FieldConfig& config);
void from_json(const json& j, FieldConfig& config);

// Scenario documents carry exactly config, nodes and pus. Reading recomputes
// density and validates the whole scenario, including channel consistency.
void to_json(json& j, const Scenario& scenario);
void from_json(const json& j, Scenario& scenario);

void to_json(json& j, const Cluster& cluster);
void from_json(const json& j, Cluster& cluster);
void to_json(json& j, const Clustering& clustering);
void from_json(const json& j, Clustering& clustering);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& document);

namespace bench {

void to_json(json& j, const ExperimentConfig& config);

/// Starts from default_config for the kind and overrides the fields present.
/// `kind` wins over a "kind" key in the document; one of them is required.
ExperimentConfig parse_experiment_config(const json& j,
                                         std::optional<ExperimentKind> kind = std::nullopt);

}  // namespace bench

}  // namespace crsn
