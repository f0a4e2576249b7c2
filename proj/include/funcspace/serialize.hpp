#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>

#include "funcspace/measure.hpp"
#include "funcspace/resnet.hpp"
#include "funcspace/two_layer.hpp"

namespace funcspace {

// Versioned JSON schemas, discriminated by "kind". Field names are fixed:
//   two_layer_measure: {"kind","dim","atoms":[{"w","a","b":[..],"c"}]}
//   two_layer_net:     {"kind","dim","neurons":[{"a","b":[..],"c"}]}
//   resnet:            {"kind","d","D","m","L","alpha":[..],"layers":[{"U","W"}]}
//   schedule:          {"kind","D","m","segments":[{"t0","t1","atoms":[{"w","U","W"}]}]}
//   comp_function:     {"kind","d","alpha":[..],"schedule":{..}}

nlohmann::json to_json(const TwoLayerMeasure& mu);
nlohmann::json to_json(const TwoLayerNet& net);
nlohmann::json to_json(const ResidualSchedule& schedule);
nlohmann::json to_json(const ResidualNet& net);
nlohmann::json to_json(const CompositionalFunction& fn);

TwoLayerMeasure measure_from_json(const nlohmann::json& j);
TwoLayerNet net_from_json(const nlohmann::json& j);
ResidualSchedule schedule_from_json(const nlohmann::json& j);
ResidualNet resnet_from_json(const nlohmann::json& j);
CompositionalFunction comp_function_from_json(const nlohmann::json& j);

/// "kind" field of a JSON artifact (throws io_error when absent).
std::string artifact_kind(const nlohmann::json& j);

nlohmann::json load_json(const std::filesystem::path& path);

/// Writes via a temp file in the same directory plus rename, so a crash
/// never leaves a half-written artifact.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

void save_json_atomic(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace funcspace
