#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>

namespace funcspace::toml {

/// Minimal TOML reader covering what study configs use: [table] headers,
/// bare/quoted keys, strings, numbers, booleans, (multi-line) arrays and
/// inline tables. Produces the equivalent JSON document. Unsupported TOML
/// constructs raise config_error with a line number.
nlohmann::json parse(const std::string& text);

nlohmann::json parse_file(const std::filesystem::path& path);

}  // namespace funcspace::toml
