#pragma once

#include <json.hpp>

#include <string>

namespace sglab {

// Writes pretty-printed JSON with a trailing newline; the byte stream is a
// pure function of the document (keys are emitted sorted).
void write_json_file(const std::string& path, const nlohmann::json& j);

std::string read_text_file(const std::string& path);

std::string iso_timestamp_utc();

// Machine-readable error payload used by the command line driver.
nlohmann::json error_json(const std::string& kind, const std::string& what);

} // namespace sglab
