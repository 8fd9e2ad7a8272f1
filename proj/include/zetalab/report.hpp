#pragma once

#include <string>

#include <json.hpp>

namespace zetalab {

// Canonical serialization: object keys sorted, every double printed with 17
// significant digits so values round-trip exactly.
std::string canonical_json(const nlohmann::json& j, int indent = 2);

// RFC-4180 field quoting.
std::string csv_escape(const std::string& field);

// Flattens a report into key,value CSV rows; arrays of uniform objects
// become proper tables.
std::string report_to_csv(const nlohmann::json& j);

// Write-to-temp-then-rename; partial output is never visible at `path`.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace zetalab
