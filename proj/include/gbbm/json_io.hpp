#pragma once

// Deterministic JSON output and a small JSON-Schema subset validator
// (type, properties, required, additionalProperties, items, enum, const,
// minimum, exclusiveMinimum, maximum, minItems, maxItems).

#include <string>
#include <vector>

#include "json.hpp"

namespace gbbm::json_io {

/// Sorted keys, two-space indent, doubles as %.17g, non-finite as null.
std::string dump(const nlohmann::json& j);

/// Empty when valid; otherwise one message per violation, with a JSON pointer.
std::vector<std::string> validate(const nlohmann::json& doc, const nlohmann::json& schema);

/// Schemas compiled into the library, by file stem (e.g. "divisors.config").
const nlohmann::json& schema(const std::string& name);
std::vector<std::string> schema_names();

}  // namespace gbbm::json_io
