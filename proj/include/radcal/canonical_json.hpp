#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace radcal {

using Json = nlohmann::json;

/// Sorted keys, two-space indent, floats as %.17g (integers stay integral),
/// trailing newline. Parsing the output and dumping again is byte-identical.
[[nodiscard]] std::string dump_canonical(const Json& j);

/// Same value formatting on a single line without whitespace or newline (JSON-lines records).
[[nodiscard]] std::string dump_canonical_line(const Json& j);

}  // namespace radcal
