#pragma once

#include <string_view>

#include "radcal/canonical_json.hpp"

namespace radcal {

/// Reads the subset of TOML used by parameter files: `[table]` and
/// `[table.sub]` headers, `key = value` with integers, floats, booleans,
/// basic strings and single-line arrays of those, and `#` comments.
/// Throws Error(kConfig) with the line number on anything else.
[[nodiscard]] Json parse_toml(std::string_view text);

}  // namespace radcal
