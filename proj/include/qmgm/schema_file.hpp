#pragma once

#include <string>
#include <vector>

#include "qmgm/variable.hpp"

namespace qmgm {

// Plain-text schema, one column per line:
//
//   # comment
//   name = kind [link] [domain=tag]
//
// kind is continuous, count or binary; link overrides the kind's default.
std::vector<VariableSpec> parse_schema(const std::string& text);
std::vector<VariableSpec> read_schema_file(const std::string& path);
std::string format_schema(const std::vector<VariableSpec>& schema);

}  // namespace qmgm
