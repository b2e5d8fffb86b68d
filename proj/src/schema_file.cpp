#include "qmgm/schema_file.hpp"

#include <sstream>

#include "qmgm/csv_io.hpp"
#include "qmgm/types.hpp"

namespace qmgm {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<VariableSpec> parse_schema(const std::string& text) {
  std::vector<VariableSpec> schema;
  std::istringstream in(text);
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DataError("schema line " + std::to_string(line_number) + ": expected 'name = kind'");
    }
    const std::string name = trim(line.substr(0, eq));
    if (name.empty()) throw DataError("schema line " + std::to_string(line_number) + ": empty column name");
    for (const auto& existing : schema) {
      if (existing.name == name) throw DataError("schema declares '" + name + "' twice");
    }
    std::istringstream tokens(line.substr(eq + 1));
    std::string kind_text;
    if (!(tokens >> kind_text)) throw DataError("schema line " + std::to_string(line_number) + ": missing kind");
    VariableSpec spec = VariableSpec::make(name, parse_kind(kind_text));
    std::string token;
    while (tokens >> token) {
      if (token.rfind("domain=", 0) == 0) {
        spec.domain = token.substr(7);
      } else {
        spec.link = parse_link(token);
      }
    }
    check_invariants(spec);
    schema.push_back(std::move(spec));
  }
  if (schema.empty()) throw DataError("schema declares no columns");
  return schema;
}

std::vector<VariableSpec> read_schema_file(const std::string& path) { return parse_schema(read_text_file(path)); }

std::string format_schema(const std::vector<VariableSpec>& schema) {
  std::ostringstream os;
  for (const auto& spec : schema) {
    os << spec.name << " = " << to_string(spec.kind) << ' ' << to_string(spec.link);
    if (!spec.domain.empty()) os << " domain=" << spec.domain;
    os << '\n';
  }
  return os.str();
}

}  // namespace qmgm
