#pragma once

#include <string>
#include <vector>

#include "qmgm/dataset.hpp"

namespace qmgm {

struct CsvOptions {
  std::string missing_token;  // empty cell by default
  char delimiter = ',';
};

// RFC 4180 style parsing: quoted fields, doubled quotes, CRLF tolerated.
std::vector<std::vector<std::string>> parse_csv(const std::string& text, char delimiter = ',');

// Columns are matched to the schema by header name; every schema column must
// be present and no undeclared column may appear.
Dataset load_csv_text(const std::string& text, const std::vector<VariableSpec>& schema, const CsvOptions& options = {});
Dataset load_csv(const std::string& path, const std::string& schema_path, const CsvOptions& options = {});

// Writes values in schema order; missing cells use the missing token.
std::string format_csv(const Dataset& data, const CsvOptions& options = {});

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace qmgm
