#include "qmgm/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "qmgm/schema_file.hpp"

namespace qmgm {

std::vector<std::vector<std::string>> parse_csv(const std::string& text, char delimiter) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool row_has_content = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      row_has_content = true;
    } else if (c == delimiter) {
      row.push_back(std::move(field));
      field.clear();
      row_has_content = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (row_has_content || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      row_has_content = false;
    } else {
      field.push_back(c);
      row_has_content = true;
    }
  }
  if (quoted) throw DataError("unterminated quoted field in CSV input");
  if (row_has_content || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

bool parse_number(const std::string& cell, double& out) {
  std::size_t begin = cell.find_first_not_of(" \t");
  std::size_t end = cell.find_last_not_of(" \t");
  if (begin == std::string::npos) return false;
  const char* first = cell.data() + begin;
  const char* last = cell.data() + end + 1;
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

Dataset load_csv_text(const std::string& text, const std::vector<VariableSpec>& schema, const CsvOptions& options) {
  const auto rows = parse_csv(text, options.delimiter);
  if (rows.empty()) throw DataError("CSV input has no header row");
  const auto& header = rows.front();

  std::vector<int> column_of(schema.size(), -1);
  for (std::size_t h = 0; h < header.size(); ++h) {
    bool known = false;
    for (std::size_t s = 0; s < schema.size(); ++s) {
      if (schema[s].name == header[h]) {
        if (column_of[s] != -1) throw DataError("column '" + header[h] + "' appears twice in the header");
        column_of[s] = static_cast<int>(h);
        known = true;
      }
    }
    if (!known) throw DataError("column '" + header[h] + "' (header position " + std::to_string(h + 1) + ") is not declared in the schema");
  }
  for (std::size_t s = 0; s < schema.size(); ++s) {
    if (column_of[s] == -1) throw DataError("schema column '" + schema[s].name + "' missing from the CSV header");
  }

  const auto n = static_cast<Index>(rows.size() - 1);
  const auto p = static_cast<Index>(schema.size());
  Dataset data = make_dataset(MatX::Zero(n, p), schema);
  for (Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i + 1)];
    if (row.size() != header.size()) {
      throw DataError("row " + std::to_string(i + 2) + " has " + std::to_string(row.size()) + " fields, expected " +
                      std::to_string(header.size()));
    }
    for (Index c = 0; c < p; ++c) {
      const std::string& cell = row[static_cast<std::size_t>(column_of[static_cast<std::size_t>(c)])];
      if (cell == options.missing_token) {
        data.missing(i, c) = true;
        data.values(i, c) = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      double value = 0.0;
      if (!parse_number(cell, value)) {
        throw DataError("non-numeric cell '" + cell + "' at row " + std::to_string(i + 2) + ", column '" +
                        schema[static_cast<std::size_t>(c)].name + "'");
      }
      data.values(i, c) = value;
    }
  }
  return data;
}

Dataset load_csv(const std::string& path, const std::string& schema_path, const CsvOptions& options) {
  return load_csv_text(read_text_file(path), read_schema_file(schema_path), options);
}

namespace {

std::string quote_if_needed(const std::string& s, char delimiter) {
  if (s.find_first_of(std::string{delimiter, '"', '\n', '\r'}) == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string format_csv(const Dataset& data, const CsvOptions& options) {
  std::ostringstream os;
  for (std::size_t c = 0; c < data.schema.size(); ++c) {
    if (c > 0) os << options.delimiter;
    os << quote_if_needed(data.schema[c].name, options.delimiter);
  }
  os << '\n';
  char buffer[64];
  for (Index i = 0; i < data.rows(); ++i) {
    for (Index c = 0; c < data.cols(); ++c) {
      if (c > 0) os << options.delimiter;
      if (data.missing.size() > 0 && data.missing(i, c)) {
        os << options.missing_token;
      } else {
        std::snprintf(buffer, sizeof buffer, "%.17g", data.values(i, c));
        os << buffer;
      }
    }
    os << '\n';
  }
  return os.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << text;
  if (!out) throw DataError("failed writing '" + path + "'");
}

}  // namespace qmgm
