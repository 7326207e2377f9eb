#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace cxyz::io {

using Json = nlohmann::ordered_json;

// Shortest round-trip decimal rendering; identical inputs give identical
// bytes, which the output formats rely on.
std::string format_double(double v);

// Column-oriented table with '#' header comment lines. Every file states its
// unit conventions (angles rad, file frequencies Hz).
class Table {
 public:
  Table(std::vector<std::string> columns, std::vector<std::string> comments);

  void add_row(const std::vector<double>& values);
  size_t rows() const { return rows_.size(); }

  std::string to_csv() const;
  Json to_json() const;  // array of column->value objects

 private:
  std::vector<std::string> columns_;
  std::vector<std::string> comments_;
  std::vector<std::vector<double>> rows_;
};

void write_text_file(const std::filesystem::path& path, const std::string& text);
void write_json_file(const std::filesystem::path& path, const Json& value);

}  // namespace cxyz::io
