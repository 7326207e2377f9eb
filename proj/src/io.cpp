#include "cxyz/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace cxyz::io {

std::string format_double(double v) {
  char buf[40];
  // round-trip at the shortest length that reparses exactly
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Table::Table(std::vector<std::string> columns, std::vector<std::string> comments)
    : columns_(std::move(columns)), comments_(std::move(comments)) {}

void Table::add_row(const std::vector<double>& values) {
  if (values.size() != columns_.size())
    throw std::invalid_argument("Table: row width does not match header");
  rows_.push_back(values);
}

std::string Table::to_csv() const {
  std::string out;
  for (const auto& c : comments_) out += "# " + c + "\n";
  for (size_t i = 0; i < columns_.size(); ++i) {
    out += columns_[i];
    out += (i + 1 < columns_.size()) ? ',' : '\n';
  }
  for (const auto& row : rows_) {
    for (size_t i = 0; i < row.size(); ++i) {
      out += format_double(row[i]);
      out += (i + 1 < row.size()) ? ',' : '\n';
    }
  }
  return out;
}

Json Table::to_json() const {
  Json arr = Json::array();
  for (const auto& row : rows_) {
    Json obj;
    for (size_t i = 0; i < row.size(); ++i) obj[columns_[i]] = row[i];
    arr.push_back(std::move(obj));
  }
  return arr;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
}

void write_json_file(const std::filesystem::path& path, const Json& value) {
  write_text_file(path, value.dump(2) + "\n");
}

}  // namespace cxyz::io
