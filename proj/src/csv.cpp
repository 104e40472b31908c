#include "exo/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "exo/errors.hpp"

namespace exo::csv {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  fields.push_back(field);
  return fields;
}

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += fields[i];
  }
  return out;
}

}  // namespace

Table read_numeric(const std::string& path,
                   const std::vector<std::string>& expected_header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) {
    throw IoError(path + ": empty file, expected header '" +
                  join(expected_header) + "'");
  }
  Table table;
  table.header = split_line(line);
  if (table.header != expected_header) {
    throw IoError(path + ": header mismatch, expected '" +
                  join(expected_header) + "' got '" + line + "'");
  }

  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != expected_header.size()) {
      throw IoError(path + ":" + std::to_string(line_no) +
                    ": wrong number of fields");
    }
    std::vector<double> row(fields.size());
    for (size_t i = 0; i < fields.size(); ++i) {
      const char* begin = fields[i].data();
      const char* end = begin + fields[i].size();
      auto [ptr, ec] = std::from_chars(begin, end, row[i]);
      if (ec != std::errc{} || ptr != end) {
        throw IoError(path + ":" + std::to_string(line_no) +
                      ": cannot parse '" + fields[i] + "' as a number");
      }
    }
    table.rows.push_back(std::move(row));
  }
  if (table.rows.empty()) {
    throw IoError(path + ": no data rows");
  }
  return table;
}

void write(const std::string& path, const std::vector<std::string>& header,
           const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << join(header) << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) {
      throw IoError(path + ": row width differs from header");
    }
    out << join(row) << '\n';
  }
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace exo::csv
