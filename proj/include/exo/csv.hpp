#pragma once

#include <string>
#include <vector>

namespace exo::csv {

// Fixed dialect: comma separator, '.' decimal point, LF line endings,
// mandatory header row.

std::string format_double(double v);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Reads an all-numeric table and checks the header verbatim.
Table read_numeric(const std::string& path,
                   const std::vector<std::string>& expected_header);

void write(const std::string& path, const std::vector<std::string>& header,
           const std::vector<std::vector<std::string>>& rows);

}  // namespace exo::csv
