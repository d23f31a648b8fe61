#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pcs/matrix.hpp"

namespace pcs {

/// Numeric matrix read from CSV; rows are observations. A first record with
/// any non-numeric field is taken as the header.
struct CsvMatrix {
  Matrix values;
  std::vector<std::string> header;
};

/// RFC 4180 records (quoted fields, doubled quotes, CRLF or LF endings).
std::vector<std::vector<std::string>> parse_csv_records(std::string_view text);

/// Throws ParseError on empty input, ragged rows or non-numeric cells.
CsvMatrix parse_csv_matrix(std::string_view text);
CsvMatrix read_csv_matrix(const std::string& path);

/// Shortest representation that round-trips to the same double.
std::string format_double(double value);

std::string csv_escape(std::string_view field);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace pcs
