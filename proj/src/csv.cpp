#include "pcs/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "pcs/error.hpp"

namespace pcs {

namespace {

bool parse_number(std::string_view s, double& out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace

std::vector<std::vector<std::string>> parse_csv_records(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    // A lone empty field is a blank line, not a record.
    if (!(record.size() == 1 && record.front().empty())) records.push_back(std::move(record));
    record.clear();
  };
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
    switch (c) {
      case '"':
        if (field_started && !field.empty()) throw Error(ErrorCode::ParseError, "stray quote inside field");
        quoted = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (quoted) throw Error(ErrorCode::ParseError, "unterminated quoted field");
  if (field_started || !field.empty() || !record.empty()) end_record();
  return records;
}

CsvMatrix parse_csv_matrix(std::string_view text) {
  auto records = parse_csv_records(text);
  if (records.empty()) throw Error(ErrorCode::ParseError, "empty CSV input");
  CsvMatrix out;
  std::size_t first = 0;
  double scratch = 0.0;
  for (const auto& f : records.front()) {
    if (!parse_number(f, scratch)) {
      out.header = records.front();
      first = 1;
      break;
    }
  }
  const std::size_t rows = records.size() - first;
  if (rows == 0) throw Error(ErrorCode::ParseError, "CSV has a header but no data rows");
  const std::size_t cols = records[first].size();
  if (!out.header.empty() && out.header.size() != cols) {
    throw Error(ErrorCode::ParseError, "header has " + std::to_string(out.header.size()) + " fields, data has " +
                                           std::to_string(cols));
  }
  out.values.resize(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& rec = records[first + r];
    if (rec.size() != cols) {
      throw Error(ErrorCode::ParseError, "row " + std::to_string(first + r + 1) + " has " +
                                             std::to_string(rec.size()) + " fields, expected " + std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      double v = 0.0;
      if (!parse_number(rec[c], v)) {
        throw Error(ErrorCode::ParseError, "row " + std::to_string(first + r + 1) + ", column " +
                                               std::to_string(c + 1) + ": '" + rec[c] + "' is not a number");
      }
      out.values(static_cast<Index>(r), static_cast<Index>(c)) = v;
    }
  }
  return out;
}

CsvMatrix read_csv_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv_matrix(buf.str());
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_escape(fields[i]);
  }
  out << '\n';
}

}  // namespace pcs
