#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bsmcpd/common.hpp"

namespace bsmcpd {

/// One broadcast safety message as recorded by the roadside unit.
struct BsmRecord {
  double timestamp = 0.0;       // seconds, 0.1 s resolution
  long long vehicle_id = 0;     // non-negative
  double latitude = 0.0;        // degrees, [-90, 90]
  double longitude = 0.0;       // degrees, [-180, 180]
  double speed = 0.0;           // m/s, >= 0

  bool operator==(const BsmRecord&) const = default;
};

inline constexpr std::string_view kTraceHeader =
    "timestamp,vehicle_id,latitude,longitude,speed";

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline BsmRecord parse_trace_row(std::string_view row, std::size_t line_no) {
  auto fields = split_csv_line(row);
  if (fields.size() != 5)
    throw ParseError(line_no, "expected 5 fields, got " + std::to_string(fields.size()));
  BsmRecord r;
  if (!parse_double(fields[0], r.timestamp))
    throw ParseError(line_no, "bad timestamp '" + std::string(fields[0]) + "'");
  if (!parse_ll(fields[1], r.vehicle_id))
    throw ParseError(line_no, "bad vehicle_id '" + std::string(fields[1]) + "'");
  if (!parse_double(fields[2], r.latitude))
    throw ParseError(line_no, "bad latitude '" + std::string(fields[2]) + "'");
  if (!parse_double(fields[3], r.longitude))
    throw ParseError(line_no, "bad longitude '" + std::string(fields[3]) + "'");
  if (!parse_double(fields[4], r.speed))
    throw ParseError(line_no, "bad speed '" + std::string(fields[4]) + "'");
  if (r.timestamp < 0.0) throw ParseError(line_no, "timestamp must be >= 0");
  if (r.vehicle_id < 0) throw ParseError(line_no, "vehicle_id must be >= 0");
  if (r.latitude < -90.0 || r.latitude > 90.0)
    throw ParseError(line_no, "latitude out of range");
  if (r.longitude < -180.0 || r.longitude > 180.0)
    throw ParseError(line_no, "longitude out of range");
  if (r.speed < 0.0) throw ParseError(line_no, "speed must be >= 0");
  return r;
}

}  // namespace detail

/// Parses the canonical trace CSV. An empty stream yields an empty list;
/// otherwise the header line is required. Throws ParseError naming the
/// offending line.
inline std::vector<BsmRecord> parse_trace(std::istream& in) {
  std::vector<BsmRecord> out;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != kTraceHeader)
        throw ParseError(1, "missing trace header '" + std::string(kTraceHeader) + "'");
      saw_header = true;
      continue;
    }
    if (line.empty()) continue;
    out.push_back(detail::parse_trace_row(line, line_no));
  }
  (void)saw_header;
  return out;
}

inline std::vector<BsmRecord> parse_trace(const std::string& text) {
  std::istringstream in(text);
  return parse_trace(in);
}

inline std::vector<BsmRecord> parse_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  return parse_trace(in);
}

inline void serialize_trace(const std::vector<BsmRecord>& records, std::ostream& out) {
  out << kTraceHeader << '\n';
  for (const auto& r : records) {
    out << detail::format_time(r.timestamp) << ',' << r.vehicle_id << ','
        << detail::format_double(r.latitude) << ','
        << detail::format_double(r.longitude) << ','
        << detail::format_double(r.speed) << '\n';
  }
}

inline std::string serialize_trace(const std::vector<BsmRecord>& records) {
  std::ostringstream out;
  serialize_trace(records, out);
  return out.str();
}

inline void write_trace_file(const std::vector<BsmRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write trace file: " + path);
  serialize_trace(records, out);
}

}  // namespace bsmcpd
