#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "bsmcpd/common.hpp"

namespace bsmcpd {

enum class AttackKind { DOS, IMP, FAL };
enum class DetectorKind { EM, CUSUM, ACUSUM };
enum class AlarmSide { None, Upper, Lower };

inline std::string to_string(AttackKind a) {
  switch (a) {
    case AttackKind::DOS: return "dos";
    case AttackKind::IMP: return "imp";
    case AttackKind::FAL: return "fal";
  }
  return "?";
}

inline AttackKind attack_from_string(std::string_view s) {
  if (s == "dos" || s == "DOS") return AttackKind::DOS;
  if (s == "imp" || s == "IMP") return AttackKind::IMP;
  if (s == "fal" || s == "FAL") return AttackKind::FAL;
  throw std::invalid_argument("unknown attack kind: " + std::string(s));
}

inline std::string to_string(DetectorKind d) {
  switch (d) {
    case DetectorKind::EM: return "em";
    case DetectorKind::CUSUM: return "cusum";
    case DetectorKind::ACUSUM: return "acusum";
  }
  return "?";
}

inline DetectorKind detector_from_string(std::string_view s) {
  if (s == "em" || s == "EM") return DetectorKind::EM;
  if (s == "cusum" || s == "CUSUM") return DetectorKind::CUSUM;
  if (s == "acusum" || s == "aCUSUM" || s == "ACUSUM") return DetectorKind::ACUSUM;
  throw std::invalid_argument("unknown detector kind: " + std::string(s));
}

/// Per-sample verdict. The score is the detector's decision statistic
/// (responsibility for EM, the larger one-sided sum for the CUSUMs); alarm
/// is true only when the score strictly exceeded the configured threshold.
struct DetectionEvent {
  std::size_t index = 0;
  double timestamp = 0.0;
  long long vehicle_id = 0;
  DetectorKind detector = DetectorKind::EM;
  double score = 0.0;
  double c_plus = 0.0;
  double c_minus = 0.0;
  bool alarm = false;
  AlarmSide side = AlarmSide::None;
};

inline constexpr std::string_view kEventsHeader =
    "index,timestamp,vehicle_id,detector,score,c_plus,c_minus,alarm";

inline void write_events_csv(const std::vector<DetectionEvent>& events, std::ostream& out) {
  out << kEventsHeader << '\n';
  for (const auto& e : events) {
    out << e.index << ',' << detail::format_time(e.timestamp) << ',' << e.vehicle_id
        << ',' << to_string(e.detector) << ',' << detail::format_double(e.score) << ','
        << detail::format_double(e.c_plus) << ',' << detail::format_double(e.c_minus)
        << ',' << (e.alarm ? 1 : 0) << '\n';
  }
}

inline std::vector<DetectionEvent> read_events_csv(std::istream& in) {
  std::vector<DetectionEvent> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != kEventsHeader)
        throw std::runtime_error("events csv: bad header");
      continue;
    }
    if (line.empty()) continue;
    auto f = detail::split_csv_line(line);
    if (f.size() != 8) throw std::runtime_error("events csv: bad row at line " + std::to_string(line_no));
    DetectionEvent e;
    long long idx = 0, alarm = 0;
    if (!detail::parse_ll(f[0], idx) || !detail::parse_double(f[1], e.timestamp) ||
        !detail::parse_ll(f[2], e.vehicle_id) || !detail::parse_double(f[4], e.score) ||
        !detail::parse_double(f[5], e.c_plus) || !detail::parse_double(f[6], e.c_minus) ||
        !detail::parse_ll(f[7], alarm))
      throw std::runtime_error("events csv: bad row at line " + std::to_string(line_no));
    e.index = static_cast<std::size_t>(idx);
    e.detector = detector_from_string(f[3]);
    e.alarm = alarm != 0;
    out.push_back(e);
  }
  return out;
}

}  // namespace bsmcpd
