#pragma once

#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "bsmcpd/bsm.hpp"
#include "bsmcpd/geo.hpp"

namespace bsmcpd {

enum class FeatureKind { MVS, MVT, DIST };

inline std::string to_string(FeatureKind k) {
  switch (k) {
    case FeatureKind::MVS: return "mvs";
    case FeatureKind::MVT: return "mvt";
    case FeatureKind::DIST: return "dist";
  }
  return "?";
}

inline FeatureKind feature_from_string(std::string_view s) {
  if (s == "mvs" || s == "MVS") return FeatureKind::MVS;
  if (s == "mvt" || s == "MVT") return FeatureKind::MVT;
  if (s == "dist" || s == "DIST") return FeatureKind::DIST;
  throw std::invalid_argument("unknown feature kind: " + std::string(s));
}

/// One point of a deduced time series, attributed to a vehicle.
struct FeatureSample {
  std::size_t index = 0;
  double timestamp = 0.0;
  long long vehicle_id = 0;
  double value = 0.0;       // msgs/s (MVS), msgs/interval (MVT), metres (DIST)
  FeatureKind kind = FeatureKind::MVS;
};

struct FeatureSeries {
  FeatureKind kind = FeatureKind::MVS;
  double interval = 1.0;    // aggregation window in seconds
  std::vector<FeatureSample> samples;
};

namespace detail {

inline void require_sorted(std::span<const BsmRecord> records) {
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (to_deci(records[i].timestamp) < to_deci(records[i - 1].timestamp))
      throw std::invalid_argument("records must be time-sorted");
  }
}

/// Message counts per (window, vehicle), keyed and emitted in ascending
/// (window, vehicle_id) order.
inline std::map<std::pair<long long, long long>, long long>
bucket_counts(std::span<const BsmRecord> records, double width) {
  require_sorted(records);
  const long long w = to_deci(width);
  if (w <= 0) throw std::invalid_argument("window must be > 0");
  std::map<std::pair<long long, long long>, long long> counts;
  for (const auto& r : records) {
    long long bucket = to_deci(r.timestamp) / w;
    ++counts[{bucket, r.vehicle_id}];
  }
  return counts;
}

}  // namespace detail

/// Average message frequency per vehicle per window (default one second):
/// count of the vehicle's messages in the window divided by window length.
/// Vehicles absent from a window produce no sample.
inline FeatureSeries extract_mvs(std::span<const BsmRecord> records, double window = 1.0) {
  FeatureSeries out{FeatureKind::MVS, window, {}};
  const long long w = to_deci(window);
  std::size_t idx = 0;
  for (const auto& [key, count] : detail::bucket_counts(records, window)) {
    out.samples.push_back({idx++, from_deci(key.first * w), key.second,
                           static_cast<double>(count) / window, FeatureKind::MVS});
  }
  return out;
}

/// Message count per vehicle per interval (default 0.1 s). A duplicated
/// identity shows up as a value of 2 in the shared interval.
inline FeatureSeries extract_mvt(std::span<const BsmRecord> records, double interval = 0.1) {
  FeatureSeries out{FeatureKind::MVT, interval, {}};
  const long long w = to_deci(interval);
  std::size_t idx = 0;
  for (const auto& [key, count] : detail::bucket_counts(records, interval)) {
    out.samples.push_back({idx++, from_deci(key.first * w), key.second,
                           static_cast<double>(count), FeatureKind::MVT});
  }
  return out;
}

/// Per-vehicle distance between consecutive reported positions, one sample
/// per record in trace order; a vehicle's first observation yields 0.
inline FeatureSeries extract_displacement(std::span<const BsmRecord> records,
                                          double diameter = kDefaultDiameter) {
  detail::require_sorted(records);
  FeatureSeries out{FeatureKind::DIST, 0.1, {}};
  std::unordered_map<long long, std::pair<double, double>> last_pos;
  std::size_t idx = 0;
  for (const auto& r : records) {
    double d = 0.0;
    auto it = last_pos.find(r.vehicle_id);
    if (it != last_pos.end())
      d = geodesic_distance(it->second.first, it->second.second, r.latitude,
                            r.longitude, diameter);
    last_pos[r.vehicle_id] = {r.latitude, r.longitude};
    out.samples.push_back({idx++, r.timestamp, r.vehicle_id, d, FeatureKind::DIST});
  }
  return out;
}

inline FeatureSeries extract_feature(std::span<const BsmRecord> records, FeatureKind kind,
                                     double diameter = kDefaultDiameter) {
  switch (kind) {
    case FeatureKind::MVS: return extract_mvs(records);
    case FeatureKind::MVT: return extract_mvt(records);
    case FeatureKind::DIST: return extract_displacement(records, diameter);
  }
  throw std::invalid_argument("bad feature kind");
}

inline constexpr std::string_view kSeriesHeader = "index,timestamp,vehicle_id,kind,value";

inline void write_series_csv(const FeatureSeries& series, std::ostream& out) {
  out << kSeriesHeader << '\n';
  for (const auto& s : series.samples) {
    out << s.index << ',' << detail::format_time(s.timestamp) << ',' << s.vehicle_id
        << ',' << to_string(s.kind) << ',' << detail::format_double(s.value) << '\n';
  }
}

}  // namespace bsmcpd
