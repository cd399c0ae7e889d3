#pragma once

#include <algorithm>
#include <cmath>

namespace bsmcpd {

/// Diameter constant the displacement tables were generated with. The
/// physically correct value is Earth's diameter in metres
/// (12742 km = 1.2742e7); see the --earth-diameter-km CLI override.
inline constexpr double kDefaultDiameter = 1242.0;

/// Haversine distance with a configurable diameter constant:
///   d = D * asin(sqrt(a)),
///   a = 0.5 - cos(dLat*p)/2 + cos(p*lat1)*cos(p*lat2)*(1 - cos(dLon*p))/2
/// Total over valid coordinates, non-negative, symmetric in its endpoints.
inline double geodesic_distance(double lat1, double lon1, double lat2, double lon2,
                                double diameter = kDefaultDiameter) {
  constexpr double p = 3.14159265358979323846 / 180.0;
  double a = 0.5 - std::cos((lat2 - lat1) * p) / 2.0 +
             std::cos(p * lat1) * std::cos(p * lat2) *
                 (1.0 - std::cos((lon2 - lon1) * p)) / 2.0;
  a = std::clamp(a, 0.0, 1.0);
  return diameter * std::asin(std::sqrt(a));
}

}  // namespace bsmcpd
