#pragma once

#include <cmath>

namespace bsmcpd {

struct GaussParams {
  double mu = 0.0;
  double sigma = 1.0;

  bool operator==(const GaussParams&) const = default;
};

inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;

inline double log_normal_pdf(double y, const GaussParams& g) {
  double z = (y - g.mu) / g.sigma;
  return -0.5 * z * z - std::log(g.sigma) - kLogSqrt2Pi;
}

inline double normal_pdf(double y, const GaussParams& g) {
  return std::exp(log_normal_pdf(y, g));
}

}  // namespace bsmcpd
