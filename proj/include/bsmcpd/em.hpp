#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "bsmcpd/common.hpp"
#include "bsmcpd/features.hpp"
#include "bsmcpd/gaussian.hpp"
#include "bsmcpd/types.hpp"

namespace bsmcpd {

/// Mixing proportion is kept away from the degenerate endpoints so a long
/// run of one-sided responsibilities cannot permanently disable a component.
inline constexpr double kPiClamp = 1e-9;

struct EmConfig {
  GaussParams theta1{10.0, 1e-4};   // normal state
  GaussParams theta2{15.0, 5.0};    // attack state
  double pi = 0.75;                 // abnormal proportion P(attack)
  std::size_t window = 10;          // N
  std::size_t iterations = 10;      // EM rounds per new observation
  std::size_t seed_normal = 7;      // window slots pre-seeded from theta1
  std::size_t seed_abnormal = 3;    // window slots pre-seeded from theta2
  double alarm_threshold = 1e-3;
  double sigma_floor = 1e-6;
  std::uint64_t seed = kDefaultSeed;

  void validate() const {
    if (window < 2) throw std::invalid_argument("EmConfig: window must be >= 2");
    if (iterations < 1) throw std::invalid_argument("EmConfig: iterations must be >= 1");
    if (!(alarm_threshold > 0.0 && alarm_threshold < 1.0) && alarm_threshold != 1.0)
      throw std::invalid_argument("EmConfig: alarm_threshold must be in (0, 1]");
    if (seed_normal + seed_abnormal != window)
      throw std::invalid_argument("EmConfig: seed split must fill the window");
    if (!(pi >= 0.0 && pi <= 1.0)) throw std::invalid_argument("EmConfig: pi in [0,1]");
    if (theta1.sigma <= 0.0 || theta2.sigma <= 0.0)
      throw std::invalid_argument("EmConfig: sigma must be > 0");
  }
};

/// Five mixture parameters plus the observation window they were fitted on.
struct MixtureState {
  GaussParams theta1;
  GaussParams theta2;
  double pi = 0.5;
  std::vector<double> window;
  double loglik = 0.0;
};

/// g(y) = (1-pi) phi1(y) + pi phi2(y), evaluated in linear space.
inline double mixture_density(double y, const MixtureState& s) {
  return (1.0 - s.pi) * normal_pdf(y, s.theta1) + s.pi * normal_pdf(y, s.theta2);
}

/// Posterior probability that y came from the attack component,
/// computed via log-sum-exp so widely separated components cannot underflow.
inline double responsibility(double y, const MixtureState& s) {
  if (s.pi <= 0.0) return 0.0;
  if (s.pi >= 1.0) return 1.0;
  double l1 = std::log1p(-s.pi) + log_normal_pdf(y, s.theta1);
  double l2 = std::log(s.pi) + log_normal_pdf(y, s.theta2);
  double m = std::max(l1, l2);
  double e1 = std::exp(l1 - m);
  double e2 = std::exp(l2 - m);
  return e2 / (e1 + e2);
}

/// Window log-likelihood (sum of mixture log-densities), log-sum-exp form.
inline double window_loglik(std::span<const double> window, const MixtureState& s) {
  double total = 0.0;
  for (double y : window) {
    double l1 = (s.pi < 1.0 ? std::log1p(-s.pi) : -INFINITY) + log_normal_pdf(y, s.theta1);
    double l2 = (s.pi > 0.0 ? std::log(s.pi) : -INFINITY) + log_normal_pdf(y, s.theta2);
    double m = std::max(l1, l2);
    total += m + std::log(std::exp(l1 - m) + std::exp(l2 - m));
  }
  return total;
}

/// Runs `iterations` E/M rounds on the window starting from `init`.
///
/// M-step guards:
///  - a component whose responsibility mass vanishes keeps its parameters
///    (nothing to estimate from);
///  - fitted sigmas are clamped to sigma_floor;
///  - if both refitted components land on the same floored point (an
///    all-identical window makes the two-component fit unidentifiable),
///    the attack component keeps its previous parameters.
inline MixtureState em_fit_window(std::span<const double> window, const MixtureState& init,
                                  std::size_t iterations, double sigma_floor = 1e-6) {
  if (window.empty()) throw std::invalid_argument("em_fit_window: empty window");
  const double n = static_cast<double>(window.size());
  MixtureState s = init;
  std::vector<double> gamma(window.size());
  for (std::size_t it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i < window.size(); ++i)
      gamma[i] = responsibility(window[i], s);
    double sum_g = 0.0;
    for (double g : gamma) sum_g += g;
    const double sum_1mg = n - sum_g;

    GaussParams next1 = s.theta1;
    GaussParams next2 = s.theta2;
    if (sum_g > 1e-12) {
      double mu = 0.0;
      for (std::size_t i = 0; i < window.size(); ++i) mu += gamma[i] * window[i];
      mu /= sum_g;
      double var = 0.0;
      for (std::size_t i = 0; i < window.size(); ++i)
        var += gamma[i] * (window[i] - mu) * (window[i] - mu);
      var /= sum_g;
      next2 = {mu, std::max(std::sqrt(var), sigma_floor)};
    }
    if (sum_1mg > 1e-12) {
      double mu = 0.0;
      for (std::size_t i = 0; i < window.size(); ++i) mu += (1.0 - gamma[i]) * window[i];
      mu /= sum_1mg;
      double var = 0.0;
      for (std::size_t i = 0; i < window.size(); ++i)
        var += (1.0 - gamma[i]) * (window[i] - mu) * (window[i] - mu);
      var /= sum_1mg;
      next1 = {mu, std::max(std::sqrt(var), sigma_floor)};
    }
    const double scale = std::max(1.0, std::abs(next1.mu));
    if (std::abs(next1.mu - next2.mu) <= 1e-12 * scale && next1.sigma <= sigma_floor &&
        next2.sigma <= sigma_floor) {
      next2 = s.theta2;
    }
    s.theta1 = next1;
    s.theta2 = next2;
    s.pi = std::clamp(sum_g / n, kPiClamp, 1.0 - kPiClamp);
    s.loglik = window_loglik(window, s);
  }
  s.window.assign(window.begin(), window.end());
  return s;
}

/// Sliding-window mixture detector. Each new observation evicts the oldest
/// window slot and refits the five parameters from the configured
/// initialisation; the alarm score is the fitted responsibility of the new
/// observation.
class EmDetector {
 public:
  explicit EmDetector(EmConfig cfg) : cfg_(cfg) {
    cfg_.validate();
    Rng rng(cfg_.seed);
    window_.reserve(cfg_.window);
    for (std::size_t i = 0; i < cfg_.seed_normal; ++i)
      window_.push_back(rng.normal(cfg_.theta1.mu, cfg_.theta1.sigma));
    for (std::size_t i = 0; i < cfg_.seed_abnormal; ++i)
      window_.push_back(rng.normal(cfg_.theta2.mu, cfg_.theta2.sigma));
    state_ = {cfg_.theta1, cfg_.theta2, cfg_.pi, window_, 0.0};
    state_.loglik = window_loglik(window_, state_);
  }

  DetectionEvent step(const FeatureSample& sample) {
    if (!std::isfinite(sample.value))
      throw std::invalid_argument("EmDetector: non-finite sample value");
    window_.erase(window_.begin());
    window_.push_back(sample.value);
    MixtureState init{cfg_.theta1, cfg_.theta2, cfg_.pi, {}, 0.0};
    state_ = em_fit_window(window_, init, cfg_.iterations, cfg_.sigma_floor);
    double score = responsibility(sample.value, state_);
    DetectionEvent e;
    e.index = sample.index;
    e.timestamp = sample.timestamp;
    e.vehicle_id = sample.vehicle_id;
    e.detector = DetectorKind::EM;
    e.score = score;
    e.alarm = score > cfg_.alarm_threshold;
    e.side = e.alarm ? AlarmSide::Upper : AlarmSide::None;
    return e;
  }

  const MixtureState& state() const { return state_; }
  const EmConfig& config() const { return cfg_; }

 private:
  EmConfig cfg_;
  std::vector<double> window_;
  MixtureState state_;
};

}  // namespace bsmcpd
