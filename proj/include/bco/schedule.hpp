#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "bco/config.hpp"
#include "bco/errors.hpp"

namespace bco {

enum class ScheduleVariant { original, improved, more_improved, custom };

inline const char* to_string(ScheduleVariant v) {
  switch (v) {
    case ScheduleVariant::original: return "original";
    case ScheduleVariant::improved: return "improved";
    case ScheduleVariant::more_improved: return "more_improved";
    case ScheduleVariant::custom: return "custom";
  }
  return "?";
}

/// Strictly increasing observation times within (0, horizon_T]. Drives both
/// training-time corruption draws and reverse-time inference.
struct Schedule {
  std::vector<double> times;
  ScheduleVariant variant = ScheduleVariant::custom;
  double alpha = 0.2;  // used by more_improved only

  int K() const { return static_cast<int>(times.size()); }
};

/// Per-edge corruption standard deviation at time t: an active edge survives
/// with p = e^{-t}, so its state has std sqrt(p(1-p)). Peaks at 0.5 when
/// p = 1/2, i.e. t = ln 2.
inline double std_of_t(double t) {
  if (t < 0.0) throw InvalidArgument("time must be nonnegative");
  const double p = std::exp(-t);
  return std::sqrt(p * (-std::expm1(-t)));
}

enum class StdBranch { before_peak, after_peak };

/// Inverse of std_of_t on one side of the peak. Solving sqrt(p(1-p)) = s
/// gives p = (1 +- sqrt(1-4s^2))/2; the plus root lies before the peak
/// (t < ln 2), the minus root after. The result is clamped into
/// [epsilon_time, horizon_T].
inline double invert_std(double s, StdBranch branch, const BlackoutConfig& config = {}) {
  if (!(s >= 0.0 && s <= 0.5)) throw InvalidArgument("std target must be in [0, 0.5]");
  const double q = std::sqrt(std::max(0.0, 1.0 - 4.0 * s * s));
  // minus root written as 2s^2/(1+q) to avoid cancellation near s = 0
  const double p_minus = 2.0 * s * s / (1.0 + q);
  double t;
  if (branch == StdBranch::before_peak) {
    t = -std::log1p(-p_minus);  // p_plus = 1 - p_minus
  } else {
    t = (p_minus > 0.0) ? -std::log(p_minus) : std::numeric_limits<double>::infinity();
  }
  return std::min(std::max(t, config.epsilon_time), config.horizon_T);
}

namespace detail {

/// Clamping can collapse neighbors; bump each offender to the next
/// representable value above its predecessor.
inline void repair_monotone(std::vector<double>& times) {
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double floor = std::nextafter(times[k - 1], std::numeric_limits<double>::infinity());
    if (times[k] < floor) times[k] = floor;
  }
}

}  // namespace detail

/// K observation times uniformly spaced over [epsilon_time, horizon_T].
inline Schedule original_schedule(int K, const BlackoutConfig& config = {}) {
  if (K < 2) throw InvalidArgument("original schedule needs K >= 2");
  config.validate();
  Schedule s;
  s.variant = ScheduleVariant::original;
  s.times.resize(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    const double u = static_cast<double>(k) / (K - 1);
    s.times[k] = config.epsilon_time + u * (config.horizon_T - config.epsilon_time);
  }
  s.times.back() = config.horizon_T;
  return s;
}

/// Times chosen so the corruption std profile is triangular over the index
/// axis: linear from std_of_t(epsilon_time) up to the 0.5 peak at index
/// ceil(K/2), then linear down to std_of_t(horizon_T). The ascending half
/// maps through the before-peak branch, the descending half through the
/// after-peak branch; that assignment is what keeps the times increasing.
inline Schedule improved_schedule(int K, const BlackoutConfig& config = {}) {
  if (K < 3) throw InvalidArgument("improved schedule needs K >= 3");
  config.validate();
  const double s_lo = std_of_t(config.epsilon_time);
  const double s_hi_end = std_of_t(config.horizon_T);
  const int mid = (K + 1) / 2;  // 1-based peak index

  Schedule s;
  s.variant = ScheduleVariant::improved;
  s.times.resize(static_cast<std::size_t>(K));
  for (int k = 1; k <= K; ++k) {
    double target;
    StdBranch branch;
    if (k <= mid) {
      target = s_lo + (0.5 - s_lo) * static_cast<double>(k - 1) / (mid - 1);
      branch = StdBranch::before_peak;
    } else {
      target = 0.5 + (s_hi_end - 0.5) * static_cast<double>(k - mid) / (K - mid);
      branch = StdBranch::after_peak;
    }
    s.times[k - 1] = invert_std(target, branch, config);
  }
  detail::repair_monotone(s.times);
  return s;
}

/// Refinement of the triangular profile: the outer alpha fractions of the
/// index axis ramp only up to half the peak std (0.25), so the bulk of the
/// indices — a 1-2*alpha fraction — sits at targets of at least half-max,
/// concentrating observations where reconstruction is hardest.
inline Schedule more_improved_schedule(int K, double alpha = 0.2, const BlackoutConfig& config = {}) {
  if (K < 5) throw InvalidArgument("more_improved schedule needs K >= 5");
  if (!(alpha > 0.0 && alpha < 0.5)) throw InvalidArgument("alpha must be in (0, 0.5)");
  config.validate();
  const double s_lo = std_of_t(config.epsilon_time);
  const double s_hi_end = std_of_t(config.horizon_T);
  const double half = 0.25;

  Schedule s;
  s.variant = ScheduleVariant::more_improved;
  s.alpha = alpha;
  s.times.resize(static_cast<std::size_t>(K));
  for (int k = 1; k <= K; ++k) {
    const double u = static_cast<double>(k - 1) / (K - 1);
    double target;
    if (u < alpha) {
      target = s_lo + (half - s_lo) * (u / alpha);
    } else if (u < 0.5) {
      target = half + (0.5 - half) * (u - alpha) / (0.5 - alpha);
    } else if (u <= 1.0 - alpha) {
      target = 0.5 + (half - 0.5) * (u - 0.5) / (0.5 - alpha);
    } else {
      target = half + (s_hi_end - half) * (u - (1.0 - alpha)) / alpha;
    }
    const StdBranch branch = (u < 0.5) ? StdBranch::before_peak : StdBranch::after_peak;
    s.times[k - 1] = invert_std(target, branch, config);
  }
  detail::repair_monotone(s.times);
  return s;
}

/// Checks monotonicity, bounds, and minimum length; throws ScheduleError
/// naming the first offending index.
inline void validate_schedule(const Schedule& schedule, const BlackoutConfig& config = {}) {
  config.validate();
  if (schedule.K() < 2) throw ScheduleError("schedule needs at least 2 times");
  for (int k = 0; k < schedule.K(); ++k) {
    const double t = schedule.times[k];
    if (!(t >= config.epsilon_time && t <= config.horizon_T))
      throw ScheduleError("bounds violation at index " + std::to_string(k));
    if (k > 0 && !(t > schedule.times[k - 1]))
      throw ScheduleError("monotonicity violation at index " + std::to_string(k));
  }
}

/// "k,t,std" rows; profile data for plotting and for the frames/bench tools.
inline void write_schedule_csv(const Schedule& schedule, std::ostream& out) {
  out << "k,t,std\n";
  char buf[80];
  for (int k = 0; k < schedule.K(); ++k) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g", k + 1, schedule.times[k], std_of_t(schedule.times[k]));
    out << buf << "\n";
  }
}

}  // namespace bco
