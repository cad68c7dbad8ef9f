#pragma once

#include "bco/errors.hpp"

namespace bco {

/// Knobs of the continuous-time pure-death process. The horizon is large
/// enough that every edge is dead with overwhelming probability by T.
struct BlackoutConfig {
  double horizon_T = 15.0;
  double epsilon_rate = 1e-9;  // lower clamp for predicted rates before log
  double epsilon_time = 1e-4;  // smallest observation time

  void validate() const {
    if (!(horizon_T > 0.0)) throw InvalidArgument("horizon_T must be positive");
    if (!(epsilon_rate > 0.0 && epsilon_rate < 1.0)) throw InvalidArgument("epsilon_rate must be in (0,1)");
    if (!(epsilon_time > 0.0 && epsilon_time < horizon_T))
      throw InvalidArgument("epsilon_time must be in (0, horizon_T)");
  }
};

}  // namespace bco
