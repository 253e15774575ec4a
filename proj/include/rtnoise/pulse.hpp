#pragma once

#include <string>
#include <vector>

#include "rtnoise/operators.hpp"

namespace rtnoise {

struct PulseSegment {
  double duration;
  double amplitude;
};

/// Piecewise-constant control a(t). Negative amplitudes encode rotations
/// about -x within the single control field; |a| <= a_max throughout.
struct ControlPulse {
  std::vector<PulseSegment> segments;
  double a_max = 1.0;

  double duration() const;
  /// Control amplitude at time t; zero past the end of the pulse.
  double amplitude_at(double t) const;
  void validate() const;
};

/// Constant-amplitude pieces covering [t0, t1], split at pulse breakpoints.
std::vector<PulseSegment> constant_segments(const ControlPulse& pulse, double t0, double t1);

/// Plain pi rotation about x: one segment at full amplitude, duration pi/a_max.
ControlPulse pi_pulse(double a_max);

/// CORPSE NOT: x rotations of 7pi/3, -5pi/3, pi/3 at full amplitude.
ControlPulse corpse_not(double a_max);

/// Short CORPSE NOT: x rotations of pi/3, -5pi/3, pi/3.
ControlPulse short_corpse_not(double a_max);

/// Area-preserving resampling onto n uniform segments spanning total_time.
/// Segments straddling a breakpoint get the time-averaged amplitude.
ControlPulse resampled(const ControlPulse& pulse, int n_segments, double total_time);

/// Sign changes between consecutive segments, ignoring amplitudes below
/// eps * a_max (near-zero lobes carry no sign information).
int sign_changes(const ControlPulse& pulse, double eps = 1e-3);

}  // namespace rtnoise
