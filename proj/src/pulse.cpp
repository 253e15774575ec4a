#include "rtnoise/pulse.hpp"

#include <cmath>
#include <numbers>

namespace rtnoise {

double ControlPulse::duration() const {
  double t = 0.0;
  for (const auto& s : segments) t += s.duration;
  return t;
}

double ControlPulse::amplitude_at(double t) const {
  double acc = 0.0;
  for (const auto& s : segments) {
    acc += s.duration;
    if (t < acc) return s.amplitude;
  }
  return 0.0;
}

void ControlPulse::validate() const {
  if (segments.empty() || duration() <= 0.0) {
    throw std::invalid_argument("pulse must have positive total duration");
  }
  for (const auto& s : segments) {
    if (s.duration <= 0.0) throw std::invalid_argument("segment duration must be positive");
    if (std::abs(s.amplitude) > a_max + 1e-12) {
      throw std::invalid_argument("segment amplitude exceeds a_max");
    }
  }
}

std::vector<PulseSegment> constant_segments(const ControlPulse& pulse, double t0, double t1) {
  if (t1 < t0) throw std::invalid_argument("constant_segments: t1 < t0");
  std::vector<PulseSegment> out;
  if (t1 == t0) return out;

  // Breakpoints of the pulse clipped to [t0, t1]; past the end a(t) = 0.
  std::vector<double> cuts{t0};
  double acc = 0.0;
  for (const auto& s : pulse.segments) {
    acc += s.duration;
    if (acc > t0 && acc < t1) cuts.push_back(acc);
  }
  cuts.push_back(t1);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    out.push_back({cuts[i + 1] - cuts[i], pulse.amplitude_at(mid)});
  }
  return out;
}

ControlPulse pi_pulse(double a_max) {
  if (a_max <= 0.0) throw std::invalid_argument("a_max must be positive");
  return {{{std::numbers::pi / a_max, a_max}}, a_max};
}

ControlPulse corpse_not(double a_max) {
  if (a_max <= 0.0) throw std::invalid_argument("a_max must be positive");
  const double pi = std::numbers::pi;
  return {{{7.0 * pi / 3.0 / a_max, a_max},
           {5.0 * pi / 3.0 / a_max, -a_max},
           {pi / 3.0 / a_max, a_max}},
          a_max};
}

ControlPulse short_corpse_not(double a_max) {
  if (a_max <= 0.0) throw std::invalid_argument("a_max must be positive");
  const double pi = std::numbers::pi;
  return {{{pi / 3.0 / a_max, a_max},
           {5.0 * pi / 3.0 / a_max, -a_max},
           {pi / 3.0 / a_max, a_max}},
          a_max};
}

ControlPulse resampled(const ControlPulse& pulse, int n_segments, double total_time) {
  if (n_segments < 1 || total_time <= 0.0) {
    throw std::invalid_argument("resampled: need n_segments >= 1 and total_time > 0");
  }
  const double h = total_time / n_segments;
  ControlPulse out;
  out.a_max = pulse.a_max;
  out.segments.reserve(n_segments);
  for (int i = 0; i < n_segments; ++i) {
    double area = 0.0;
    for (const auto& piece : constant_segments(pulse, i * h, (i + 1) * h)) {
      area += piece.duration * piece.amplitude;
    }
    out.segments.push_back({h, area / h});
  }
  return out;
}

int sign_changes(const ControlPulse& pulse, double eps) {
  const double floor = eps * pulse.a_max;
  int changes = 0;
  double last = 0.0;
  for (const auto& s : pulse.segments) {
    if (std::abs(s.amplitude) <= floor) continue;
    if (last != 0.0 && s.amplitude * last < 0.0) ++changes;
    last = s.amplitude;
  }
  return changes;
}

}  // namespace rtnoise
