/* Copyright 2026 The eitsim Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "eitsim/common.hpp"

namespace eitsim {

// Pulse timing for a sequence of identical gate windows separated by
// transport gaps.  Window w (1-based) starts at
//   offset(w) = (w-1)*(2*T_r + T_p + T_gap)
// and contains the marks
//   mark(w,j,k) = offset(w) + j*T_r + k*T_p .
// The window layout is: Rydberg pi pulse on [mark(w,0,0), mark(w,1,0)],
// Raman pulse on [mark(w,1,0), mark(w,1,1)], Rydberg pi pulse on
// [mark(w,1,1), mark(w,2,1)].  Consecutive windows are separated by exactly
// one gap of length T_gap, so the schedule ends at
//   total_duration = W*(2*T_r + T_p) + (W-1)*T_gap .
struct TimingTable {
  int num_windows = 1;
  double t_r = 0.0;
  double t_p = 0.0;
  double t_gap = 0.0;

  double unit() const { return 2.0 * t_r + t_p + t_gap; }
  double active_duration() const { return 2.0 * t_r + t_p; }

  double offset(int w) const { return (w - 1) * unit(); }

  double mark(int w, int j, int k) const { return offset(w) + j * t_r + k * t_p; }

  double window_begin(int w) const { return offset(w); }
  double window_end(int w) const { return mark(w, 2, 1); }

  double total_duration() const {
    return num_windows * active_duration() + (num_windows - 1) * t_gap;
  }

  // Window containing t, or 0 if t falls in a gap or outside the schedule.
  // Window intervals are treated as closed; the boundary points carry no
  // measure and only seed the integrator's hard step boundaries.
  int window_at(double t) const {
    if (t < 0.0 || t > total_duration()) return 0;
    int w = static_cast<int>(std::floor(t / unit())) + 1;
    if (w > num_windows) w = num_windows;
    if (w >= 2 && t <= window_end(w - 1)) --w;  // guard against floor roundoff
    if (t >= window_begin(w) && t <= window_end(w)) return w;
    return 0;
  }

  // All envelope discontinuities and kinks, strictly increasing.  These are
  // the mandatory step boundaries for the propagator.
  std::vector<double> all_marks() const {
    std::vector<double> m;
    m.reserve(4 * num_windows);
    for (int w = 1; w <= num_windows; ++w) {
      m.push_back(mark(w, 0, 0));
      m.push_back(mark(w, 1, 0));
      m.push_back(mark(w, 1, 1));
      m.push_back(mark(w, 2, 1));
    }
    return m;
  }
};

inline TimingTable build_timing(int num_windows, double t_r, double t_p, double t_gap) {
  if (num_windows < 1) throw ConfigError("timing table needs at least one window");
  if (!(t_r > 0.0) || !(t_p > 0.0) || !(t_gap > 0.0))
    throw ConfigError("pulse and gap durations must be positive");
  return TimingTable{num_windows, t_r, t_p, t_gap};
}

// Raman pulse length for a given peak two-photon drive.  The sin^2 envelope
// Omega_p(t) = peak * sin^2(pi*t/T_p) accumulates the two-photon area
// Int Omega_p^2/(2*Delta) dt = 3*T_p*peak^2/(16*Delta), fixed to pi:
//   T_p = 16*pi*Delta/(3*peak^2).
inline double raman_duration_from_peak(double omega_peak, double delta) {
  if (!(omega_peak > 0.0) || !(delta > 0.0))
    throw ConfigError("Raman peak and detuning must be positive");
  return 16.0 * kPi * delta / (3.0 * omega_peak * omega_peak);
}

inline double raman_peak_from_duration(double t_p, double delta) {
  return std::sqrt(16.0 * kPi * delta / (3.0 * t_p));
}

// Rydberg channel of window w: two rectangles of height pi/T_r (area pi each)
// flanking the Raman pulse.
inline double omega_r(double t, int w, const TimingTable& tt) {
  const bool first = t >= tt.mark(w, 0, 0) && t <= tt.mark(w, 1, 0);
  const bool second = t >= tt.mark(w, 1, 1) && t <= tt.mark(w, 2, 1);
  return (first || second) ? kPi / tt.t_r : 0.0;
}

// Raman channel of window w: smooth sin^2 turn-on/off between the Rydberg
// rectangles, with the peak fixed by the pi two-photon area.
inline double omega_p(double t, int w, const TimingTable& tt, double delta) {
  const double t0 = tt.mark(w, 1, 0);
  const double t1 = tt.mark(w, 1, 1);
  if (t < t0 || t > t1) return 0.0;
  const double s = std::sin(kPi * (t - t0) / tt.t_p);
  return raman_peak_from_duration(tt.t_p, delta) * s * s;
}

// EIT coupling channel of window w: constant across the whole window.
inline double omega_c(double t, int w, const TimingTable& tt, double omega_c_value) {
  return (t >= tt.mark(w, 0, 0) && t <= tt.mark(w, 2, 1)) ? omega_c_value : 0.0;
}

// Schedule length for N sequentially addressed targets (or n repeated cycles
// on a single target; the two are never combined).
inline double total_duration(int num_windows, double t_r, double t_p, double t_gap) {
  return build_timing(num_windows, t_r, t_p, t_gap).total_duration();
}

// Global envelopes: the per-window supports are disjoint, so the schedule-wide
// channel value at time t is the value of the window containing t (if any).
struct ChannelEnvelopes {
  TimingTable table;
  double delta = 0.0;          // rad/us, single-photon detuning of the Raman pair
  double omega_c_value = 0.0;  // rad/us, EIT coupling strength

  double peak() const { return raman_peak_from_duration(table.t_p, delta); }

  double r(double t) const {
    const int w = table.window_at(t);
    return w ? omega_r(t, w, table) : 0.0;
  }
  double p(double t) const {
    const int w = table.window_at(t);
    return w ? omega_p(t, w, table, delta) : 0.0;
  }
  double c(double t) const {
    const int w = table.window_at(t);
    return w ? omega_c(t, w, table, omega_c_value) : 0.0;
  }
};

}  // namespace eitsim
