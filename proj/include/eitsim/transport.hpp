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

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eitsim/common.hpp"
#include "eitsim/pulses.hpp"

namespace eitsim {

using Point = Eigen::Vector2d;

// Atom layout in the trap plane (um).  targets[j-1] is the position of data
// atom j; dwell_points[j-1] is where the control atom parks while gate j runs.
// Atom pairs closer than hard_floor are rejected: the power-law interaction
// models are meaningless at contact range.
struct Geometry {
  std::vector<Point> targets;
  std::vector<Point> dwell_points;
  double hard_floor = 0.5;  // um

  int num_targets() const { return static_cast<int>(targets.size()); }

  void validate() const {
    if (targets.empty()) throw ConfigError("geometry needs at least one target");
    if (targets.size() != dwell_points.size() && dwell_points.size() != 1)
      throw ConfigError("geometry needs one dwell point per target or a single shared one");
    for (std::size_t i = 0; i < targets.size(); ++i)
      for (std::size_t j = i + 1; j < targets.size(); ++j)
        if ((targets[i] - targets[j]).norm() < hard_floor)
          throw ConfigError("target atoms " + std::to_string(i + 1) + " and " +
                            std::to_string(j + 1) + " are closer than the hard floor");
    for (std::size_t w = 0; w < dwell_points.size(); ++w)
      for (std::size_t j = 0; j < targets.size(); ++j)
        if ((dwell_points[w] - targets[j]).norm() < hard_floor)
          throw ConfigError("dwell point " + std::to_string(w + 1) +
                            " violates the hard floor at target " + std::to_string(j + 1));
  }
};

// Four targets on the corners of a d x d square, visited in an order that
// maximizes diagonal hops.  The dwell point of each gate sits a distance a
// inward from its target corner along the diagonal toward the square center,
// so a diagonal hop covers d*sqrt(2) - 2a.  visit_order[j-1] names the corner
// (1..4, counterclockwise from the origin) assigned to target j.
inline Geometry build_square_geometry(double d, double a,
                                      const std::vector<int>& visit_order = {1, 3, 2, 4}) {
  if (!(d > 0.0)) throw ConfigError("square side must be positive");
  if (!(a > 0.0) || !(a < d / 2.0))
    throw ConfigError("dwell distance must satisfy 0 < a < d/2");
  if (visit_order.size() != 4) throw ConfigError("visit order must list all four corners");
  {
    std::vector<bool> seen(5, false);
    for (int c : visit_order) {
      if (c < 1 || c > 4 || seen[c]) throw ConfigError("visit order must permute corners 1..4");
      seen[c] = true;
    }
  }
  const Point corners[4] = {{0.0, 0.0}, {d, 0.0}, {d, d}, {0.0, d}};
  const Point center(d / 2.0, d / 2.0);
  Geometry g;
  for (int j = 0; j < 4; ++j) {
    const Point corner = corners[visit_order[j] - 1];
    const Point inward = (center - corner).normalized();
    g.targets.push_back(corner);
    g.dwell_points.push_back(corner + a * inward);
  }
  g.validate();
  return g;
}

// Single target at the origin with the control parked a distance a away;
// used by the single-target (gate cycling) schedules.
inline Geometry build_single_geometry(double a) {
  if (!(a > 0.0)) throw ConfigError("dwell distance must be positive");
  Geometry g;
  g.targets.push_back(Point(0.0, 0.0));
  g.dwell_points.push_back(Point(a, 0.0));
  g.validate();
  return g;
}

// Piecewise-linear control atom path: parked at the window's dwell point
// while pulses run, moving in a straight line at constant speed across each
// gap.  Positions are continuous; motion happens only between windows.
struct TrajectorySegment {
  double t0 = 0.0, t1 = 0.0;
  Point p0{0.0, 0.0}, p1{0.0, 0.0};

  Point at(double t) const {
    if (t1 <= t0) return p0;
    const double s = std::clamp((t - t0) / (t1 - t0), 0.0, 1.0);
    return p0 + s * (p1 - p0);
  }
  double length() const { return (p1 - p0).norm(); }
  double duration() const { return t1 - t0; }
};

struct Trajectory {
  std::vector<TrajectorySegment> segments;  // contiguous cover of [0, total_duration]

  Point position(double t) const {
    if (segments.empty()) throw ConfigError("empty trajectory");
    if (t <= segments.front().t0) return segments.front().p0;
    for (const auto& s : segments)
      if (t <= s.t1) return s.at(t);
    return segments.back().p1;
  }

  // Index of the segment containing t (gap segments interleave dwell ones).
  int segment_at(double t) const {
    for (std::size_t i = 0; i < segments.size(); ++i)
      if (t <= segments[i].t1) return static_cast<int>(i);
    return static_cast<int>(segments.size()) - 1;
  }
};

inline double average_speed(const TrajectorySegment& seg) {
  if (!(seg.duration() > 0.0)) throw ConfigError("speed of a zero-duration segment");
  return seg.length() / seg.duration();
}

// Idealized transport speed used as the sweep coordinate: uniform diagonal
// hops of length d*sqrt(2) - 2a covered in one gap.
inline double uniform_hop_speed(double d, double a, double t_gap) {
  return (d * std::sqrt(2.0) - 2.0 * a) / t_gap;
}

namespace detail {

// Minimum distance between point q and the segment p0-p1.
inline double point_segment_distance(const Point& q, const Point& p0, const Point& p1) {
  const Point v = p1 - p0;
  const double vv = v.squaredNorm();
  if (vv == 0.0) return (q - p0).norm();
  const double s = std::clamp((q - p0).dot(v) / vv, 0.0, 1.0);
  return (q - (p0 + s * v)).norm();
}

}  // namespace detail

// Window w dwells at dwell_points[w-1] (or at the single dwell point when the
// schedule cycles on one target).  Every hop path is checked against the
// geometry hard floor up front so the interaction terms never see a
// pathological separation.
inline Trajectory build_trajectory(const Geometry& geometry, const TimingTable& table) {
  geometry.validate();
  const int n_dwell = static_cast<int>(geometry.dwell_points.size());
  if (table.num_windows != n_dwell && n_dwell != 1)
    throw ConfigError("schedule has " + std::to_string(table.num_windows) +
                      " windows but geometry has " + std::to_string(n_dwell) +
                      " dwell points");
  auto dwell = [&](int w) {
    return geometry.dwell_points[n_dwell == 1 ? 0 : w - 1];
  };

  Trajectory traj;
  for (int w = 1; w <= table.num_windows; ++w) {
    traj.segments.push_back({table.window_begin(w), table.window_end(w), dwell(w), dwell(w)});
    if (w < table.num_windows)
      traj.segments.push_back(
          {table.window_end(w), table.window_begin(w + 1), dwell(w), dwell(w + 1)});
  }

  for (const auto& seg : traj.segments)
    for (int j = 0; j < geometry.num_targets(); ++j)
      if (detail::point_segment_distance(geometry.targets[j], seg.p0, seg.p1) <
          geometry.hard_floor)
        throw ConfigError("control path passes target " + std::to_string(j + 1) +
                          " closer than the hard floor");
  return traj;
}

inline double distance_to_target(const Trajectory& traj, const Geometry& geometry, double t,
                                 int target_j) {
  if (target_j < 1 || target_j > geometry.num_targets())
    throw ConfigError("target index out of range");
  return (traj.position(t) - geometry.targets[target_j - 1]).norm();
}

}  // namespace eitsim
