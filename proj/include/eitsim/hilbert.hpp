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
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "eitsim/common.hpp"

namespace eitsim {

// Control (ancilla) atom: two hyperfine ground states and one Rydberg state.
enum class ControlLevel : int { kG0 = 0, kG1 = 1, kRyd = 2 };

// Target (data) atom: logical pair A/B, optically excited P, Rydberg R.
enum class TargetLevel : int { kA = 0, kB = 1, kP = 2, kR = 3 };

inline char label_of(ControlLevel c) { return "01r"[static_cast<int>(c)]; }
inline char label_of(TargetLevel t) { return "ABPR"[static_cast<int>(t)]; }

inline ControlLevel control_level_from_label(char c) {
  switch (c) {
    case '0': return ControlLevel::kG0;
    case '1': return ControlLevel::kG1;
    case 'r': return ControlLevel::kRyd;
    default: throw ConfigError(std::string("unknown control level label '") + c + "'");
  }
}

inline TargetLevel target_level_from_label(char c) {
  switch (c) {
    case 'A': return TargetLevel::kA;
    case 'B': return TargetLevel::kB;
    case 'P': return TargetLevel::kP;
    case 'R': return TargetLevel::kR;
    default: throw ConfigError(std::string("unknown target level label '") + c + "'");
  }
}

// Product space of one control atom and N target atoms, dimension 3*4^N.
// Composite indices are row-major with the control slowest and target N
// fastest: index = c*4^N + sum_j t_j*4^(N-j).
struct LevelScheme {
  static constexpr int kControlDim = 3;
  static constexpr int kTargetDim = 4;

  int num_targets = 1;

  explicit LevelScheme(int n_targets = 1) : num_targets(n_targets) {
    if (num_targets < 1 || num_targets > 12)
      throw ConfigError("number of target atoms must be in [1, 12], got " +
                        std::to_string(num_targets));
  }

  std::size_t target_space_dim() const { return std::size_t{1} << (2 * num_targets); }
  std::size_t dim() const { return 3 * target_space_dim(); }

  // Stride of target j (1-based); the control stride is 4^N.
  std::size_t target_stride(int j) const {
    return std::size_t{1} << (2 * (num_targets - j));
  }

  std::size_t index_of(ControlLevel c, std::span<const TargetLevel> t) const {
    if (static_cast<int>(t.size()) != num_targets)
      throw ConfigError("level tuple has " + std::to_string(t.size()) +
                        " targets, scheme has " + std::to_string(num_targets));
    std::size_t idx = static_cast<std::size_t>(c) * target_space_dim();
    for (int j = 0; j < num_targets; ++j)
      idx += static_cast<std::size_t>(t[j]) << (2 * (num_targets - 1 - j));
    return idx;
  }

  void levels_of(std::size_t idx, ControlLevel& c, std::vector<TargetLevel>& t) const {
    if (idx >= dim()) throw ConfigError("basis index out of range");
    c = static_cast<ControlLevel>(idx / target_space_dim());
    std::size_t rest = idx % target_space_dim();
    t.resize(num_targets);
    for (int j = num_targets - 1; j >= 0; --j) {
      t[j] = static_cast<TargetLevel>(rest & 3u);
      rest >>= 2;
    }
  }

  // Parses labels such as "1BAAA": one control character followed by one
  // character per target.
  std::size_t index_of_label(const std::string& label) const {
    if (static_cast<int>(label.size()) != num_targets + 1)
      throw ConfigError("basis label '" + label + "' must have " +
                        std::to_string(num_targets + 1) + " characters");
    std::vector<TargetLevel> t(num_targets);
    for (int j = 0; j < num_targets; ++j) t[j] = target_level_from_label(label[j + 1]);
    return index_of(control_level_from_label(label[0]), t);
  }

  std::string label_of_index(std::size_t idx) const {
    ControlLevel c;
    std::vector<TargetLevel> t;
    levels_of(idx, c, t);
    std::string s(1, label_of(c));
    for (TargetLevel lv : t) s += label_of(lv);
    return s;
  }

  bool operator==(const LevelScheme& other) const { return num_targets == other.num_targets; }
};

struct StateVector {
  LevelScheme scheme{1};
  Vector amps;  // default-constructed: empty placeholder until assigned

  StateVector() = default;
  explicit StateVector(const LevelScheme& s) : scheme(s), amps(Vector::Zero(s.dim())) {}
  StateVector(const LevelScheme& s, Vector a) : scheme(s), amps(std::move(a)) {
    if (static_cast<std::size_t>(amps.size()) != scheme.dim())
      throw ConfigError("state vector length does not match scheme dimension");
  }

  double norm() const { return amps.norm(); }
  double norm_squared() const { return amps.squaredNorm(); }
};

enum class ControlPreparation { kG0, kG1, kSuperposition };

// Product initial state: control in |0>, |1> or (|0>+|1>)/sqrt(2) (zero
// relative phase), targets in a definite level configuration.
inline StateVector prepare_initial(const LevelScheme& scheme, ControlPreparation control,
                                   std::span<const TargetLevel> targets) {
  StateVector psi(scheme);
  switch (control) {
    case ControlPreparation::kG0:
      psi.amps[scheme.index_of(ControlLevel::kG0, targets)] = 1.0;
      break;
    case ControlPreparation::kG1:
      psi.amps[scheme.index_of(ControlLevel::kG1, targets)] = 1.0;
      break;
    case ControlPreparation::kSuperposition: {
      const double w = 1.0 / std::sqrt(2.0);
      psi.amps[scheme.index_of(ControlLevel::kG0, targets)] = w;
      psi.amps[scheme.index_of(ControlLevel::kG1, targets)] = w;
      break;
    }
  }
  return psi;
}

inline StateVector prepare_initial(const LevelScheme& scheme, ControlPreparation control,
                                   std::initializer_list<TargetLevel> targets) {
  return prepare_initial(scheme, control,
                         std::span<const TargetLevel>(targets.begin(), targets.size()));
}

// Density matrix over an explicit list of subsystem dimensions.  Subsystem 0
// is the control atom, subsystems 1..N the targets; after logical projection
// every dimension is 2.
struct DensityMatrix {
  std::vector<int> dims;
  Matrix rho;

  DensityMatrix(std::vector<int> d, Matrix m) : dims(std::move(d)), rho(std::move(m)) {
    std::size_t n = 1;
    for (int dd : dims) n *= static_cast<std::size_t>(dd);
    if (dims.empty()) n = 1;
    if (static_cast<std::size_t>(rho.rows()) != n || static_cast<std::size_t>(rho.cols()) != n)
      throw ConfigError("density matrix shape does not match subsystem dimensions");
  }

  std::size_t dim() const { return static_cast<std::size_t>(rho.rows()); }
  double trace() const { return rho.trace().real(); }
};

namespace detail {

// Flat offsets of all multi-indices over the given subsystem subset.
inline std::vector<std::size_t> subset_offsets(const std::vector<int>& dims,
                                               const std::vector<std::size_t>& strides,
                                               const std::vector<int>& subset) {
  std::size_t count = 1;
  for (int s : subset) count *= static_cast<std::size_t>(dims[s]);
  std::vector<std::size_t> offsets(count, 0);
  std::size_t repeat = count;
  for (int s : subset) {
    const std::size_t d = static_cast<std::size_t>(dims[s]);
    repeat /= d;
    std::size_t pos = 0;
    while (pos < count)
      for (std::size_t v = 0; v < d; ++v)
        for (std::size_t r = 0; r < repeat; ++r) offsets[pos++] += v * strides[s];
  }
  return offsets;
}

inline void check_subset(const std::vector<int>& keep, int num_subsystems) {
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= num_subsystems)
      throw ConfigError("partial trace subsystem index out of range");
    if (i > 0 && keep[i] <= keep[i - 1])
      throw ConfigError("partial trace subsystem list must be strictly increasing");
  }
}

inline std::vector<std::size_t> row_major_strides(const std::vector<int>& dims) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i)
    strides[i] = strides[i + 1] * static_cast<std::size_t>(dims[i + 1]);
  return strides;
}

}  // namespace detail

// Reduced density matrix over the kept subsystems (strictly increasing
// indices).  An empty keep list yields the 1x1 matrix holding the trace.
// The input need not be normalized; the trace is preserved.
inline DensityMatrix partial_trace(const DensityMatrix& full, const std::vector<int>& keep) {
  detail::check_subset(keep, static_cast<int>(full.dims.size()));
  std::vector<int> rest;
  for (int s = 0; s < static_cast<int>(full.dims.size()); ++s)
    if (std::find(keep.begin(), keep.end(), s) == keep.end()) rest.push_back(s);

  const auto strides = detail::row_major_strides(full.dims);
  const auto keep_off = detail::subset_offsets(full.dims, strides, keep);
  const auto rest_off = detail::subset_offsets(full.dims, strides, rest);

  Matrix out = Matrix::Zero(keep_off.size(), keep_off.size());
  for (std::size_t a = 0; a < keep_off.size(); ++a)
    for (std::size_t b = 0; b < keep_off.size(); ++b) {
      Complex acc = 0.0;
      for (std::size_t r : rest_off) acc += full.rho(keep_off[a] + r, keep_off[b] + r);
      out(a, b) = acc;
    }

  std::vector<int> out_dims;
  for (int s : keep) out_dims.push_back(full.dims[s]);
  return DensityMatrix(std::move(out_dims), std::move(out));
}

// Same reduction computed directly from a pure state, without materializing
// the full |psi><psi|.
inline DensityMatrix partial_trace(const StateVector& psi, const std::vector<int>& keep) {
  std::vector<int> dims(psi.scheme.num_targets + 1, LevelScheme::kTargetDim);
  dims[0] = LevelScheme::kControlDim;
  detail::check_subset(keep, static_cast<int>(dims.size()));
  std::vector<int> rest;
  for (int s = 0; s < static_cast<int>(dims.size()); ++s)
    if (std::find(keep.begin(), keep.end(), s) == keep.end()) rest.push_back(s);

  const auto strides = detail::row_major_strides(dims);
  const auto keep_off = detail::subset_offsets(dims, strides, keep);
  const auto rest_off = detail::subset_offsets(dims, strides, rest);

  Matrix out = Matrix::Zero(keep_off.size(), keep_off.size());
  for (std::size_t a = 0; a < keep_off.size(); ++a)
    for (std::size_t b = a; b < keep_off.size(); ++b) {
      Complex acc = 0.0;
      for (std::size_t r : rest_off)
        acc += psi.amps[keep_off[a] + r] * std::conj(psi.amps[keep_off[b] + r]);
      out(a, b) = acc;
      out(b, a) = std::conj(acc);
    }

  std::vector<int> out_dims;
  for (int s : keep) out_dims.push_back(dims[s]);
  return DensityMatrix(std::move(out_dims), std::move(out));
}

// Amplitudes on the logical subspace {|0>,|1>} x {A,B}^N, ordered with the
// control bit slowest.  No renormalization: the squared norm of the result is
// the logical population.
inline Vector logical_vector(const StateVector& psi) {
  const int n = psi.scheme.num_targets;
  const std::size_t logical_dim = std::size_t{1} << (n + 1);
  Vector out(logical_dim);
  std::vector<TargetLevel> t(n);
  for (std::size_t l = 0; l < logical_dim; ++l) {
    const ControlLevel c = (l >> n) ? ControlLevel::kG1 : ControlLevel::kG0;
    for (int j = 0; j < n; ++j)
      t[j] = ((l >> (n - 1 - j)) & 1u) ? TargetLevel::kB : TargetLevel::kA;
    out[l] = psi.amps[psi.scheme.index_of(c, t)];
  }
  return out;
}

// Projection onto the logical subspace, kept unrenormalized so that the trace
// deficit (leakage out of {0,1}x{A,B}^N) stays visible.  Callers that need a
// unit-trace state divide by trace() explicitly.
inline DensityMatrix project_logical(const StateVector& psi) {
  Vector phi = logical_vector(psi);
  std::vector<int> dims(psi.scheme.num_targets + 1, 2);
  Matrix rho = phi * phi.adjoint();
  return DensityMatrix(std::move(dims), std::move(rho));
}

// Logical projection of a full-space density matrix (dims {3,4,...,4}).
// Idempotent: projecting an already-logical matrix is the identity.
inline DensityMatrix project_logical(const DensityMatrix& full) {
  const int n_sub = static_cast<int>(full.dims.size());
  bool already_logical = true;
  for (int d : full.dims) already_logical = already_logical && (d == 2);
  if (already_logical) return full;
  if (full.dims[0] != LevelScheme::kControlDim)
    throw ConfigError("logical projection expects a control-plus-targets density matrix");
  const int n = n_sub - 1;
  LevelScheme scheme(n);
  const std::size_t logical_dim = std::size_t{1} << (n + 1);
  std::vector<std::size_t> map(logical_dim);
  std::vector<TargetLevel> t(n);
  for (std::size_t l = 0; l < logical_dim; ++l) {
    const ControlLevel c = (l >> n) ? ControlLevel::kG1 : ControlLevel::kG0;
    for (int j = 0; j < n; ++j)
      t[j] = ((l >> (n - 1 - j)) & 1u) ? TargetLevel::kB : TargetLevel::kA;
    map[l] = scheme.index_of(c, t);
  }
  Matrix rho(logical_dim, logical_dim);
  for (std::size_t a = 0; a < logical_dim; ++a)
    for (std::size_t b = 0; b < logical_dim; ++b) rho(a, b) = full.rho(map[a], map[b]);
  return DensityMatrix(std::vector<int>(n + 1, 2), std::move(rho));
}

// Normalized purity Tr(rho^2)/Tr(rho)^2; 1 for pure states regardless of the
// input trace.  Assumes a Hermitian input.
inline double purity(const DensityMatrix& rho) {
  const double tr = rho.trace();
  if (std::abs(tr) < 1e-300) throw NumericalError("purity of a zero-trace density matrix");
  return rho.rho.squaredNorm() / (tr * tr);
}

}  // namespace eitsim
