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
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "eitsim/common.hpp"
#include "eitsim/hilbert.hpp"
#include "eitsim/pulses.hpp"
#include "eitsim/quadrature.hpp"
#include "eitsim/transport.hpp"

namespace eitsim {

// All rates in rad/us (hbar = 1), decay rates in 1/us, lengths in um.
struct PhysicalParams {
  double omega_p_peak = angular_from_mhz(70.0);  // Raman peak
  double omega_c = 2.5 * angular_from_mhz(70.0);  // EIT coupling
  double delta = angular_from_mhz(1200.0);        // single-photon detuning
  double gamma_r = 1.0 / 548.0;                   // control Rydberg decay
  double gamma_p = 1.0 / 0.0264;                  // target P decay
  double c3 = angular_from_ghz(14.25);            // control-target C3, rad/us um^3
  double c6 = angular_from_ghz(2036.0);           // target-target C6, rad/us um^6
  // Validity ranges of the power-law coefficients, recorded for reference;
  // the same functional forms are applied at all separations above the
  // geometry hard floor.
  double r_lr_ct = 1.9;   // um
  double r_lr_tt = 1.8;   // um
  double r_vdw = 31.0;    // um

  static PhysicalParams defaults() { return PhysicalParams{}; }

  void validate() const {
    if (!(omega_p_peak > 0.0) || !(omega_c > 0.0) || !(delta > 0.0))
      throw ConfigError("drive strengths and detuning must be positive");
    if (gamma_r < 0.0 || gamma_p < 0.0) throw ConfigError("decay rates must be non-negative");
    if (c3 < 0.0 || c6 < 0.0) throw ConfigError("interaction coefficients must be non-negative");
  }

  double raman_duration() const { return raman_duration_from_peak(omega_p_peak, delta); }
};

// Static diagonal of the Hamiltonian within one gate window, split into the
// Hermitian part (detunings and blockade shifts, rad/us) and the decay part
// (total width gamma per basis state, 1/us).  Values are deduplicated into
// classes so phase factors can be computed once per distinct value.
struct WindowDiagonal {
  std::vector<std::uint16_t> class_of;  // per basis index
  std::vector<double> herm;             // per class
  std::vector<double> gamma;            // per class
};

// Full system Hamiltonian
//   H(t) = H_C(t) + sum_j H_Tj(t) + sum_j V_CTj(t) |r><r| (x) |R>_j<R|
//          + sum_{j<k} V_TjTk |R>_j<R| (x) |R>_k<R|
// with
//   H_C  = (Omega_r(t)/2)(|1><r| + h.c.) - (i gamma_r/2)|r><r|
//   H_Tj = (Omega_p(t)/2)(|A><P| + |B><P| + h.c.) + (Omega_c(t)/2)(|P><R| + h.c.)
//          - (Delta + i gamma_p/2)|P><P|
//   V_CTj = C3/R_j(t)^3  (control-target distance follows the transport path),
//   V_TjTk = C6/R_jk^6   (static target spacing).
// The same pulse envelopes illuminate every target in every window; gate
// selectivity comes entirely from the control atom's position.
class Hamiltonian {
 public:
  Hamiltonian(LevelScheme scheme, TimingTable table, Geometry geometry, PhysicalParams params)
      : scheme_(scheme),
        table_(table),
        geometry_(geometry),
        params_(params),
        envelopes_{table, params.delta, params.omega_c},
        trajectory_(build_trajectory(geometry, table)) {
    params_.validate();
    if (geometry_.num_targets() != scheme_.num_targets)
      throw ConfigError("geometry and level scheme disagree on the number of targets");
    const std::size_t dim = scheme_.dim();
    n_p_.resize(dim);
    is_ryd_.resize(dim);
    r_mask_.resize(dim);
    tt_shift_.resize(dim);
    const int n = scheme_.num_targets;
    std::vector<double> pair_v;  // C6/R^6 for every ordered (j<k) pair
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        pair_v.push_back(params_.c6 /
                         std::pow((geometry_.targets[j] - geometry_.targets[k]).norm(), 6.0));
    ControlLevel c;
    std::vector<TargetLevel> t;
    for (std::size_t i = 0; i < dim; ++i) {
      scheme_.levels_of(i, c, t);
      int np = 0;
      std::uint32_t mask = 0;
      for (int j = 0; j < n; ++j) {
        if (t[j] == TargetLevel::kP) ++np;
        if (t[j] == TargetLevel::kR) mask |= (1u << j);
      }
      n_p_[i] = static_cast<std::uint8_t>(np);
      is_ryd_[i] = (c == ControlLevel::kRyd) ? 1 : 0;
      r_mask_[i] = mask;
      double tt = 0.0;
      int p = 0;
      for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k, ++p)
          if ((mask >> j & 1u) && (mask >> k & 1u)) tt += pair_v[p];
      tt_shift_[i] = tt;
    }
    window_diagonals_.reserve(table_.num_windows);
    for (int w = 1; w <= table_.num_windows; ++w)
      window_diagonals_.push_back(build_window_diagonal(w));
  }

  const LevelScheme& scheme() const { return scheme_; }
  const TimingTable& table() const { return table_; }
  const Geometry& geometry() const { return geometry_; }
  const PhysicalParams& params() const { return params_; }
  const ChannelEnvelopes& envelopes() const { return envelopes_; }
  const Trajectory& trajectory() const { return trajectory_; }

  // Control-target blockade shift seen by target j (1-based) at time t.
  double v_ct(double t, int j) const {
    const double r = distance_to_target(trajectory_, geometry_, t, j);
    if (r < geometry_.hard_floor)
      throw NumericalError("control-target distance under the hard floor");
    return params_.c3 / (r * r * r);
  }

  // out += H(t) * in, matrix free.  `out` must be zeroed by the caller (or
  // hold a partial sum on purpose).
  void accumulate_apply(double t, const Complex* in, Complex* out) const {
    accumulate_couplings(envelopes_.r(t), envelopes_.p(t), envelopes_.c(t), in, out);
    std::vector<Complex> diag(scheme_.dim());
    diagonal(t, diag.data());
    const std::size_t dim = scheme_.dim();
    for (std::size_t i = 0; i < dim; ++i) out[i] += diag[i] * in[i];
  }

  Vector apply(double t, const Vector& in) const {
    Vector out = Vector::Zero(in.size());
    accumulate_apply(t, in.data(), out.data());
    return out;
  }

  // Off-diagonal coupling part only, given the three channel values.  This is
  // the hot loop of the propagator.
  void accumulate_couplings(double wr, double wp, double wc, const Complex* in,
                            Complex* out) const {
    const int n = scheme_.num_targets;
    const std::size_t dim = scheme_.dim();
    const std::size_t span = scheme_.target_space_dim();
    if (wr != 0.0) {
      const double h = 0.5 * wr;
      const Complex* in1 = in + span;
      const Complex* inr = in + 2 * span;
      Complex* out1 = out + span;
      Complex* outr = out + 2 * span;
      for (std::size_t m = 0; m < span; ++m) {
        out1[m] += h * inr[m];
        outr[m] += h * in1[m];
      }
    }
    if (wp != 0.0 || wc != 0.0) {
      const double hp = 0.5 * wp;
      const double hc = 0.5 * wc;
      for (int j = 1; j <= n; ++j) {
        const std::size_t s = scheme_.target_stride(j);
        for (std::size_t base = 0; base < dim; base += 4 * s) {
          const Complex* ia = in + base;
          Complex* oa = out + base;
          for (std::size_t m = 0; m < s; ++m) {
            const Complex a = ia[m], b = ia[m + s], p = ia[m + 2 * s], r = ia[m + 3 * s];
            if (wp != 0.0) {
              oa[m] += hp * p;
              oa[m + s] += hp * p;
              oa[m + 2 * s] += hp * (a + b);
            }
            if (wc != 0.0) {
              oa[m + 2 * s] += hc * r;
              oa[m + 3 * s] += hc * p;
            }
          }
        }
      }
    }
  }

  // Complex diagonal H_ii(t): detunings, decay widths, blockade shifts.
  void diagonal(double t, Complex* diag) const {
    const std::size_t dim = scheme_.dim();
    const int n = scheme_.num_targets;
    std::vector<double> vct(n);
    for (int j = 1; j <= n; ++j) vct[j - 1] = v_ct(t, j);
    for (std::size_t i = 0; i < dim; ++i) {
      double herm = -params_.delta * n_p_[i] + tt_shift_[i];
      if (is_ryd_[i])
        for (int j = 0; j < n; ++j)
          if (r_mask_[i] >> j & 1u) herm += vct[j];
      const double width = params_.gamma_r * is_ryd_[i] + params_.gamma_p * n_p_[i];
      diag[i] = Complex(herm, -0.5 * width);
    }
  }

  // Dense operator contributions, used by tests and the reference propagator.
  Matrix control_term(double t) const {
    const std::size_t dim = scheme_.dim();
    const std::size_t span = scheme_.target_space_dim();
    Matrix h = Matrix::Zero(dim, dim);
    const double wr = 0.5 * envelopes_.r(t);
    for (std::size_t m = 0; m < span; ++m) {
      h(span + m, 2 * span + m) += wr;
      h(2 * span + m, span + m) += wr;
      h(2 * span + m, 2 * span + m) += Complex(0.0, -0.5 * params_.gamma_r);
    }
    return h;
  }

  Matrix target_term(double t, int j) const {
    if (j < 1 || j > scheme_.num_targets) throw ConfigError("target index out of range");
    const std::size_t dim = scheme_.dim();
    Matrix h = Matrix::Zero(dim, dim);
    const double hp = 0.5 * envelopes_.p(t);
    const double hc = 0.5 * envelopes_.c(t);
    const std::size_t s = scheme_.target_stride(j);
    for (std::size_t base = 0; base < dim; base += 4 * s)
      for (std::size_t m = 0; m < s; ++m) {
        const std::size_t ia = base + m, ib = ia + s, ip = ia + 2 * s, ir = ia + 3 * s;
        h(ia, ip) += hp;
        h(ip, ia) += hp;
        h(ib, ip) += hp;
        h(ip, ib) += hp;
        h(ip, ir) += hc;
        h(ir, ip) += hc;
        h(ip, ip) += Complex(-params_.delta, -0.5 * params_.gamma_p);
      }
    return h;
  }

  Matrix interaction_term(double t) const {
    const std::size_t dim = scheme_.dim();
    const int n = scheme_.num_targets;
    Matrix h = Matrix::Zero(dim, dim);
    std::vector<double> vct(n);
    for (int j = 1; j <= n; ++j) vct[j - 1] = v_ct(t, j);
    for (std::size_t i = 0; i < dim; ++i) {
      double v = tt_shift_[i];
      if (is_ryd_[i])
        for (int j = 0; j < n; ++j)
          if (r_mask_[i] >> j & 1u) v += vct[j];
      h(i, i) = v;
    }
    return h;
  }

  Matrix assemble_dense(double t) const {
    Matrix h = control_term(t) + interaction_term(t);
    for (int j = 1; j <= scheme_.num_targets; ++j) h += target_term(t, j);
    return h;
  }

  // Static diagonal of window w (control parked at its dwell point).
  const WindowDiagonal& window_diagonal(int w) const {
    if (w < 1 || w > table_.num_windows) throw ConfigError("window index out of range");
    return window_diagonals_[w - 1];
  }

  // Hermitian-diagonal integrals across [t1, t2] (inside a gap, where all
  // couplings vanish), for the analytic diagonal propagator:
  //   angle[i] = Int H_ii dt ,  width[i] = Int gamma_ii dt .
  // The control-target blockade integral follows the transport path with
  // adaptive quadrature.
  struct GapIntegrals {
    double dt = 0.0;
    std::vector<double> ct;  // per target, Int C3/R_j(t)^3 dt
  };

  GapIntegrals gap_integrals(double t1, double t2) const {
    GapIntegrals gi;
    gi.dt = t2 - t1;
    const int n = scheme_.num_targets;
    gi.ct.resize(n);
    for (int j = 1; j <= n; ++j) {
      const auto f = [&](double t) {
        const double r = distance_to_target(trajectory_, geometry_, t, j);
        if (r < geometry_.hard_floor)
          throw NumericalError("control-target distance under the hard floor");
        return params_.c3 / (r * r * r);
      };
      gi.ct[j - 1] = adaptive_simpson(f, t1, t2, 1e-10);
    }
    return gi;
  }

  // Per-basis-state phase angle and decay width accumulated over a gap.
  void gap_diagonal(const GapIntegrals& gi, std::size_t i, double& angle, double& width) const {
    angle = (-params_.delta * n_p_[i] + tt_shift_[i]) * gi.dt;
    if (is_ryd_[i])
      for (int j = 0; j < scheme_.num_targets; ++j)
        if (r_mask_[i] >> j & 1u) angle += gi.ct[j];
    width = (params_.gamma_r * is_ryd_[i] + params_.gamma_p * n_p_[i]) * gi.dt;
  }

 private:
  WindowDiagonal build_window_diagonal(int w) const {
    WindowDiagonal wd;
    const std::size_t dim = scheme_.dim();
    const int n = scheme_.num_targets;
    const double t_mid = 0.5 * (table_.window_begin(w) + table_.window_end(w));
    std::vector<double> vct(n);
    for (int j = 1; j <= n; ++j) vct[j - 1] = v_ct(t_mid, j);
    wd.class_of.resize(dim);
    std::map<std::pair<double, double>, std::uint16_t> classes;
    for (std::size_t i = 0; i < dim; ++i) {
      double herm = -params_.delta * n_p_[i] + tt_shift_[i];
      if (is_ryd_[i])
        for (int j = 0; j < n; ++j)
          if (r_mask_[i] >> j & 1u) herm += vct[j];
      const double width = params_.gamma_r * is_ryd_[i] + params_.gamma_p * n_p_[i];
      auto [it, inserted] =
          classes.try_emplace(std::make_pair(herm, width), static_cast<std::uint16_t>(classes.size()));
      (void)inserted;
      wd.class_of[i] = it->second;
    }
    wd.herm.resize(classes.size());
    wd.gamma.resize(classes.size());
    for (const auto& [key, id] : classes) {
      wd.herm[id] = key.first;
      wd.gamma[id] = key.second;
    }
    return wd;
  }

  LevelScheme scheme_;
  TimingTable table_;
  Geometry geometry_;
  PhysicalParams params_;
  ChannelEnvelopes envelopes_;
  Trajectory trajectory_;

  // Per-basis-index structure, fixed at construction.
  std::vector<std::uint8_t> n_p_;
  std::vector<std::uint8_t> is_ryd_;
  std::vector<std::uint32_t> r_mask_;
  std::vector<double> tt_shift_;

  std::vector<WindowDiagonal> window_diagonals_;
};

}  // namespace eitsim
