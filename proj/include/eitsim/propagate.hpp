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
#include <cstdint>
#include <string>
#include <vector>

#include "eitsim/common.hpp"
#include "eitsim/hamiltonian.hpp"

namespace eitsim {

struct EvolveOptions {
  double tol = 1e-9;        // local error tolerance, scaled by (1 + ||psi||)
  int sample_points = 2000;  // uniform sample grid over the schedule
};

struct EvolveStats {
  std::int64_t steps_accepted = 0;
  std::int64_t steps_rejected = 0;
  std::int64_t rhs_evaluations = 0;
  double min_step = 0.0;
};

struct EvolveResult {
  std::vector<double> times;
  Matrix states;  // one column per sample time
  StateVector final_state;
  EvolveStats stats;
};

namespace detail {

// A window splits into three smooth pieces; envelope values inside a piece
// are evaluated by piece identity so the closed-interval conventions at the
// shared marks never leak a neighboring channel into the wrong piece.
enum class PieceKind { kRectangle, kRaman };

struct Piece {
  int window = 0;
  PieceKind kind = PieceKind::kRectangle;
  double begin = 0.0, end = 0.0;
};

inline Piece piece_at(const TimingTable& tt, double t) {
  const int w = tt.window_at(t);
  if (w == 0) throw ConfigError("time " + std::to_string(t) + " is not inside a gate window");
  const double m10 = tt.mark(w, 1, 0), m11 = tt.mark(w, 1, 1);
  if (t < m10) return {w, PieceKind::kRectangle, tt.mark(w, 0, 0), m10};
  if (t < m11) return {w, PieceKind::kRaman, m10, m11};
  return {w, PieceKind::kRectangle, m11, tt.mark(w, 2, 1)};
}

// Embedded Dormand-Prince 5(4) pair, integrated in the interaction frame of
// the window-static diagonal.  Each step uses its own integrating-factor
// frame anchored at the step start: the stiff detuning and blockade phases
// are applied exactly, the integrator only resolves the drive couplings.
// This keeps the gamma=0 norm drift orders of magnitude below the local
// tolerance, which a direct embedding of the far-detuned |P> level would not.
class WindowStepper {
 public:
  WindowStepper(const Hamiltonian& ham, double tol) : ham_(ham), tol_(tol) {
    const std::size_t dim = ham.scheme().dim();
    for (auto* v : {&y_, &u_, &v_, &err_})
      v->setZero(static_cast<Eigen::Index>(dim));
    for (auto& k : k_) k.setZero(static_cast<Eigen::Index>(dim));
  }

  // Advances psi from `piece_begin` to `piece_end` (a sub-interval of one
  // smooth piece).  Keeps the adaptive step suggestion and the FSAL stage
  // across calls when the trajectory through the schedule is contiguous.
  void integrate(Vector& psi, const Piece& piece, double a, double b, EvolveStats& stats) {
    wd_ = &ham_.window_diagonal(piece.window);
    const bool contiguous = have_fsal_ && last_t_ == a && last_window_ == piece.window &&
                            last_kind_ == piece.kind;
    if (!contiguous) have_fsal_ = false;
    raman_t0_ = ham_.table().mark(piece.window, 1, 0);
    raman_peak_ = ham_.envelopes().peak();
    omega_rect_ = kPi / ham_.table().t_r;
    omega_c_ = ham_.params().omega_c;
    kind_ = piece.kind;

    double t = a;
    if (h_next_ <= 0.0) h_next_ = initial_step(b - a);
    while (t < b) {
      if (!have_fsal_) {
        rhs_no_phase(t, psi, k_[0]);
        ++stats.rhs_evaluations;
        have_fsal_ = true;
      }
      double h = std::min(h_next_, b - t);
      bool accepted = false;
      while (!accepted) {
        if (!(h > 1e-13 * std::max(1.0, std::abs(t))))
          throw NumericalError("step size underflow at t = " + std::to_string(t));
        attempt(t, h, psi);
        stats.rhs_evaluations += 6;
        const double sc = tol_ * (1.0 + psi.norm());
        const double err = err_.norm();
        if (!std::isfinite(err))
          throw NumericalError("non-finite integration error at t = " + std::to_string(t));
        if (err <= sc) {
          accepted = true;
          ++stats.steps_accepted;
          stats.min_step = stats.min_step == 0.0 ? h : std::min(stats.min_step, h);
          // Leave the step frame: rotate the solution and the FSAL stage by
          // the exact diagonal propagator over h.
          apply_phase(stage_phase_[5], y_, psi);   // stage 7 shares tau = h
          apply_phase(stage_phase_[5], k_[6], k_[0]);
          t += h;
          const double f = err == 0.0 ? 5.0 : 0.9 * std::pow(sc / err, 0.2);
          h_next_ = h * std::clamp(f, 0.2, 5.0);
        } else {
          ++stats.steps_rejected;
          const double f = 0.9 * std::pow(sc / err, 0.2);
          h = h * std::clamp(f, 0.1, 0.9);
        }
      }
    }
    last_t_ = b;
    last_window_ = piece.window;
    last_kind_ = piece.kind;
  }

  void reset() {
    have_fsal_ = false;
    h_next_ = 0.0;
    last_t_ = -1.0;
  }

 private:
  static constexpr double kC[7] = {0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0};

  double envelope_p(double t) const {
    if (kind_ != PieceKind::kRaman) return 0.0;
    const double s = std::sin(kPi * (t - raman_t0_) / ham_.table().t_p);
    return raman_peak_ * s * s;
  }
  double envelope_r() const { return kind_ == PieceKind::kRectangle ? omega_rect_ : 0.0; }

  double initial_step(double span) const {
    // The fastest retained frequency is the drive coupling; the diagonal is
    // handled exactly.  Start conservatively and let the controller adapt.
    const double scale = std::max({ham_.params().omega_c, ham_.params().omega_p_peak,
                                   omega_rect_, 1.0});
    return std::min(span, 0.05 / scale);
  }

  // k = -i W(t) y - (Gamma/2) y, no interaction-frame phases (tau = 0).
  void rhs_no_phase(double t, const Vector& y, Vector& k) {
    v_.setZero();
    ham_.accumulate_couplings(envelope_r(), envelope_p(t), omega_c_, y.data(), v_.data());
    const auto& cls = wd_->class_of;
    const auto& gam = wd_->gamma;
    const std::size_t dim = cls.size();
    for (std::size_t i = 0; i < dim; ++i)
      k[i] = Complex(0.0, -1.0) * v_[i] - 0.5 * gam[cls[i]] * y[i];
  }

  // k = -i e^{+iD tau} W(t) e^{-iD tau} y - (Gamma/2) y with precomputed
  // per-class phase table P[c] = e^{-i herm[c] tau}.
  void rhs(const std::vector<Complex>& phase, double t, const Vector& y, Vector& k) {
    const auto& cls = wd_->class_of;
    const auto& gam = wd_->gamma;
    const std::size_t dim = cls.size();
    for (std::size_t i = 0; i < dim; ++i) u_[i] = phase[cls[i]] * y[i];
    v_.setZero();
    ham_.accumulate_couplings(envelope_r(), envelope_p(t), omega_c_, u_.data(), v_.data());
    for (std::size_t i = 0; i < dim; ++i)
      k[i] = Complex(0.0, -1.0) * std::conj(phase[cls[i]]) * v_[i] - 0.5 * gam[cls[i]] * y[i];
  }

  void apply_phase(const std::vector<Complex>& phase, const Vector& in, Vector& out) const {
    const auto& cls = wd_->class_of;
    const std::size_t dim = cls.size();
    for (std::size_t i = 0; i < dim; ++i) out[i] = phase[cls[i]] * in[i];
  }

  void attempt(double t, double h, const Vector& phi) {
    const WindowDiagonal& wd = *wd_;
    const std::size_t n_cls = wd.herm.size();
    for (int s = 0; s < 6; ++s) {
      stage_phase_[s].resize(n_cls);
      const double tau = kC[s + 1] * h;
      for (std::size_t c = 0; c < n_cls; ++c) {
        const double ang = wd.herm[c] * tau;
        stage_phase_[s][c] = Complex(std::cos(ang), -std::sin(ang));
      }
    }

    y_ = phi + h * (1.0 / 5.0) * k_[0];
    rhs(stage_phase_[0], t + kC[1] * h, y_, k_[1]);
    y_ = phi + h * ((3.0 / 40.0) * k_[0] + (9.0 / 40.0) * k_[1]);
    rhs(stage_phase_[1], t + kC[2] * h, y_, k_[2]);
    y_ = phi + h * ((44.0 / 45.0) * k_[0] + (-56.0 / 15.0) * k_[1] + (32.0 / 9.0) * k_[2]);
    rhs(stage_phase_[2], t + kC[3] * h, y_, k_[3]);
    y_ = phi + h * ((19372.0 / 6561.0) * k_[0] + (-25360.0 / 2187.0) * k_[1] +
                    (64448.0 / 6561.0) * k_[2] + (-212.0 / 729.0) * k_[3]);
    rhs(stage_phase_[3], t + kC[4] * h, y_, k_[4]);
    y_ = phi + h * ((9017.0 / 3168.0) * k_[0] + (-355.0 / 33.0) * k_[1] +
                    (46732.0 / 5247.0) * k_[2] + (49.0 / 176.0) * k_[3] +
                    (-5103.0 / 18656.0) * k_[4]);
    rhs(stage_phase_[4], t + kC[5] * h, y_, k_[5]);
    // 5th order solution (also stage 7 input, FSAL).
    y_ = phi + h * ((35.0 / 384.0) * k_[0] + (500.0 / 1113.0) * k_[2] +
                    (125.0 / 192.0) * k_[3] + (-2187.0 / 6784.0) * k_[4] +
                    (11.0 / 84.0) * k_[5]);
    rhs(stage_phase_[5], t + h, y_, k_[6]);
    err_ = h * ((71.0 / 57600.0) * k_[0] + (-71.0 / 16695.0) * k_[2] +
                (71.0 / 1920.0) * k_[3] + (-17253.0 / 339200.0) * k_[4] +
                (22.0 / 525.0) * k_[5] + (-1.0 / 40.0) * k_[6]);
  }

  const Hamiltonian& ham_;
  double tol_;
  const WindowDiagonal* wd_ = nullptr;

  PieceKind kind_ = PieceKind::kRectangle;
  double raman_t0_ = 0.0, raman_peak_ = 0.0, omega_rect_ = 0.0, omega_c_ = 0.0;

  bool have_fsal_ = false;
  double h_next_ = 0.0;
  double last_t_ = -1.0;
  int last_window_ = 0;
  PieceKind last_kind_ = PieceKind::kRectangle;

  Vector y_, u_, v_, err_;
  Vector k_[7];
  std::vector<Complex> stage_phase_[6];
};

}  // namespace detail

// Analytic propagation across [t1, t2] while all drive channels are off: the
// Hamiltonian is diagonal, so each amplitude picks up a phase from the
// integrated detuning/blockade shifts and a decay factor from its width.
inline Vector step_gap(const Hamiltonian& ham, const Vector& psi, double t1, double t2) {
  if (t2 < t1) throw ConfigError("gap interval is reversed");
  const TimingTable& tt = ham.table();
  for (double m : tt.all_marks())
    if (m > t1 + 1e-12 && m < t2 - 1e-12)
      throw ConfigError("gap propagation interval crosses a pulse mark");
  if (tt.window_at(0.5 * (t1 + t2)) != 0)
    throw ConfigError("gap propagation called inside a gate window");
  const auto gi = ham.gap_integrals(t1, t2);
  Vector out(psi.size());
  for (std::size_t i = 0; i < static_cast<std::size_t>(psi.size()); ++i) {
    double angle = 0.0, width = 0.0;
    ham.gap_diagonal(gi, i, angle, width);
    out[i] = psi[i] * std::exp(Complex(-0.5 * width, -angle));
  }
  return out;
}

// One adaptive step inside a gate window.  The step is clipped so it never
// crosses a pulse mark; the suggested next step size is returned alongside.
struct StepOutcome {
  Vector psi;
  double t_new = 0.0;
  double h_used = 0.0;
  double h_next = 0.0;
};

inline StepOutcome step_active(const Hamiltonian& ham, const Vector& psi, double t, double h,
                               double tol) {
  const auto piece = detail::piece_at(ham.table(), t);
  detail::WindowStepper stepper(ham, tol);
  EvolveStats stats;
  const double end = std::min(piece.end, t + h);
  Vector out = psi;
  // integrate() may take several internal steps if the error controller
  // rejects; for the single-step contract we stop at the first accept by
  // integrating the clipped interval [t, min(t+h, piece end)] in one piece.
  stepper.integrate(out, piece, t, end, stats);
  StepOutcome so;
  so.psi = std::move(out);
  so.t_new = end;
  so.h_used = end - t;
  so.h_next = std::min(piece.end - end > 0.0 ? piece.end - end : piece.end - piece.begin,
                       so.h_used * 5.0);
  return so;
}

// Full-schedule propagation of i d/dt psi = H(t) psi with the pulse marks and
// sample times as hard step boundaries, analytic propagation across gaps, and
// norm-law enforcement at every sample point.
inline EvolveResult evolve(const StateVector& psi0, const Hamiltonian& ham,
                           const EvolveOptions& opts = {}) {
  if (!(psi0.scheme == ham.scheme()))
    throw ConfigError("initial state and Hamiltonian use different level schemes");
  if (!(opts.tol >= 1e-12 && opts.tol <= 1e-6))
    throw ConfigError("integration tolerance must lie in [1e-12, 1e-6]");
  if (opts.sample_points < 2) throw ConfigError("need at least two sample points");

  const TimingTable& tt = ham.table();
  const double total = tt.total_duration();

  struct Event {
    double t;
    bool record;
  };
  std::vector<Event> events;
  for (double m : tt.all_marks()) events.push_back({m, false});
  const int n_samples = opts.sample_points;
  for (int i = 0; i < n_samples; ++i)
    events.push_back({total * static_cast<double>(i) / (n_samples - 1), true});
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.t < b.t; });
  const double merge_eps = 1e-12 * std::max(1.0, total);
  std::vector<Event> merged;
  for (const Event& e : events) {
    if (!merged.empty() && e.t - merged.back().t <= merge_eps)
      merged.back().record = merged.back().record || e.record;
    else
      merged.push_back(e);
  }

  EvolveResult result;
  result.times.reserve(n_samples);
  result.states.resize(psi0.amps.size(), n_samples);

  Vector psi = psi0.amps;
  detail::WindowStepper stepper(ham, opts.tol);
  EvolveStats stats;

  double prev_norm = psi.norm();
  int col = 0;
  auto record = [&](double t) {
    const double nrm = psi.norm();
    if (!std::isfinite(nrm))
      throw NumericalError("non-finite state norm at t = " + std::to_string(t));
    if (nrm > prev_norm + 1e-9)
      throw NumericalError("state norm grew beyond tolerance at t = " + std::to_string(t));
    prev_norm = nrm;
    result.times.push_back(t);
    result.states.col(col++) = psi;
  };

  if (merged.front().record) record(merged.front().t);
  for (std::size_t k = 0; k + 1 < merged.size(); ++k) {
    const double a = merged[k].t, b = merged[k + 1].t;
    if (!(b > a)) continue;
    const double mid = 0.5 * (a + b);
    if (tt.window_at(mid) != 0) {
      stepper.integrate(psi, detail::piece_at(tt, mid), a, b, stats);
    } else {
      psi = step_gap(ham, psi, a, b);
    }
    if (merged[k + 1].record) record(merged[k + 1].t);
  }

  result.states.conservativeResize(Eigen::NoChange, col);
  result.final_state = StateVector(psi0.scheme, psi);
  result.stats = stats;
  return result;
}

}  // namespace eitsim
