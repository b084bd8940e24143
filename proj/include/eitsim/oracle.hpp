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
#include <vector>

#include "eitsim/common.hpp"
#include "eitsim/hamiltonian.hpp"
#include "eitsim/hilbert.hpp"

namespace eitsim {

// Applies exp(M) to v by the plain Taylor series, scaled so every partial
// application has ||M/2^s||_inf <= 0.5 and the series converges to machine
// precision in a dozen terms.  No Pade/diagonalization machinery: this is a
// test reference, chosen for independence from the production integrator.
inline Vector expm_action(const Matrix& m, Vector v) {
  const double norm_inf = m.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  double scaled = norm_inf;
  while (scaled > 0.5 && s < 64) {
    scaled *= 0.5;
    ++s;
  }
  const Matrix b = m / static_cast<double>(std::uint64_t{1} << s);
  const std::int64_t reps = std::int64_t{1} << s;
  Vector term(v.size()), sum(v.size());
  for (std::int64_t r = 0; r < reps; ++r) {
    term = v;
    sum = v;
    for (int k = 1; k <= 120; ++k) {
      term = (b * term) / static_cast<double>(k);
      sum += term;
      if (term.norm() <= 1e-18 * (sum.norm() + 1e-300)) break;
      if (k == 120) throw NumericalError("matrix exponential series failed to converge");
    }
    v = sum;
  }
  return v;
}

// Reference propagator: fixed-step midpoint-exponential stepping on the
// dense H(t), split exactly at the pulse marks.  Second order in the step,
// spectrally exact per step; `steps_per_us` controls the only error knob.
inline StateVector oracle_evolve(const StateVector& psi0, const Hamiltonian& ham,
                                 double steps_per_us) {
  if (!(psi0.scheme == ham.scheme()))
    throw ConfigError("initial state and Hamiltonian use different level schemes");
  if (!(steps_per_us > 0.0)) throw ConfigError("oracle step density must be positive");
  const std::vector<double> marks = ham.table().all_marks();
  Vector psi = psi0.amps;
  const Complex minus_i(0.0, -1.0);
  for (std::size_t seg = 0; seg + 1 < marks.size(); ++seg) {
    const double a = marks[seg], b = marks[seg + 1];
    if (!(b > a)) continue;
    const auto n = static_cast<std::int64_t>(std::ceil((b - a) * steps_per_us));
    const double dt = (b - a) / static_cast<double>(n);
    for (std::int64_t i = 0; i < n; ++i) {
      const double t_mid = a + (static_cast<double>(i) + 0.5) * dt;
      const Matrix m = (minus_i * dt) * ham.assemble_dense(t_mid);
      psi = expm_action(m, std::move(psi));
    }
  }
  return StateVector(psi0.scheme, std::move(psi));
}

}  // namespace eitsim
