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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "eitsim/common.hpp"
#include "eitsim/hilbert.hpp"
#include "eitsim/propagate.hpp"

namespace eitsim {

// Time-stamped measurement snapshot: every derived quantity of one sample.
// Populations cover whatever label tuples the scenario declared; when they
// span the complete basis their sum plus norm_deficit is 1 to rounding.
struct ObservableRecord {
  double t = 0.0;
  std::vector<std::pair<std::string, double>> populations;
  std::optional<double> fidelity;
  std::optional<double> parity;
  std::vector<std::pair<std::string, double>> renyi2;
  std::vector<std::pair<std::string, double>> mutual_information;
  double norm_deficit = 0.0;
};

inline double norm_deficit(const StateVector& psi) { return 1.0 - psi.norm_squared(); }

// |amplitude|^2 for each requested basis label, in request order.
inline std::vector<std::pair<std::string, double>> populations(
    const StateVector& psi, const std::vector<std::string>& labels) {
  std::vector<std::pair<std::string, double>> out;
  out.reserve(labels.size());
  for (const auto& label : labels) {
    const std::size_t i = psi.scheme.index_of_label(label);
    out.emplace_back(label, std::norm(psi.amps[static_cast<Eigen::Index>(i)]));
  }
  return out;
}

inline double population(const StateVector& psi, const std::string& label) {
  return std::norm(psi.amps[static_cast<Eigen::Index>(psi.scheme.index_of_label(label))]);
}

// Populations of the 2^(N+1) logical tuples, control bit slowest, in the
// same order as logical_labels().
inline Eigen::VectorXd logical_populations(const StateVector& psi) {
  const Vector logical = logical_vector(psi);
  return logical.cwiseAbs2();
}

inline std::vector<std::string> logical_labels(const LevelScheme& scheme) {
  const int n = scheme.num_targets;
  const std::size_t count = std::size_t{1} << (n + 1);
  std::vector<std::string> labels(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::string s;
    s += (idx >> n & 1u) ? '1' : '0';
    for (int j = 0; j < n; ++j) s += (idx >> (n - 1 - j) & 1u) ? 'B' : 'A';
    labels[idx] = s;
  }
  return labels;
}

// Uhlmann fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)) via two Hermitian
// eigendecompositions.  rho may carry trace < 1 (leaky logical projection);
// sigma is expected normalized.  Production code uses the pure-target
// shortcut below; this full form exists for arbitrary mixed comparisons.
inline double fidelity_general(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != rho.cols() || sigma.rows() != sigma.cols() || rho.rows() != sigma.rows())
    throw ConfigError("fidelity needs square matrices of equal dimension");
  const double scale = std::max(1.0, std::max(std::abs(rho.trace()), std::abs(sigma.trace())));
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale ||
      (sigma - sigma.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw ConfigError("fidelity needs Hermitian inputs");
  Eigen::SelfAdjointEigenSolver<Matrix> es_rho(rho);
  if (es_rho.eigenvalues().minCoeff() < -1e-10 * scale)
    throw ConfigError("fidelity input is not positive semidefinite");
  Eigen::VectorXd sqrt_eigs = es_rho.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Matrix sqrt_rho =
      es_rho.eigenvectors() * sqrt_eigs.asDiagonal() * es_rho.eigenvectors().adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> es_mid(sqrt_rho * sigma * sqrt_rho);
  if (es_mid.eigenvalues().minCoeff() < -1e-10 * scale)
    throw ConfigError("fidelity input is not positive semidefinite");
  return es_mid.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

// Pure-target shortcut: F = sqrt(<phi|rho|phi>) with rho = psi_L psi_L^dag
// collapses to |<phi|psi_L>| without forming any matrix.
inline double fidelity_pure(const Vector& logical_state, const Vector& target) {
  if (logical_state.size() != target.size())
    throw ConfigError("fidelity needs states of equal dimension");
  return std::abs(target.dot(logical_state));  // Eigen dot conjugates the left factor
}

// Fidelity against the maximally entangled target
//   (|0, l...l> + |1, l'...l'>)/sqrt(2),
// where l is the logical level the blocked (control |0>) branch keeps and l'
// its swap image.  The default follows the all-A initial configuration; pass
// kB for the mirrored panel.  The logical projection is used unrenormalized,
// so decay and leakage lower the result; `renormalize` divides it out.
inline double ghz_fidelity(const StateVector& psi, TargetLevel zero_branch = TargetLevel::kA,
                           bool renormalize = false) {
  if (zero_branch != TargetLevel::kA && zero_branch != TargetLevel::kB)
    throw ConfigError("GHZ orientation must be a logical target level");
  const int n = psi.scheme.num_targets;
  const std::vector<TargetLevel> kept(n, zero_branch);
  const std::vector<TargetLevel> flipped(
      n, zero_branch == TargetLevel::kA ? TargetLevel::kB : TargetLevel::kA);
  const Complex c0 =
      psi.amps[static_cast<Eigen::Index>(psi.scheme.index_of(ControlLevel::kG0, kept))];
  const Complex c1 =
      psi.amps[static_cast<Eigen::Index>(psi.scheme.index_of(ControlLevel::kG1, flipped))];
  double f = std::abs(c0 + c1) / std::sqrt(2.0);
  if (renormalize) {
    const double norm_logical = logical_vector(psi).norm();
    if (norm_logical < 1e-150) throw NumericalError("fully leaked state has no logical content");
    f /= norm_logical;
  }
  return f;
}

// Bell-quality witness for the single-target case:
//   P = 2 (P_|0A> + P_|1B>) - 1 .
inline double parity(const StateVector& psi) {
  if (psi.scheme.num_targets != 1)
    throw ConfigError("parity is defined for the single-target scenario");
  return 2.0 * (population(psi, "0A") + population(psi, "1B")) - 1.0;
}

// Which state the entropy subsets act on: the qubit projection of the state
// (leakage discarded, then renormalized) or the full level structure.
enum class EntropyConvention { kLogical, kFull };

namespace detail {

inline DensityMatrix reduced_state(const StateVector& psi, const std::vector<int>& subset,
                                   EntropyConvention convention) {
  if (convention == EntropyConvention::kLogical) {
    DensityMatrix dm = project_logical(psi);
    if (!(dm.trace() > 1e-150)) throw NumericalError("fully leaked state has no logical content");
    return partial_trace(dm, subset);
  }
  return partial_trace(psi, subset);
}

}  // namespace detail

// Second-order Renyi entropy S2 = -log2 Tr(rho^2) of the trace-renormalized
// reduced state over `subset` (0 = control, 1..N = targets).
inline double renyi2(const StateVector& psi, const std::vector<int>& subset,
                     EntropyConvention convention = EntropyConvention::kLogical) {
  if (subset.empty()) return 0.0;
  const DensityMatrix red = detail::reduced_state(psi, subset, convention);
  if (!(red.trace() > 1e-150)) throw NumericalError("fully leaked state has no logical content");
  const double p = purity(red);
  return 0.0 - std::log2(std::min(1.0, std::max(p, 1e-300)));
}

// Renyi mutual information I = S2(A) + S2(B) - S2(AB) with B the complement
// of A and S2(AB) evaluated on the renormalized global state.
inline double mutual_information(const StateVector& psi, const std::vector<int>& subset_a,
                                 EntropyConvention convention = EntropyConvention::kLogical) {
  const int parties = psi.scheme.num_targets + 1;
  std::vector<char> in_a(parties, 0);
  for (int p : subset_a) {
    if (p < 0 || p >= parties) throw ConfigError("subset names a party outside the register");
    if (in_a[p]) throw ConfigError("subset lists a party twice");
    in_a[p] = 1;
  }
  std::vector<int> subset_b, all(parties);
  for (int p = 0; p < parties; ++p) {
    all[p] = p;
    if (!in_a[p]) subset_b.push_back(p);
  }
  const double s_a = renyi2(psi, subset_a, convention);
  const double s_b = renyi2(psi, subset_b, convention);
  const double s_ab = renyi2(psi, all, convention);
  return s_a + s_b - s_ab;
}

// Gate truth table: one evolved row per initial state, one column per
// logical basis tuple.  Row sums fall short of 1 by the accumulated decay
// and leakage of that input.
struct TruthTable {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  Eigen::MatrixXd probabilities;  // rows x 2^(N+1)
};

inline TruthTable truth_table(const std::vector<std::pair<std::string, StateVector>>& initials,
                              const Hamiltonian& ham, const EvolveOptions& opts = {}) {
  if (initials.empty()) throw ConfigError("truth table needs at least one initial state");
  TruthTable tt;
  tt.col_labels = logical_labels(ham.scheme());
  tt.probabilities.resize(static_cast<Eigen::Index>(initials.size()),
                          static_cast<Eigen::Index>(tt.col_labels.size()));
  Eigen::Index row = 0;
  for (const auto& [name, psi0] : initials) {
    tt.row_labels.push_back(name);
    EvolveOptions fast = opts;
    fast.sample_points = 2;  // endpoints only; the table needs the final state
    const EvolveResult res = evolve(psi0, ham, fast);
    tt.probabilities.row(row++) = logical_populations(res.final_state).transpose();
  }
  return tt;
}

}  // namespace eitsim
