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
#include "eitsim/observables.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include "eitsim/common.hpp"
#include "eitsim/hamiltonian.hpp"
#include "eitsim/hilbert.hpp"
#include "eitsim/pulses.hpp"
#include "eitsim/transport.hpp"

namespace {

using namespace eitsim;

constexpr double kSqrtHalf = 0.7071067811865475;

StateVector basis_state(const LevelScheme& scheme, const std::string& label) {
  StateVector psi(scheme);
  psi.amps[static_cast<Eigen::Index>(scheme.index_of_label(label))] = 1.0;
  return psi;
}

StateVector bell_state() {
  LevelScheme scheme(1);
  StateVector psi(scheme);
  psi.amps[static_cast<Eigen::Index>(scheme.index_of_label("0A"))] = kSqrtHalf;
  psi.amps[static_cast<Eigen::Index>(scheme.index_of_label("1B"))] = kSqrtHalf;
  return psi;
}

StateVector ghz_state(int n, Complex phase_1 = Complex(1.0, 0.0)) {
  LevelScheme scheme(n);
  StateVector psi(scheme);
  psi.amps[static_cast<Eigen::Index>(scheme.index_of_label("0" + std::string(n, 'A')))] =
      kSqrtHalf;
  psi.amps[static_cast<Eigen::Index>(scheme.index_of_label("1" + std::string(n, 'B')))] =
      kSqrtHalf * phase_1;
  return psi;
}

StateVector random_state(const LevelScheme& scheme, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  Vector amps(scheme.dim());
  for (Eigen::Index i = 0; i < amps.size(); ++i) amps[i] = Complex(dist(gen), dist(gen));
  amps /= amps.norm();
  return StateVector(scheme, std::move(amps));
}

// Random state with support only on the logical levels (no P/R, no control r).
StateVector random_logical_state(const LevelScheme& scheme, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  StateVector psi(scheme);
  const int n = scheme.num_targets;
  for (std::size_t l = 0; l < (std::size_t{1} << (n + 1)); ++l) {
    std::string label;
    label += (l >> n & 1u) ? '1' : '0';
    for (int j = 0; j < n; ++j) label += (l >> (n - 1 - j) & 1u) ? 'B' : 'A';
    psi.amps[static_cast<Eigen::Index>(scheme.index_of_label(label))] =
        Complex(dist(gen), dist(gen));
  }
  psi.amps /= psi.amps.norm();
  return psi;
}

TEST(PopulationsTest, BasisExamples) {
  StateVector bell = bell_state();
  const auto pops = populations(bell, {"0A", "1B", "1A", "rA"});
  ASSERT_EQ(pops.size(), 4u);
  EXPECT_EQ(pops[0].first, "0A");
  EXPECT_NEAR(pops[0].second, 0.5, 1e-15);
  EXPECT_NEAR(pops[1].second, 0.5, 1e-15);
  EXPECT_EQ(pops[2].second, 0.0);
  EXPECT_EQ(pops[3].second, 0.0);

  LevelScheme big(4);
  StateVector half(big);
  half.amps[static_cast<Eigen::Index>(big.index_of_label("0AAAA"))] = kSqrtHalf;
  half.amps[static_cast<Eigen::Index>(big.index_of_label("1AAAA"))] = kSqrtHalf;
  EXPECT_NEAR(population(half, "0AAAA"), 0.5, 1e-15);
  EXPECT_NEAR(population(half, "1AAAA"), 0.5, 1e-15);
  EXPECT_EQ(population(half, "1BBBB"), 0.0);
}

TEST(PopulationsTest, FullBasisSumPlusDeficitIsOne) {
  LevelScheme scheme(2);
  for (unsigned seed = 1; seed <= 5; ++seed) {
    StateVector psi = random_state(scheme, seed);
    psi.amps *= 0.9;  // emulate accumulated decay
    double total = 0.0;
    for (std::size_t i = 0; i < scheme.dim(); ++i)
      total += population(psi, scheme.label_of_index(i));
    EXPECT_NEAR(total + norm_deficit(psi), 1.0, 1e-12);
  }
}

TEST(PopulationsTest, LogicalLabelsOrder) {
  const auto labels = logical_labels(LevelScheme(2));
  ASSERT_EQ(labels.size(), 8u);
  EXPECT_EQ(labels.front(), "0AA");
  EXPECT_EQ(labels[1], "0AB");
  EXPECT_EQ(labels[4], "1AA");
  EXPECT_EQ(labels.back(), "1BB");
  StateVector bell = bell_state();
  const Eigen::VectorXd pops = logical_populations(bell);
  ASSERT_EQ(pops.size(), 4);
  EXPECT_NEAR(pops[0], 0.5, 1e-15);  // 0A
  EXPECT_NEAR(pops[3], 0.5, 1e-15);  // 1B
}

TEST(FidelityTest, GeneralFormExamples) {
  StateVector bell = bell_state();
  const Vector phi = logical_vector(bell);
  const Matrix rho = phi * phi.adjoint();
  EXPECT_NEAR(fidelity_general(rho, rho), 1.0, 1e-12);

  Vector other = Vector::Zero(4);
  other[1] = 1.0;  // |0B> is orthogonal to the Bell state
  const Matrix sigma = other * other.adjoint();
  EXPECT_NEAR(fidelity_general(rho, sigma), 0.0, 1e-9);

  // equal mixture of the target and an orthogonal state: F = sqrt(1/2)
  const Matrix mixed = 0.5 * rho + 0.5 * sigma;
  EXPECT_NEAR(fidelity_general(mixed, rho), kSqrtHalf, 1e-12);
}

TEST(FidelityTest, GeneralMatchesPureShortcut) {
  LevelScheme scheme(2);
  std::mt19937 gen(99);
  for (unsigned seed = 10; seed <= 20; ++seed) {
    const Vector a = logical_vector(random_logical_state(scheme, seed));
    const Vector b = logical_vector(random_logical_state(scheme, seed + 100));
    const double full = fidelity_general(a * a.adjoint(), b * b.adjoint());
    // the eigensolver route takes square roots of eigenvalues that are zero up
    // to roundoff, so it only tracks the rank-1 shortcut to ~sqrt(epsilon)
    EXPECT_NEAR(full, fidelity_pure(a, b), 1e-7);
    EXPECT_NEAR(fidelity_pure(a, b), std::abs(b.dot(a)), 1e-15);
  }
}

TEST(FidelityTest, GeneralFormValidation) {
  Matrix rho = Matrix::Identity(2, 2);
  Matrix rect = Matrix::Zero(2, 3);
  EXPECT_THROW(fidelity_general(rho, rect), ConfigError);
  Matrix nonherm(2, 2);
  nonherm << Complex(1.0, 0.0), Complex(0.5, 0.0), Complex(0.0, 0.0), Complex(1.0, 0.0);
  EXPECT_THROW(fidelity_general(nonherm, rho), ConfigError);
  Matrix negative = Matrix::Identity(2, 2);
  negative(1, 1) = -0.5;
  EXPECT_THROW(fidelity_general(negative, rho), ConfigError);
}

TEST(GhzFidelityTest, Examples) {
  EXPECT_NEAR(ghz_fidelity(ghz_state(4)), 1.0, 1e-12);
  // a lone product component projects onto half the target amplitude
  EXPECT_NEAR(ghz_fidelity(basis_state(LevelScheme(4), "0AAAA")), kSqrtHalf, 1e-12);
  // mirrored panel: blocked branch keeps B
  LevelScheme scheme(4);
  StateVector mirrored(scheme);
  mirrored.amps[static_cast<Eigen::Index>(scheme.index_of_label("0BBBB"))] = kSqrtHalf;
  mirrored.amps[static_cast<Eigen::Index>(scheme.index_of_label("1AAAA"))] = kSqrtHalf;
  EXPECT_NEAR(ghz_fidelity(mirrored, TargetLevel::kB), 1.0, 1e-12);
  EXPECT_NEAR(ghz_fidelity(mirrored, TargetLevel::kA), 0.0, 1e-12);
  EXPECT_THROW(ghz_fidelity(mirrored, TargetLevel::kP), ConfigError);
}

TEST(GhzFidelityTest, RelativePhaseOscillation) {
  // F = |c0 + c1|/sqrt(2): a pi relative phase between the branches nulls it
  EXPECT_NEAR(ghz_fidelity(ghz_state(4, Complex(-1.0, 0.0))), 0.0, 1e-12);
  EXPECT_NEAR(ghz_fidelity(ghz_state(4, Complex(0.0, 1.0))), kSqrtHalf, 1e-12);
}

TEST(GhzFidelityTest, UnrenormalizedByDefault) {
  StateVector ghz = ghz_state(4);
  ghz.amps *= 0.9;
  EXPECT_NEAR(ghz_fidelity(ghz), 0.9, 1e-12);
  EXPECT_NEAR(ghz_fidelity(ghz, TargetLevel::kA, /*renormalize=*/true), 1.0, 1e-12);
  StateVector leaked(LevelScheme(4));
  leaked.amps[static_cast<Eigen::Index>(LevelScheme(4).index_of_label("rAAAA"))] = 1.0;
  EXPECT_THROW(ghz_fidelity(leaked, TargetLevel::kA, /*renormalize=*/true), NumericalError);
}

TEST(GhzFidelityTest, SquaredFormMatchesPopulationsPlusCoherence) {
  LevelScheme scheme(2);
  for (unsigned seed = 30; seed <= 40; ++seed) {
    StateVector psi = random_state(scheme, seed);
    const Complex c0 = psi.amps[static_cast<Eigen::Index>(scheme.index_of_label("0AA"))];
    const Complex c1 = psi.amps[static_cast<Eigen::Index>(scheme.index_of_label("1BB"))];
    const double expected_sq =
        0.5 * (std::norm(c0) + std::norm(c1)) + (c0 * std::conj(c1)).real();
    const double f = ghz_fidelity(psi);
    EXPECT_NEAR(f * f, expected_sq, 1e-12);
  }
}

TEST(GhzFidelityTest, GlobalPhaseInvariant) {
  StateVector ghz = ghz_state(4);
  StateVector rotated = ghz;
  rotated.amps *= std::exp(Complex(0.0, 1.234));
  EXPECT_NEAR(ghz_fidelity(rotated), ghz_fidelity(ghz), 1e-14);
}

TEST(ParityTest, BellExamples) {
  EXPECT_NEAR(parity(bell_state()), 1.0, 1e-12);
  LevelScheme scheme(1);
  StateVector anti(scheme);
  anti.amps[static_cast<Eigen::Index>(scheme.index_of_label("0B"))] = kSqrtHalf;
  anti.amps[static_cast<Eigen::Index>(scheme.index_of_label("1A"))] = kSqrtHalf;
  EXPECT_NEAR(parity(anti), -1.0, 1e-12);
  EXPECT_NEAR(parity(basis_state(scheme, "rA")), -1.0, 1e-12);  // fully leaked
  EXPECT_THROW(parity(ghz_state(4)), ConfigError);
}

TEST(Renyi2Test, ProductAndBellExamples) {
  // pure product state: every cut is pure, S2 = 0
  StateVector product = basis_state(LevelScheme(2), "0AA");
  for (const auto& subset : std::vector<std::vector<int>>{{0}, {1}, {2}, {0, 1}})
    EXPECT_NEAR(renyi2(product, subset), 0.0, 1e-12);
  EXPECT_EQ(renyi2(product, {}), 0.0);

  // Bell pair: one ebit across the control cut
  EXPECT_NEAR(renyi2(bell_state(), {0}), 1.0, 1e-12);
  EXPECT_NEAR(renyi2(bell_state(), {1}), 1.0, 1e-12);
}

TEST(Renyi2Test, GhzProperSubsetsCarryOneBit) {
  StateVector ghz = ghz_state(4);
  for (const auto& subset : std::vector<std::vector<int>>{
           {0}, {1}, {4}, {0, 1}, {1, 2}, {1, 2, 3}, {0, 1, 2, 3}, {1, 2, 3, 4}})
    EXPECT_NEAR(renyi2(ghz, subset, EntropyConvention::kLogical), 1.0, 1e-12);
  // the full register is pure
  EXPECT_NEAR(renyi2(ghz, {0, 1, 2, 3, 4}, EntropyConvention::kLogical), 0.0, 1e-12);
  EXPECT_NEAR(renyi2(ghz, {0, 1, 2, 3, 4}, EntropyConvention::kFull), 0.0, 1e-12);
}

TEST(Renyi2Test, SchmidtSymmetryOnRandomPureStates) {
  LevelScheme scheme(2);
  for (unsigned seed = 50; seed < 150; ++seed) {
    StateVector psi = random_state(scheme, seed);
    for (const auto& cut : std::vector<std::pair<std::vector<int>, std::vector<int>>>{
             {{0}, {1, 2}}, {{1}, {0, 2}}, {{0, 2}, {1}}}) {
      // full-register convention: the global state is pure by construction
      const double sa = renyi2(psi, cut.first, EntropyConvention::kFull);
      const double sb = renyi2(psi, cut.second, EntropyConvention::kFull);
      ASSERT_NEAR(sa, sb, 1e-9);
      // logical convention renormalizes the qubit projection, still pure
      const double la = renyi2(psi, cut.first, EntropyConvention::kLogical);
      const double lb = renyi2(psi, cut.second, EntropyConvention::kLogical);
      ASSERT_NEAR(la, lb, 1e-9);
    }
  }
}

TEST(Renyi2Test, FullyLeakedStateHasNoLogicalContent) {
  StateVector leaked = basis_state(LevelScheme(1), "rP");
  EXPECT_THROW(renyi2(leaked, {0}, EntropyConvention::kLogical), NumericalError);
  // the full convention still sees a valid (pure) state
  EXPECT_NEAR(renyi2(leaked, {0}, EntropyConvention::kFull), 0.0, 1e-12);
}

TEST(MutualInformationTest, EndpointsVanishExactly) {
  StateVector ghz = ghz_state(4);
  EXPECT_EQ(mutual_information(ghz, {}), 0.0);
  EXPECT_EQ(mutual_information(ghz, {0, 1, 2, 3, 4}), 0.0);
  StateVector noisy = random_state(LevelScheme(2), 7);
  EXPECT_EQ(mutual_information(noisy, {}), 0.0);
  EXPECT_EQ(mutual_information(noisy, {0, 1, 2}), 0.0);
}

TEST(MutualInformationTest, GhzAndProductExamples) {
  StateVector ghz = ghz_state(4);
  EXPECT_NEAR(mutual_information(ghz, {0}), 2.0, 1e-12);
  EXPECT_NEAR(mutual_information(ghz, {0, 1}), 2.0, 1e-12);
  StateVector product = basis_state(LevelScheme(4), "1BBBB");
  for (const auto& subset : std::vector<std::vector<int>>{{0}, {2}, {0, 3}})
    EXPECT_NEAR(mutual_information(product, subset), 0.0, 1e-12);
}

TEST(MutualInformationTest, SymmetricUnderComplement) {
  StateVector psi = random_state(LevelScheme(2), 77);
  for (const auto& cut : std::vector<std::pair<std::vector<int>, std::vector<int>>>{
           {{0}, {1, 2}}, {{2}, {0, 1}}}) {
    EXPECT_NEAR(mutual_information(psi, cut.first), mutual_information(psi, cut.second),
                1e-12);
    EXPECT_NEAR(mutual_information(psi, cut.first, EntropyConvention::kFull),
                mutual_information(psi, cut.second, EntropyConvention::kFull), 1e-12);
  }
}

TEST(MutualInformationTest, ValidatesSubsets) {
  StateVector ghz = ghz_state(4);
  EXPECT_THROW(mutual_information(ghz, {0, 0}), ConfigError);
  EXPECT_THROW(mutual_information(ghz, {5}), ConfigError);
  EXPECT_THROW(mutual_information(ghz, {-1}), ConfigError);
}

TEST(TruthTableTest, SingleTargetGate) {
  Hamiltonian ham(LevelScheme(1),
                  build_timing(1, 0.0166,
                               raman_duration_from_peak(PhysicalParams::defaults().omega_p_peak,
                                                        PhysicalParams::defaults().delta),
                               1.09),
                  build_single_geometry(5.0), PhysicalParams::defaults());
  std::vector<std::pair<std::string, StateVector>> initials = {
      {"0:A", basis_state(ham.scheme(), "0A")},
      {"1:A", basis_state(ham.scheme(), "1A")},
  };
  EvolveOptions opts;
  opts.sample_points = 2;
  const TruthTable tt = truth_table(initials, ham, opts);
  ASSERT_EQ(tt.row_labels.size(), 2u);
  ASSERT_EQ(tt.col_labels.size(), 4u);
  ASSERT_EQ(tt.probabilities.rows(), 2);
  ASSERT_EQ(tt.probabilities.cols(), 4);
  // columns follow logical_labels order: 0A, 0B, 1A, 1B
  EXPECT_GE(tt.probabilities(0, 0), 0.99);  // 0A -> 0A (blockade)
  EXPECT_GE(tt.probabilities(1, 3), 0.95);  // 1A -> 1B (transfer)
  for (Eigen::Index r = 0; r < tt.probabilities.rows(); ++r) {
    EXPECT_LE(tt.probabilities.row(r).sum(), 1.0 + 1e-9);
    EXPECT_GE(tt.probabilities.row(r).minCoeff(), 0.0);
  }
}

}  // namespace
