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
#include "eitsim/hamiltonian.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "eitsim/common.hpp"
#include "eitsim/hilbert.hpp"
#include "eitsim/pulses.hpp"
#include "eitsim/transport.hpp"

namespace {

using namespace eitsim;

constexpr double kTr = 0.0166;
constexpr double kTgap = 1.09;
constexpr double kGammaRHalf = 0.0009124087591240876;  // 1/(2*548)
constexpr double kGammaPHalf = 18.93939393939394;      // 1/(2*0.0264)
constexpr double kDelta = 7539.822368615503;           // 2*pi*1200
constexpr double kVct5 = 716.2831250184728;            // 2*pi*14250/5^3
constexpr double kVtt60 = 0.00027418907076083755;      // 2*pi*2.036e6/60^6

PhysicalParams default_params() { return PhysicalParams::defaults(); }

double t_p_default() {
  const PhysicalParams p = default_params();
  return raman_duration_from_peak(p.omega_p_peak, p.delta);
}

Hamiltonian single_target_hamiltonian(PhysicalParams params = default_params(),
                                      int n_cycles = 1) {
  return Hamiltonian(LevelScheme(1), build_timing(n_cycles, kTr, t_p_default(), kTgap),
                     build_single_geometry(5.0), params);
}

Hamiltonian two_target_hamiltonian(PhysicalParams params = default_params()) {
  Geometry g;
  g.targets = {Point(0.0, 0.0), Point(60.0, 0.0)};
  g.dwell_points = {Point(5.0, 0.0), Point(55.0, 0.0)};
  return Hamiltonian(LevelScheme(2), build_timing(2, kTr, t_p_default(), kTgap), g, params);
}

Hamiltonian square_hamiltonian(PhysicalParams params = default_params()) {
  return Hamiltonian(LevelScheme(4), build_timing(4, kTr, t_p_default(), kTgap),
                     build_square_geometry(60.0, 5.0), params);
}

Vector random_vector(std::size_t dim, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  Vector v(dim);
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Complex(dist(gen), dist(gen));
  return v / v.norm();
}

TEST(PhysicalParamsTest, DefaultsMatchQuotedValues) {
  const PhysicalParams p = default_params();
  EXPECT_NEAR(p.omega_p_peak, 439.822971502571, 1e-9);        // 2*pi*70
  EXPECT_NEAR(p.omega_c, 1099.5574287564275, 1e-9);           // 2.5x the peak
  EXPECT_NEAR(p.delta, kDelta, 1e-9);
  EXPECT_NEAR(p.gamma_r, 2.0 * kGammaRHalf, 1e-15);
  EXPECT_NEAR(p.gamma_p, 2.0 * kGammaPHalf, 1e-12);
  EXPECT_NEAR(p.c3 / 125.0, kVct5, 1e-9);                     // V_CT at 5 um
  EXPECT_NEAR(p.c6 / std::pow(60.0, 6.0), kVtt60, 1e-15);     // V_TT at 60 um

  PhysicalParams bad = p;
  bad.delta = 0.0;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = p;
  bad.gamma_p = -1.0;
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(HamiltonianTest, ControlCouplingDuringRectangles) {
  Hamiltonian ham = single_target_hamiltonian();
  const TimingTable& tt = ham.table();
  const LevelScheme& scheme = ham.scheme();
  const auto i1 = static_cast<Eigen::Index>(scheme.index_of_label("1A"));
  const auto ir = static_cast<Eigen::Index>(scheme.index_of_label("rA"));

  Matrix h = ham.assemble_dense(tt.mark(1, 0, 0) + 0.5 * kTr);
  EXPECT_NEAR(std::abs(h(ir, i1) - Complex(94.62628474668051, 0.0)), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(h(i1, ir) - std::conj(h(ir, i1))), 0.0, 1e-12);
  // |0> never couples to the Rydberg level
  const auto i0 = static_cast<Eigen::Index>(scheme.index_of_label("0A"));
  EXPECT_EQ(h(ir, i0), Complex(0.0, 0.0));
  // between the rectangles the control drive is off
  Matrix mid = ham.assemble_dense(tt.mark(1, 1, 0) + 0.5 * t_p_default());
  EXPECT_EQ(mid(ir, i1), Complex(0.0, 0.0));
}

TEST(HamiltonianTest, ControlDecayOnRydbergDiagonal) {
  Hamiltonian ham = single_target_hamiltonian();
  Matrix h = ham.assemble_dense(0.5 * kTr);
  const auto ir = static_cast<Eigen::Index>(ham.scheme().index_of_label("rA"));
  EXPECT_NEAR(h(ir, ir).real(), 0.0, 1e-12);
  EXPECT_NEAR(h(ir, ir).imag(), -kGammaRHalf, 1e-15);
}

TEST(HamiltonianTest, TargetLadderDuringRaman) {
  Hamiltonian ham = single_target_hamiltonian();
  const TimingTable& tt = ham.table();
  const LevelScheme& scheme = ham.scheme();
  const double t = tt.mark(1, 1, 0) + 0.5 * t_p_default();
  Matrix h = ham.assemble_dense(t);
  const auto ia = static_cast<Eigen::Index>(scheme.index_of_label("0A"));
  const auto ib = static_cast<Eigen::Index>(scheme.index_of_label("0B"));
  const auto ip = static_cast<Eigen::Index>(scheme.index_of_label("0P"));
  const auto irr = static_cast<Eigen::Index>(scheme.index_of_label("0R"));
  // both legs of the Raman pair share the peak/2 coupling at the envelope top
  EXPECT_NEAR(std::abs(h(ip, ia) - Complex(219.9114857512855, 0.0)), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(h(ip, ib) - h(ip, ia)), 0.0, 1e-12);
  // EIT coupling leg P <-> R at omega_c/2
  EXPECT_NEAR(std::abs(h(irr, ip) - Complex(549.7787143782138, 0.0)), 0.0, 1e-9);
  // P diagonal: -Delta - i gamma_p/2
  EXPECT_NEAR(h(ip, ip).real(), -kDelta, 1e-9);
  EXPECT_NEAR(h(ip, ip).imag(), -kGammaPHalf, 1e-12);
}

TEST(HamiltonianTest, DetunedPDiagonalPersistsInGaps) {
  Hamiltonian ham = two_target_hamiltonian();
  const double gap_mid = ham.table().window_end(1) + 0.5 * kTgap;
  Matrix h = ham.assemble_dense(gap_mid);
  const auto ip = static_cast<Eigen::Index>(ham.scheme().index_of_label("0PA"));
  EXPECT_NEAR(h(ip, ip).real(), -kDelta, 1e-9);
  EXPECT_NEAR(h(ip, ip).imag(), -kGammaPHalf, 1e-12);
  // all couplings vanish in the gap
  Matrix offdiag = h;
  offdiag.diagonal().setZero();
  EXPECT_EQ(offdiag.norm(), 0.0);
}

TEST(HamiltonianTest, BlockadeShiftRequiresBothRydbergLevels) {
  Hamiltonian ham = single_target_hamiltonian();
  const LevelScheme& scheme = ham.scheme();
  Matrix h = ham.assemble_dense(0.5 * kTr);
  const auto irr = static_cast<Eigen::Index>(scheme.index_of_label("rR"));
  const auto i1r = static_cast<Eigen::Index>(scheme.index_of_label("1R"));
  const auto ira = static_cast<Eigen::Index>(scheme.index_of_label("rA"));
  EXPECT_NEAR(h(irr, irr).real(), kVct5, 1e-9);
  EXPECT_EQ(h(i1r, i1r).real(), 0.0);  // control in |1>: no interaction
  EXPECT_EQ(h(ira, ira).real(), 0.0);  // target not in |R>: no interaction
  EXPECT_NEAR(ham.v_ct(0.5 * kTr, 1), kVct5, 1e-9);
}

TEST(HamiltonianTest, TargetTargetShiftCountsPairsOnce) {
  Hamiltonian ham = two_target_hamiltonian();
  Matrix h = ham.assemble_dense(0.5 * kTr);
  const auto irr = static_cast<Eigen::Index>(ham.scheme().index_of_label("0RR"));
  EXPECT_NEAR(h(irr, irr).real(), kVtt60, 1e-15);
  const auto ira = static_cast<Eigen::Index>(ham.scheme().index_of_label("0RA"));
  EXPECT_EQ(h(ira, ira).real(), 0.0);  // a single R picks up no pair shift
}

TEST(HamiltonianTest, LogicalDiagonalIsZero) {
  Hamiltonian ham = square_hamiltonian();
  const LevelScheme& scheme = ham.scheme();
  Matrix h = ham.assemble_dense(0.5 * kTr);
  for (const char c : {'0', '1'})
    for (int bits = 0; bits < 16; ++bits) {
      std::string label(1, c);
      for (int j = 0; j < 4; ++j) label += (bits >> j & 1) ? 'B' : 'A';
      const auto idx = static_cast<Eigen::Index>(scheme.index_of_label(label));
      EXPECT_EQ(h(idx, idx), Complex(0.0, 0.0)) << label;
    }
}

TEST(HamiltonianTest, InteractionTermIsDiagonal) {
  Hamiltonian ham = two_target_hamiltonian();
  for (const double t : {0.01, 1.0, 2.0}) {
    Matrix v = ham.interaction_term(t);
    Matrix offdiag = v;
    offdiag.diagonal().setZero();
    EXPECT_EQ(offdiag.norm(), 0.0);
  }
}

TEST(HamiltonianTest, MatrixFreeApplyMatchesDenseAssembly) {
  Hamiltonian ham = two_target_hamiltonian();
  const double total = ham.table().total_duration();
  std::mt19937 gen(123);
  std::uniform_real_distribution<double> time_dist(0.0, total);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector psi = random_vector(ham.scheme().dim(), 1000 + trial);
    for (int k = 0; k < 20; ++k) {
      const double t = time_dist(gen);
      const Vector via_apply = ham.apply(t, psi);
      const Vector via_dense = ham.assemble_dense(t) * psi;
      const double scale = std::max(1.0, via_dense.norm());
      ASSERT_LT((via_apply - via_dense).norm(), 1e-12 * scale);
    }
  }
  // spot checks on the full register
  Hamiltonian big = square_hamiltonian();
  std::uniform_real_distribution<double> big_time(0.0, big.table().total_duration());
  for (int trial = 0; trial < 5; ++trial) {
    const Vector psi = random_vector(big.scheme().dim(), 2000 + trial);
    const double t = big_time(gen);
    const Vector diff = big.apply(t, psi) - big.assemble_dense(t) * psi;
    ASSERT_LT(diff.norm(), 1e-12 * big.scheme().dim());
  }
}

TEST(HamiltonianTest, HermitianWhenDecaysVanish) {
  PhysicalParams params = default_params();
  params.gamma_r = 0.0;
  params.gamma_p = 0.0;
  Hamiltonian ham = two_target_hamiltonian(params);
  for (const double t : {0.008, 0.35, 1.2, 1.9, 2.4}) {
    Matrix h = ham.assemble_dense(t);
    EXPECT_LT((h - h.adjoint()).norm(), 1e-12 * std::max(1.0, h.norm()));
  }
}

TEST(HamiltonianTest, AntiHermitianPartMatchesWidthFormula) {
  Hamiltonian ham = two_target_hamiltonian();
  const LevelScheme& scheme = ham.scheme();
  for (const double t : {0.01, 0.4, 1.5}) {
    Matrix h = ham.assemble_dense(t);
    Matrix anti = (h - h.adjoint()) / Complex(0.0, 2.0);
    // the dissipative part is diagonal: -(gamma_r [c=r] + gamma_p n_P)/2
    Matrix offdiag = anti;
    offdiag.diagonal().setZero();
    EXPECT_LT(offdiag.norm(), 1e-12);
    for (std::size_t i = 0; i < scheme.dim(); ++i) {
      const std::string label = scheme.label_of_index(i);
      double width = (label[0] == 'r') ? kGammaRHalf : 0.0;
      for (std::size_t j = 1; j < label.size(); ++j)
        if (label[j] == 'P') width += kGammaPHalf;
      EXPECT_NEAR(anti(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real(),
                  -width, 1e-9)
          << label;
    }
  }
}

TEST(HamiltonianTest, WindowDiagonalClassesReproduceDiagonal) {
  Hamiltonian ham = square_hamiltonian();
  const std::size_t dim = ham.scheme().dim();
  for (int w = 1; w <= 4; ++w) {
    const WindowDiagonal& wd = ham.window_diagonal(w);
    ASSERT_EQ(wd.class_of.size(), dim);
    const double t_mid = 0.5 * (ham.table().window_begin(w) + ham.table().window_end(w));
    std::vector<Complex> diag(dim);
    ham.diagonal(t_mid, diag.data());
    for (std::size_t i = 0; i < dim; ++i) {
      const std::uint16_t cls = wd.class_of[i];
      ASSERT_LT(cls, wd.herm.size());
      EXPECT_NEAR(wd.herm[cls], diag[i].real(), 1e-12 * std::max(1.0, std::abs(diag[i].real())));
      EXPECT_NEAR(-0.5 * wd.gamma[cls], diag[i].imag(), 1e-12 * std::max(1.0, wd.gamma[cls]));
    }
    // deduplication keeps the class count far below the state count
    EXPECT_LT(wd.herm.size(), 70u);
  }
  EXPECT_THROW(ham.window_diagonal(0), ConfigError);
  EXPECT_THROW(ham.window_diagonal(5), ConfigError);
}

// Closed form for Int C3/R^3 dt along a straight hop at constant speed:
// collinear target ahead of/behind the path, or a perpendicular-offset target.
double line_integral_collinear(double c3, double r0, double hop, double dt) {
  return c3 * dt / hop * (0.5 / (r0 * r0) - 0.5 / ((r0 + hop) * (r0 + hop)));
}

double line_integral_offset(double c3, const Point& p0, const Point& p1, const Point& q,
                            double dt) {
  const Point v = p1 - p0;
  const double len = v.norm();
  const Point dir = v / len;
  const double s_q = (q - p0).dot(dir);       // foot of the perpendicular
  const double h2 = (q - (p0 + s_q * dir)).squaredNorm();
  auto antiderivative = [&](double s) { return s / (h2 * std::sqrt(s * s + h2)); };
  return c3 * dt / len * (antiderivative(len - s_q) - antiderivative(-s_q));
}

TEST(HamiltonianTest, GapIntegralsAgainstClosedForms) {
  Hamiltonian ham = two_target_hamiltonian();
  const double t1 = ham.table().window_end(1);
  const double t2 = ham.table().window_begin(2);
  const auto gi = ham.gap_integrals(t1, t2);
  ASSERT_EQ(gi.ct.size(), 2u);
  EXPECT_NEAR(gi.dt, kTgap, 1e-12);
  const double c3 = ham.params().c3;
  // hop (5,0) -> (55,0): target 1 at the origin recedes collinearly from 5 um
  const double expect_1 = line_integral_collinear(c3, 5.0, 50.0, kTgap);
  // target 2 at (60,0) is approached head-on: same form traversed backwards
  const double expect_2 = line_integral_collinear(c3, 5.0, 50.0, kTgap);
  EXPECT_NEAR(gi.ct[0], expect_1, 1e-9 * expect_1);
  EXPECT_NEAR(gi.ct[1], expect_2, 1e-9 * expect_2);

  // square layout: the first hop runs along the main diagonal, so targets 1
  // and 2 are collinear with it while targets 3 and 4 sit off to the side
  Hamiltonian sq = square_hamiltonian();
  const double s1 = sq.table().window_end(1);
  const double s2 = sq.table().window_begin(2);
  const auto gsq = sq.gap_integrals(s1, s2);
  const Geometry& g = sq.geometry();
  const double hop = (g.dwell_points[1] - g.dwell_points[0]).norm();
  const double collinear = line_integral_collinear(c3, 5.0, hop, kTgap);
  EXPECT_NEAR(gsq.ct[0], collinear, 1e-9 * collinear);
  EXPECT_NEAR(gsq.ct[1], collinear, 1e-9 * collinear);
  for (int j = 2; j < 4; ++j) {
    const double expected = line_integral_offset(c3, g.dwell_points[0], g.dwell_points[1],
                                                 g.targets[static_cast<std::size_t>(j)], kTgap);
    EXPECT_NEAR(gsq.ct[static_cast<std::size_t>(j)], expected,
                1e-8 * std::max(1e-6, expected))
        << "target " << j + 1;
  }
}

TEST(HamiltonianTest, GapDiagonalComponents) {
  Hamiltonian ham = single_target_hamiltonian(default_params(), /*n_cycles=*/2);
  const double t1 = ham.table().window_end(1);
  const double t2 = ham.table().window_begin(2);
  const auto gi = ham.gap_integrals(t1, t2);
  // parked control: the blockade integral is static, C3/a^3 * dt
  EXPECT_NEAR(gi.ct[0], kVct5 * kTgap, 1e-9 * kVct5 * kTgap);

  const LevelScheme& scheme = ham.scheme();
  double angle = 0.0, width = 0.0;
  ham.gap_diagonal(gi, scheme.index_of_label("0A"), angle, width);
  EXPECT_EQ(angle, 0.0);
  EXPECT_EQ(width, 0.0);
  ham.gap_diagonal(gi, scheme.index_of_label("rA"), angle, width);
  EXPECT_EQ(angle, 0.0);
  EXPECT_NEAR(width, kTgap / 548.0, 1e-12);
  ham.gap_diagonal(gi, scheme.index_of_label("0P"), angle, width);
  EXPECT_NEAR(angle, -kDelta * kTgap, 1e-9);
  EXPECT_NEAR(width, kTgap / 0.0264, 1e-9);
  ham.gap_diagonal(gi, scheme.index_of_label("rR"), angle, width);
  EXPECT_NEAR(angle, gi.ct[0], 1e-12);
  EXPECT_NEAR(width, kTgap / 548.0, 1e-12);
}

TEST(HamiltonianTest, RejectsMismatchedRegister) {
  EXPECT_THROW(Hamiltonian(LevelScheme(1), build_timing(4, kTr, t_p_default(), kTgap),
                           build_square_geometry(60.0, 5.0), default_params()),
               ConfigError);
}

}  // namespace
