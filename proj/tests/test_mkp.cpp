/* Copyright 2026 The MasterT Authors. All Rights Reserved.
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

#include "mastert/mkp.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "mastert/spinchain.hpp"
#include "mastert/symfun.hpp"
#include "mastert/upoly.hpp"
#include "testing_util.hpp"

namespace mastert {
namespace {

using testing::kU0;
using testing::pinned_spec;
using testing::rel;

const std::vector<SpectrumRecord>& records() {
  static const std::vector<SpectrumRecord> recs = spectrum(pinned_spec());
  return recs;
}

TEST(TauEval, ExactnessFlagsFollowTermination) {
  const TauSeries& tau = records()[0].tau;

  ShiftedTimes none;
  const TauValue plain = tau_eval(tau, kU0, none);
  EXPECT_TRUE(plain.exact);
  EXPECT_LT(rel(plain.value, tau.tau0(kU0)), 1e-14);

  ShiftedTimes two;
  two.minus(cplx(1.3, 0.0)).minus(cplx(0.0, 0.7));
  EXPECT_TRUE(tau_eval(tau, kU0, two).exact);   // 2 * N = 4 <= 8
  EXPECT_FALSE(tau_eval(tau, kU0, two, 3).exact);  // 4 > 3: truncated

  ShiftedTimes up;
  up.plus(cplx(9.0, 2.0));
  EXPECT_FALSE(tau_eval(tau, kU0, up).exact);  // upward shifts never terminate

  ShiftedTimes offbase;
  offbase.base = TimesVector{cplx(0.01, 0.0)};
  offbase.minus(cplx(1.3, 0.0));
  EXPECT_FALSE(tau_eval(tau, kU0, offbase).exact);  // nonzero base times

  EXPECT_THROW(tau_eval(tau, kU0, none, tau.K + 1), InvalidInputError);
}

// One downward shift selects single columns with alternating inverse powers:
// tau(u, -[z]) = sum_{a=0}^{N} tau_{(1^a)}(u) (-1/z)^a.  One upward shift
// selects single rows: tau(u, +[z]) = sum_{s>=0} tau_{(s)}(u) z^{-s}.
TEST(TauEval, SingleShiftColumnAndRowSelection) {
  const TauSeries& tau = records()[3].tau;
  const cplx z(1.7, -0.6);

  ShiftedTimes down;
  down.minus(z);
  cplx colsum = 0.0;
  for (int a = 0; a <= tau.N; ++a) {
    const Partition col(a, 1);
    colsum += upoly_eval(tau.at(col), kU0) * std::pow(-1.0 / z, a);
  }
  EXPECT_LT(rel(tau_eval(tau, kU0, down).value, colsum), 1e-13);

  double maxw = 0.0;
  for (cplx wa : tau.w) maxw = std::max(maxw, std::abs(wa));
  const cplx zbig = 70.0 * maxw * std::exp(cplx(0.0, 0.3));
  ShiftedTimes upshift;
  upshift.plus(zbig);
  cplx rowsum = 0.0;
  for (int s = 0; s <= tau.K; ++s) {
    const Partition row = (s == 0) ? Partition{} : Partition{s};
    rowsum += upoly_eval(tau.at(row), kU0) * std::pow(zbig, -s);
  }
  const TauValue upval = tau_eval(tau, kU0, upshift);
  EXPECT_FALSE(upval.exact);
  EXPECT_LT(rel(upval.value, rowsum), 1e-12);
}

TEST(Hirota, ZeroTimesIdentitiesHoldForEveryEigenvalue) {
  const TimesVector t0;
  const cplx z1(1.31, 0.42), z2(-0.97, 0.63), z3(0.66, -1.09);
  for (const auto& rec : records()) {
    // Non-vacuity: the shifted evaluations genuinely move the tau value.
    ShiftedTimes st;
    st.minus(z1);
    const cplx shifted = tau_eval(rec.tau, kU0, st).value;
    const cplx base = rec.tau.tau0(kU0);
    ASSERT_GT(std::abs(shifted - base) / std::abs(base), 0.01);

    EXPECT_LT(std::abs(hirota3(rec.tau, kU0, t0, z1, z2, z3)), 1e-12);
    EXPECT_LT(std::abs(hirota3_shifted(rec.tau, kU0, t0, z1, z2)), 1e-12);
  }
}

TEST(Hirota, ShiftParameterGuards) {
  const TauSeries& tau = records()[0].tau;
  const TimesVector t0;
  EXPECT_THROW(hirota3(tau, kU0, t0, cplx(0.0), cplx(1.0), cplx(2.0)), InvalidInputError);
  EXPECT_THROW(hirota3(tau, kU0, t0, cplx(1.0), cplx(1.0), cplx(2.0)), NonGenericError);
  EXPECT_THROW(hirota3_shifted(tau, kU0, t0, cplx(0.0), cplx(1.0)), InvalidInputError);
  EXPECT_THROW(hirota3_shifted(tau, kU0, t0, cplx(1.2, 0.1), cplx(1.2, 0.1)), NonGenericError);
}

// At nonzero times the truncated series only approximates the identities; the
// residual must shrink by an order of magnitude as the truncation deepens.
TEST(Hirota, TruncationResidualShrinks) {
  TimesVector t(4);
  t[0] = 0.04 * std::polar(1.0, 0.7);
  t[1] = 0.002 * std::polar(1.0, 1.9);
  t[2] = 1e-4 * std::polar(1.0, 3.1);
  t[3] = 1e-5 * std::polar(1.0, 5.0);
  const cplx triples[3][3] = {
      {{1.31, 0.42}, {-1.57, 0.23}, {0.66, -1.49}},
      {{-1.22, 0.88}, {0.35, 1.61}, {1.74, -0.31}},
      {{0.92, -1.18}, {-1.45, -0.77}, {1.29, 1.02}},
  };
  double w4 = 0.0, s4 = 0.0, w8 = 0.0, s8 = 0.0;
  for (const auto& rec : records())
    for (const auto& tp : triples) {
      const BilinearParts a = hirota3_parts(rec.tau, kU0, t, tp[0], tp[1], tp[2], 4);
      w4 = std::max(w4, std::abs(a.sum));
      s4 = std::max(s4, a.scale);
      const BilinearParts b = hirota3_parts(rec.tau, kU0, t, tp[0], tp[1], tp[2], 8);
      w8 = std::max(w8, std::abs(b.sum));
      s8 = std::max(s8, b.scale);
    }
  const double r4 = w4 / s4, r8 = w8 / s8;
  EXPECT_GT(r4, 1e-14) << "truncated residual too small to measure decay";
  EXPECT_GE(r4 / r8, 10.0) << "K=4 residual " << r4 << " vs K=8 residual " << r8;
}

TEST(BakerAkhiezer, PartsCarryTheAdvertisedFactorization) {
  const TauSeries& tau = records()[2].tau;
  TimesVector t(3);
  t[0] = cplx(0.02, -0.01);
  t[1] = cplx(-0.003, 0.004);
  t[2] = cplx(0.0005, 0.0002);
  const cplx z(1.4, 0.5);

  const BAValue direct = ba_eval(tau, kU0, t, z, false);
  EXPECT_EQ(direct.z, z);
  EXPECT_LT(rel(direct.exponent, kU0 - cplx(tau.N)), 1e-14);
  cplx xi = t[0] * z + t[1] * z * z + t[2] * z * z * z;
  EXPECT_LT(rel(direct.xi, xi), 1e-14);
  EXPECT_LT(rel(direct.value(), std::pow(z, direct.exponent) * std::exp(xi) * direct.tau_ratio),
            1e-14);
  EXPECT_FALSE(direct.exact);  // base times are nonzero

  const BAValue adj = ba_eval(tau, kU0, t, z, true);
  EXPECT_LT(rel(adj.exponent, -(kU0 - cplx(tau.N))), 1e-14);
  EXPECT_LT(rel(adj.xi, -xi), 1e-14);

  const TimesVector t0;
  EXPECT_TRUE(ba_eval(tau, kU0, t0, z, false).exact);
  EXPECT_FALSE(ba_eval(tau, kU0, t0, z, true).exact);
  EXPECT_THROW(ba_eval(tau, kU0, t0, cplx(0.0), false), InvalidInputError);
}

// As the spectral argument grows, the direct wave ratio approaches the
// characteristic function of the twist: psi-ratio -> det(I - g/z).
TEST(BakerAkhiezer, LargeArgumentLimitIsTheTwistCharacteristic) {
  const TauSeries& tau = records()[5].tau;
  const TimesVector t0;
  const cplx z(1.9, 0.8);
  cplx expected = 1.0;
  for (cplx wa : tau.w) expected *= (1.0 - wa / z);

  const cplx v1 = ba_eval(tau, cplx(1e6, 0.0), t0, z, false).tau_ratio;
  const cplx v2 = ba_eval(tau, cplx(2e6, 0.0), t0, z, false).tau_ratio;
  const cplx extrapolated = 2.0 * v2 - v1;  // removes the 1/u tail
  EXPECT_LT(rel(extrapolated, expected), 1e-8);
}

TEST(LinearProblem, ResidualVanishesForBothKinds) {
  double maxw = 0.0;
  for (cplx wa : pinned_spec().w) maxw = std::max(maxw, std::abs(wa));
  const cplx zdirect(1.3, 0.4);
  const cplx zrow = 70.0 * maxw * std::exp(cplx(0.0, 0.3));
  for (const auto& rec : records()) {
    EXPECT_LT(linear_problem_residual(rec.tau, kU0, zdirect, false), 1e-12);
    EXPECT_LT(linear_problem_residual(rec.tau, kU0, zrow, true), 1e-12);
  }
  EXPECT_THROW(linear_problem_residual(records()[0].tau, kU0, cplx(0.0), false),
               InvalidInputError);
}

TEST(ResidueRelation, HookCoefficientsPairWithLaxMoments) {
  for (const auto& rec : records())
    for (int m = 1; m <= 3; ++m)
      EXPECT_LT(residue_relation_residual(rec.tau, kU0, m), 1e-12) << "m=" << m;
  EXPECT_THROW(residue_relation_residual(records()[0].tau, kU0, 0), InvalidInputError);
  EXPECT_THROW(residue_relation_residual(records()[0].tau, kU0, records()[0].tau.K + 1),
               InvalidInputError);
}

TEST(FusionShift, DeepestColumnExactAndInverseLimitExtrapolates) {
  const SpinChainSpec spec = pinned_spec();
  EXPECT_LT(fusion_shift_residual(spec, kU0, false), 1e-12);
  EXPECT_LT(fusion_shift_residual(spec, kU0, true), 1e-5);
}

TEST(LaurentCoeff, RecoversAKnownLaurentPolynomial) {
  auto fn = [](cplx z) { return 3.0 / (z * z) + 2.0 + 5.0 * z; };
  EXPECT_LT(rel(laurent_coeff(fn, cplx(0.0), 1.0, -2), cplx(3.0)), 1e-12);
  EXPECT_LT(rel(laurent_coeff(fn, cplx(0.0), 1.0, 0), cplx(2.0)), 1e-12);
  EXPECT_LT(rel(laurent_coeff(fn, cplx(0.0), 1.0, 1), cplx(5.0)), 1e-12);
  EXPECT_LT(std::abs(laurent_coeff(fn, cplx(0.0), 1.0, 2)), 1e-12);
}

// The direct wave ratio is a terminating inverse-power polynomial in z of
// order N: every positive power and every power below -N must vanish.
TEST(LaurentCoeff, DirectWaveRatioWindow) {
  const TauSeries& tau = records()[6].tau;
  const TimesVector t0;
  double maxw = 0.0;
  for (cplx wa : tau.w) maxw = std::max(maxw, std::abs(wa));
  const double R = 10.0 * maxw;
  auto fn = [&](cplx z) { return ba_eval(tau, kU0, t0, z, false).tau_ratio; };

  for (int p : {1, 2, 3, -3, -4, -5})
    EXPECT_LT(std::abs(laurent_coeff(fn, cplx(0.0), R, p)), 1e-10) << "power " << p;
  // The live window: the constant term is exactly one.
  EXPECT_LT(rel(laurent_coeff(fn, cplx(0.0), R, 0), cplx(1.0)), 1e-10);
  EXPECT_GT(std::abs(laurent_coeff(fn, cplx(0.0), R, -tau.N)), 1e-6);
}

}  // namespace
}  // namespace mastert
