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
#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "mastert/symfun.hpp"
#include "testing_util.hpp"

namespace mastert {
namespace {

using testing::rel;

TEST(SymFun, PartitionEnumeration) {
  // At most 2 rows: grade s contributes floor(s/2)+1 shapes.
  const auto p2 = partitions_up_to(8, 2);
  EXPECT_EQ(p2.size(), 25u);
  EXPECT_EQ(p2[0], Partition{});
  EXPECT_EQ(p2[1], Partition{1});
  // Graded order, and within a grade the wider shape first.
  EXPECT_EQ(p2[2], (Partition{2}));
  EXPECT_EQ(p2[3], (Partition{1, 1}));
  for (std::size_t i = 0; i + 1 < p2.size(); ++i)
    EXPECT_LE(part_size(p2[i]), part_size(p2[i + 1]));
  for (const auto& lam : p2) {
    EXPECT_TRUE(partition_valid(lam));
    EXPECT_LE(part_rows(lam), 2);
  }
  // Three rows allowed: grade 3 gains {1,1,1}.
  const auto p3 = partitions_up_to(3, 3);
  EXPECT_EQ(p3.back(), (Partition{1, 1, 1}));
  EXPECT_THROW(partitions_up_to(-1, 2), InvalidInputError);
}

TEST(SymFun, HurwitzSeriesBaseOnly) {
  // Pure first time: generating series exp(t1 w), so h_k = t1^k / k!.
  const cplx t1{0.3, -0.4};
  ShiftedTimes st;
  st.base = {t1};
  const auto h = h_series(st, 5);
  cplx fact = 1.0;
  for (int k = 0; k <= 5; ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    EXPECT_LT(rel(h[k], std::pow(t1, k) / fact), 1e-13) << "k=" << k;
  }
}

TEST(SymFun, HurwitzSeriesShifts) {
  const cplx z{1.2, 0.5};
  // One downward shift at zero base: series of (1 - w/z), so h_0=1, h_1=-1/z.
  ShiftedTimes down;
  down.minus(z);
  const auto hd = h_series(down, 4);
  EXPECT_LT(rel(hd[0], 1.0), 1e-14);
  EXPECT_LT(rel(hd[1], -1.0 / z), 1e-14);
  for (int k = 2; k <= 4; ++k) EXPECT_LT(std::abs(hd[k]), 1e-14);
  // One upward shift: geometric series, h_k = z^{-k}.
  ShiftedTimes up;
  up.plus(z);
  const auto hu = h_series(up, 4);
  for (int k = 0; k <= 4; ++k) EXPECT_LT(rel(hu[k], std::pow(z, -k)), 1e-13);
  // Opposite shifts at the same parameter cancel exactly.
  ShiftedTimes both;
  both.minus(z).plus(z);
  const auto hb = h_series(both, 4);
  EXPECT_LT(rel(hb[0], 1.0), 1e-14);
  for (int k = 1; k <= 4; ++k) EXPECT_LT(std::abs(hb[k]), 1e-13);
}

TEST(SymFun, ShiftedTimesSemantics) {
  ShiftedTimes st;
  EXPECT_TRUE(st.base_is_zero());
  EXPECT_TRUE(st.all_shifts_minus());
  EXPECT_TRUE(st.h_series_terminates());
  // The builders mutate in place and accumulate.
  st.minus({1.0, 0.0});
  st.minus({0.0, 2.0});
  EXPECT_EQ(st.shifts.size(), 2u);
  EXPECT_TRUE(st.h_series_terminates());
  st.plus({3.0, 0.0});
  EXPECT_FALSE(st.all_shifts_minus());
  EXPECT_FALSE(st.h_series_terminates());
  st.base = {cplx(0.1, 0.0)};
  EXPECT_FALSE(st.base_is_zero());
  EXPECT_THROW(st.minus(0.0), InvalidInputError);
  EXPECT_THROW(st.plus(0.0), InvalidInputError);
}

TEST(SymFun, SchurAtSingleShifts) {
  const cplx z{0.8, -1.1};
  ShiftedTimes down;
  down.minus(z);
  ShiftedTimes up;
  up.plus(z);
  const std::vector<Partition> shapes = {{1}, {2}, {1, 1}, {2, 1}, {3}, {1, 1, 1}, {2, 2}};
  for (const auto& lam : shapes) {
    const int s = part_size(lam);
    const bool column = (lam[0] == 1);
    const bool row = (part_rows(lam) == 1);
    const cplx vd = schur(lam, down);
    const cplx vu = schur(lam, up);
    if (column)
      EXPECT_LT(rel(vd, std::pow(-1.0 / z, s)), 1e-12);
    else
      EXPECT_LT(std::abs(vd), 1e-13);
    if (row)
      EXPECT_LT(rel(vu, std::pow(z, -s)), 1e-12);
    else
      EXPECT_LT(std::abs(vu), 1e-13);
  }
}

TEST(SymFun, SchurClosedForms) {
  // Random complex times; compare the determinant route against the closed
  // forms in power sums p_k = k t_k.
  const cplx t1{0.31, -0.22}, t2{-0.14, 0.45}, t3{0.27, 0.08};
  ShiftedTimes st;
  st.base = {t1, t2, t3};
  const cplx p1 = t1, p2 = 2.0 * t2, p3 = 3.0 * t3;
  EXPECT_LT(rel(schur({1}, st), p1), 1e-13);
  EXPECT_LT(rel(schur({2}, st), p1 * p1 / 2.0 + p2 / 2.0), 1e-13);
  EXPECT_LT(rel(schur({1, 1}, st), p1 * p1 / 2.0 - p2 / 2.0), 1e-13);
  EXPECT_LT(rel(schur({2, 1}, st), (p1 * p1 * p1 - p3) / 3.0), 1e-13);
  EXPECT_LT(rel(schur({3}, st), p1 * p1 * p1 / 6.0 + p1 * p2 / 2.0 + p3 / 3.0), 1e-13);
}

TEST(SymFun, SkewSchurBranchingAndShiftValues) {
  const cplx z{1.7, 0.6};
  ShiftedTimes down;
  down.minus(z);
  // s_{(2)/(1)} = h_1 = -1/z at a single downward shift.
  EXPECT_LT(rel(skew_schur({2}, {1}, down), -1.0 / z), 1e-13);
  // s_{(1,1)/(1)} = e_1 = h_1 as well.
  EXPECT_LT(rel(skew_schur({1, 1}, {1}, down), -1.0 / z), 1e-13);
  // Containment violations vanish identically.
  EXPECT_LT(std::abs(skew_schur({1}, {2}, down)), 1e-15);
  // mu = {} reduces to the straight Schur value.
  const cplx t1{0.4, 0.1};
  ShiftedTimes st;
  st.base = {t1};
  EXPECT_LT(rel(skew_schur({2, 1}, {}, st), schur({2, 1}, st)), 1e-13);
  // First-time derivative rule d/dt1 s_lam = s_{lam/(1)} by finite differences.
  const double h = 1e-6;
  for (const Partition lam : {Partition{2, 1}, Partition{3}, Partition{2, 2}}) {
    ShiftedTimes stp, stm;
    stp.base = {t1 + h, cplx(0.2, -0.3)};
    stm.base = {t1 - h, cplx(0.2, -0.3)};
    ShiftedTimes st0;
    st0.base = {t1, cplx(0.2, -0.3)};
    const cplx fd = (schur(lam, stp) - schur(lam, stm)) / (2.0 * h);
    EXPECT_LT(rel(fd, skew_schur(lam, {1}, st0)), 1e-8);
  }
}

TEST(SymFun, CharacterMatchesTimesSubstitution) {
  // chi_lam(w) equals the Schur polynomial at t_k = (sum_a w_a^k)/k.
  const std::vector<cplx> w = {{0.9, 0.4}, {-0.5, 1.1}, {0.3, -0.8}};
  const std::vector<Partition> shapes = {{1}, {2}, {1, 1}, {2, 1}, {3, 1}, {2, 2, 1}};
  for (const auto& lam : shapes) {
    const int D = lam[0] + part_rows(lam);
    TimesVector t(D, cplx(0.0));
    for (int k = 1; k <= D; ++k) {
      cplx pk = 0.0;
      for (cplx wa : w) pk += std::pow(wa, k);
      t[k - 1] = pk / static_cast<double>(k);
    }
    ShiftedTimes st;
    st.base = t;
    EXPECT_LT(rel(character(lam, w), schur(lam, st)), 1e-12) << "shape rows=" << part_rows(lam);
  }
  // More rows than variables: identically zero.
  EXPECT_EQ(character({1, 1, 1, 1}, w), cplx(0.0));
  // Coincident eigenvalues fall back to the power-sum substitution: at the
  // identity twist the character counts semistandard tableaux.
  EXPECT_LT(std::abs(character({2}, {cplx(1.0), cplx(1.0)}) - 3.0), 1e-12);
  EXPECT_LT(std::abs(character({1, 1}, {cplx(1.0), cplx(1.0)}) - 1.0), 1e-12);
}

TEST(SymFun, HPolyConsistency) {
  ShiftedTimes st;
  st.base = {cplx(0.2, 0.3), cplx(-0.1, 0.05)};
  st.minus({1.5, -0.4});
  const auto h = h_series(st, 6);
  for (int k = 0; k <= 6; ++k) EXPECT_LT(rel(h_poly(k, st), h[k]), 1e-14);
  EXPECT_EQ(h_poly(-1, st), cplx(0.0));
}

}  // namespace
}  // namespace mastert
