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

#include <vector>

#include "mastert/coderiv.hpp"
#include "mastert/spinchain.hpp"
#include "testing_util.hpp"

namespace mastert {
namespace {

using testing::kU0;
using testing::opdev;
using testing::pinned_spec;

Matrix random_matrix(int N, std::uint64_t seed) {
  detail::Rng rng(seed);
  Matrix A(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) A(i, j) = rng.cnormal();
  return A;
}

// One matrix derivative of tr M^m is m M^m; the assembled one-site operator
// must reproduce it for any (also non-diagonal) argument.
TEST(Coderiv, FirstDerivativeOfPowerSums) {
  const int N = 3;
  const Matrix g = random_matrix(N, 5);
  for (int m = 1; m <= 3; ++m) {
    const CoderivTable tab = coderivative_entries(ScalarFunctionSpec::power_sum(m), 1, g);
    const TensorOperator op = assemble_subset(tab, {0}, 1, N);
    Matrix gm = Matrix::Identity(N, N);
    for (int r = 0; r < m; ++r) gm = gm * g;
    EXPECT_LT(opdev(op, static_cast<double>(m) * gm), 1e-12) << "m=" << m;
  }
}

TEST(Coderiv, FirstDerivativeClosedForms) {
  const int N = 2;
  const Matrix g = random_matrix(N, 9);
  // d det(zI - M) = -det(zI - g) g (zI - g)^{-1}.
  const cplx z{1.9, 0.8};
  {
    const CoderivTable tab = coderivative_entries(ScalarFunctionSpec::det_shift(z), 1, g);
    const TensorOperator op = assemble_subset(tab, {0}, 1, N);
    const Matrix R = (z * Matrix::Identity(N, N) - g).inverse();
    const Matrix expect = -(z * Matrix::Identity(N, N) - g).determinant() * g * R;
    EXPECT_LT(opdev(op, expect), 1e-12);
  }
  // d exp(t1 tr M) = t1 exp(t1 tr g) g.
  {
    const cplx t1{0.3, -0.2};
    const CoderivTable tab = coderivative_entries(ScalarFunctionSpec::exp_times({t1}), 1, g);
    const TensorOperator op = assemble_subset(tab, {0}, 1, N);
    const Matrix expect = t1 * std::exp(t1 * g.trace()) * g;
    EXPECT_LT(opdev(op, expect), 1e-12);
  }
}

// The two-site second derivative of tr M^2, with the first-applied factor
// leftmost: the result is 2 [ P12 (g^2 at site 1) + P12 (g at site 2)(g at
// site 1) ], and the slot-swapped expression is NOT equal, pinning the order.
TEST(Coderiv, SecondDerivativeOrderGuard) {
  const int N = 2, n = 2;
  const Matrix g = random_matrix(N, 13);
  const CoderivTable tab = coderivative_entries(ScalarFunctionSpec::power_sum(2), 2, g);
  const TensorOperator op = assemble_subset(tab, {0, 1}, n, N);
  const TensorOperator P = permutation_op(1, 2, n, N);
  const TensorOperator expect =
      2.0 * (P * embed_site(Matrix(g * g), 1, n, N) +
             P * embed_site(g, 2, n, N) * embed_site(g, 1, n, N));
  EXPECT_LT(opdev(op, expect), 1e-12);
  const TensorOperator swapped =
      2.0 * (P * embed_site(Matrix(g * g), 2, n, N) +
             P * embed_site(g, 1, n, N) * embed_site(g, 2, n, N));
  EXPECT_GT(opdev(op, swapped), 0.1);
}

TEST(Coderiv, EmptyShapeGivesScalarPolynomial) {
  const SpinChainSpec spec = pinned_spec();
  const OpPoly P = transfer_op(ScalarFunctionSpec::character(Partition{}), spec.u, spec.w);
  for (cplx u : {kU0, cplx(1.7, -0.4)}) {
    cplx pref = 1.0;
    for (cplx ui : spec.u) pref *= (u - ui);
    const TensorOperator expect = pref * TensorOperator::Identity(8, 8);
    EXPECT_LT(opdev(oppoly_eval(P, u), expect), 1e-12);
  }
}

TEST(Coderiv, DeepestColumnIsExact) {
  const SpinChainSpec spec = pinned_spec();
  const Partition col(spec.N, 1);
  const OpPoly P = transfer_op(ScalarFunctionSpec::character(col), spec.u, spec.w);
  cplx pref = spec.w[0] * spec.w[1];
  for (cplx uk : spec.u) pref *= (kU0 - uk + 1.0);
  EXPECT_LT(opdev(oppoly_eval(P, kU0), pref * TensorOperator::Identity(8, 8)), 1e-12);
}

// Residues of the single-box coefficient at the inhomogeneities are the
// commuting Hamiltonians built independently from permutation products.
TEST(Coderiv, SingleBoxResiduesAreHamiltonians) {
  const SpinChainSpec spec = pinned_spec();
  const int n = spec.sites();
  const OpPoly P = transfer_op(ScalarFunctionSpec::character({1}), spec.u, spec.w);
  for (int i = 1; i <= n; ++i) {
    cplx denom = 1.0;
    for (int j = 1; j <= n; ++j)
      if (j != i) denom *= (spec.u[i - 1] - spec.u[j - 1]);
    const TensorOperator res = oppoly_eval(P, spec.u[i - 1]) / denom;
    EXPECT_LT(opdev(res, hamiltonian(i, spec)), 1e-12) << "site " << i;
  }
}

// The alternating column generating series telescopes exactly into the
// characteristic-polynomial kind: sum_a (-1)^a z^{N-a} T_{(1^a)}(u) equals the
// transfer operator of det(zI - g), coefficient by coefficient in u.
TEST(Coderiv, ColumnGeneratingSeriesIsExact) {
  const SpinChainSpec spec = pinned_spec();
  const int n = spec.sites();
  const cplx z{1.3, -0.7};
  OpPoly sum(n + 1, Matrix::Zero(8, 8));
  for (int a = 0; a <= spec.N; ++a) {
    const Partition col(a, 1);
    const OpPoly Pa = transfer_op(ScalarFunctionSpec::character(col), spec.u, spec.w);
    const cplx coef = ((a % 2 == 0) ? 1.0 : -1.0) * std::pow(z, spec.N - a);
    for (int d = 0; d <= n; ++d) sum[d] += coef * Pa[d];
  }
  const OpPoly det = transfer_op(ScalarFunctionSpec::det_shift(z), spec.u, spec.w);
  for (int d = 0; d <= n; ++d) EXPECT_LT(opdev(sum[d], det[d]), 1e-12) << "degree " << d;
}

// The batched expansion and the one-shape transfer construction must agree.
TEST(Coderiv, BatchedSeriesMatchesSingleShapes) {
  const SpinChainSpec spec = pinned_spec();
  const MasterTSeries master = master_t_coeffs(4, spec.u, spec.w);
  for (const Partition lam : {Partition{1}, Partition{2, 1}, Partition{2, 2}, Partition{4}}) {
    ASSERT_TRUE(master.has(lam));
    const OpPoly direct = transfer_op(ScalarFunctionSpec::character(lam), spec.u, spec.w);
    const OpPoly& batched = master.at(lam);
    for (std::size_t d = 0; d < direct.size(); ++d)
      EXPECT_LT(opdev(batched[d], direct[d]), 1e-12);
  }
  EXPECT_FALSE(master.has(Partition{5}));
  EXPECT_THROW(master.at(Partition{5}), InvalidInputError);
}

TEST(Coderiv, StationaryWaveOperatorStructure) {
  const SpinChainSpec spec = pinned_spec();
  const cplx z{1.4, 0.9};
  const StationaryBAOp op = stationary_ba_op(kU0, z, spec, false);
  EXPECT_FALSE(op.at_pole);
  EXPECT_LT(opdev(op.ratio() * op.denom, op.polynomial), 1e-14);
  // At an inhomogeneity the ratio form is refused, the polynomial part stays.
  const StationaryBAOp at_pole = stationary_ba_op(spec.u[0], z, spec, false);
  EXPECT_TRUE(at_pole.at_pole);
  EXPECT_THROW(at_pole.ratio(), NonGenericError);
  EXPECT_GT(at_pole.polynomial.cwiseAbs().maxCoeff(), 0.0);
  // Input guards.
  EXPECT_THROW(stationary_ba_op(kU0, 0.0, spec, false), InvalidInputError);
  EXPECT_THROW(stationary_ba_op(kU0, spec.w[1], spec, true), InvalidInputError);
}

}  // namespace
}  // namespace mastert
