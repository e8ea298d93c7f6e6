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

#include "mastert/tensorspace.hpp"
#include "testing_util.hpp"

namespace mastert {
namespace {

Matrix random_matrix(int N, std::uint64_t seed) {
  detail::Rng rng(seed);
  Matrix A(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) A(i, j) = rng.cnormal();
  return A;
}

TEST(TensorSpace, IndexRoundTrip) {
  const int N = 3, n = 3;
  EXPECT_EQ(tensor_dim(N, n), 27);
  EXPECT_EQ(tensor_dim(N, 0), 1);
  for (long f = 0; f < tensor_dim(N, n); ++f) {
    const std::vector<int> a = site_digits(f, n, N);
    EXPECT_EQ(flat_index(a, N), f);
  }
  // Site 1 is the most significant digit.
  EXPECT_EQ(site_digits(9, 3, 3), (std::vector<int>{1, 0, 0}));
}

TEST(TensorSpace, EmbedSiteMatchesKronecker) {
  const int N = 2, n = 2;
  const Matrix A = random_matrix(N, 7);
  // Site 1 embedding is A (x) I, site 2 is I (x) A under the chosen flattening.
  Matrix kron1 = Matrix::Zero(4, 4), kron2 = Matrix::Zero(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        kron1(a * 2 + c, b * 2 + c) = A(a, b);
        kron2(c * 2 + a, c * 2 + b) = A(a, b);
      }
  EXPECT_LT((embed_site(A, 1, n, N) - kron1).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((embed_site(A, 2, n, N) - kron2).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(TensorSpace, EmbedSiteCommutesAcrossSites) {
  const int N = 2, n = 3;
  const Matrix A = random_matrix(N, 1), B = random_matrix(N, 2);
  const TensorOperator A1 = embed_site(A, 1, n, N);
  const TensorOperator B3 = embed_site(B, 3, n, N);
  EXPECT_LT((A1 * B3 - B3 * A1).cwiseAbs().maxCoeff(), 1e-12);
  // Same-site embeddings compose like the matrices themselves.
  const TensorOperator AB2 = embed_site(Matrix(A * B), 2, n, N);
  EXPECT_LT((embed_site(A, 2, n, N) * embed_site(B, 2, n, N) - AB2).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(embed_site(A, 4, n, N), InvalidInputError);
  EXPECT_THROW(embed_site(Matrix::Identity(3, 3), 1, n, N), InvalidInputError);
}

TEST(TensorSpace, PermutationProperties) {
  const int N = 2, n = 3;
  const TensorOperator P12 = permutation_op(1, 2, n, N);
  const TensorOperator P13 = permutation_op(1, 3, n, N);
  const long dim = tensor_dim(N, n);
  EXPECT_LT((P12 * P12 - TensorOperator::Identity(dim, dim)).cwiseAbs().maxCoeff(), 1e-15);
  // Conjugation by the transposition moves a one-site operator between sites.
  const Matrix A = random_matrix(N, 3);
  EXPECT_LT((P12 * embed_site(A, 1, n, N) * P12 - embed_site(A, 2, n, N)).cwiseAbs().maxCoeff(),
            1e-12);
  EXPECT_LT((P13 * embed_site(A, 3, n, N) * P13 - embed_site(A, 1, n, N)).cwiseAbs().maxCoeff(),
            1e-12);
  EXPECT_THROW(permutation_op(1, 1, n, N), InvalidInputError);
}

TEST(TensorSpace, SectorBasisPartitionsTheSpace) {
  const int N = 2, n = 3;
  EXPECT_EQ(sector_basis({3, 0}, n, N).size(), 1u);
  EXPECT_EQ(sector_basis({2, 1}, n, N).size(), 3u);
  EXPECT_EQ(sector_basis({1, 2}, n, N).size(), 3u);
  EXPECT_EQ(sector_basis({0, 3}, n, N).size(), 1u);
  std::vector<bool> seen(tensor_dim(N, n), false);
  for (const auto& m : std::vector<std::vector<int>>{{3, 0}, {2, 1}, {1, 2}, {0, 3}})
    for (long f : sector_basis(m, n, N)) {
      EXPECT_FALSE(seen[f]);
      seen[f] = true;
    }
  for (bool s : seen) EXPECT_TRUE(s);
  EXPECT_THROW(sector_basis({1, 1}, 3, 2), InvalidInputError);
  EXPECT_THROW(sector_basis({1, 1, 1}, 3, 2), InvalidInputError);
}

TEST(TensorSpace, NormalizePhaseConvention) {
  Vector v(3);
  v << cplx(0.0, 0.0), cplx(0.0, 2.0), cplx(1.0, 1.0);
  const Vector u = normalize_phase(v);
  EXPECT_NEAR(u.norm(), 1.0, 1e-15);
  // First component above threshold is made real positive.
  EXPECT_NEAR(u(1).imag(), 0.0, 1e-15);
  EXPECT_GT(u(1).real(), 0.0);
  // The convention is idempotent.
  EXPECT_LT((normalize_phase(u) - u).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(TensorSpace, JointEigenbasisRecoversCommutingFamily) {
  // Two operators diagonal in a common (random, well-conditioned) basis.
  const int dim = 6;
  detail::Rng rng(11);
  Matrix S(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) S(i, j) = rng.cnormal();
  const Matrix Sinv = S.inverse();
  Vector d1(dim), d2(dim);
  for (int i = 0; i < dim; ++i) {
    d1(i) = rng.cnormal();
    d2(i) = rng.cnormal();
  }
  const Matrix A = S * d1.asDiagonal() * Sinv;
  const Matrix B = S * d2.asDiagonal() * Sinv;
  const JointEigenbasis jb = joint_eigenbasis({A, B});
  for (long c = 0; c < dim; ++c) {
    const Vector vc = jb.V.col(c);
    EXPECT_LT((A * vc - jb.eigenvalues[0](c) * vc).norm(), 1e-8 * A.norm());
    EXPECT_LT((B * vc - jb.eigenvalues[1](c) * vc).norm(), 1e-8 * B.norm());
  }
  EXPECT_LT((jb.Vinv * jb.V - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(TensorSpace, JointEigenbasisRejectsNonCommutingPair) {
  Matrix X = Matrix::Zero(2, 2), Z = Matrix::Zero(2, 2);
  X(0, 1) = X(1, 0) = 1.0;
  Z(0, 0) = 1.0;
  Z(1, 1) = -1.0;
  EXPECT_THROW(joint_eigenbasis({X, Z}), NonGenericError);
  EXPECT_THROW(joint_eigenbasis({}), InvalidInputError);
}

}  // namespace
}  // namespace mastert
