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
#ifndef MASTERT_TENSORSPACE_HPP
#define MASTERT_TENSORSPACE_HPP

#include <Eigen/Eigenvalues>
#include <vector>

#include "mastert/types.hpp"

namespace mastert {

// Operators on (C^N)^{(x) n} are dense matrices of size N^n.  Flattening
// convention: site 1 is the most significant digit, so the flat index of the
// product state |a_1 ... a_n> is sum_i a_i N^{n-i} with a_i in 0..N-1.
using TensorOperator = Matrix;

inline long tensor_dim(int N, int n) {
  long d = 1;
  for (int i = 0; i < n; ++i) d *= N;
  return d;
}

// Digits of a flat index under the site-1-most-significant convention.
inline std::vector<int> site_digits(long flat, int n, int N) {
  std::vector<int> a(n);
  for (int i = n - 1; i >= 0; --i) {
    a[i] = static_cast<int>(flat % N);
    flat /= N;
  }
  return a;
}

inline long flat_index(const std::vector<int>& a, int N) {
  long f = 0;
  for (int ai : a) f = f * N + ai;
  return f;
}

// 1_{N^{i-1}} (x) A (x) 1_{N^{n-i}}: the one-site operator A acting at site i
// (1-based) of the n-site chain.
inline TensorOperator embed_site(const Matrix& A, int i, int n, int N) {
  if (A.rows() != N || A.cols() != N) throw InvalidInputError("embed_site: A must be N x N");
  if (i < 1 || i > n) throw InvalidInputError("embed_site: site index out of range");
  const long lo = tensor_dim(N, n - i);   // trailing identity block
  const long hi = tensor_dim(N, i - 1);   // leading identity block
  const long dim = hi * N * lo;
  TensorOperator out = TensorOperator::Zero(dim, dim);
  for (long h = 0; h < hi; ++h)
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) {
        if (A(a, b) == cplx(0.0)) continue;
        const long rbase = (h * N + a) * lo;
        const long cbase = (h * N + b) * lo;
        for (long l = 0; l < lo; ++l) out(rbase + l, cbase + l) = A(a, b);
      }
  return out;
}

// Transposition operator P_{ij} swapping the states at sites i and j.
inline TensorOperator permutation_op(int i, int j, int n, int N) {
  if (i < 1 || i > n || j < 1 || j > n || i == j)
    throw InvalidInputError("permutation_op: need distinct sites in 1..n");
  const long dim = tensor_dim(N, n);
  TensorOperator P = TensorOperator::Zero(dim, dim);
  for (long f = 0; f < dim; ++f) {
    std::vector<int> a = site_digits(f, n, N);
    std::swap(a[i - 1], a[j - 1]);
    P(flat_index(a, N), f) = 1.0;
  }
  return P;
}

// Flat indices of the product states whose letter content is m (m[a] copies of
// letter a, sum m[a] = n), in increasing flat order.  These span one weight
// sector of the diagonal-twist symmetry.
inline std::vector<long> sector_basis(const std::vector<int>& m, int n, int N) {
  if (static_cast<int>(m.size()) != N) throw InvalidInputError("sector_basis: m must have N entries");
  int tot = 0;
  for (int c : m) {
    if (c < 0) throw InvalidInputError("sector_basis: negative multiplicity");
    tot += c;
  }
  if (tot != n) throw InvalidInputError("sector_basis: multiplicities must sum to n");
  std::vector<long> out;
  const long dim = tensor_dim(N, n);
  for (long f = 0; f < dim; ++f) {
    std::vector<int> cnt(N, 0);
    for (int d : site_digits(f, n, N)) ++cnt[d];
    if (cnt == m) out.push_back(f);
  }
  return out;
}

// Normalize a vector to unit norm with its first component of magnitude
// > 1e-12 * ||v|| made real positive (the deterministic phase convention used
// for every reported eigenvector).
inline Vector normalize_phase(Vector v) {
  double nrm = v.norm();
  if (nrm == 0.0) return v;
  v /= nrm;
  for (long i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      v *= std::conj(v(i)) / std::abs(v(i));
      break;
    }
  }
  return v;
}

struct JointEigenbasis {
  Matrix V;     // columns are the common eigenvectors
  Matrix Vinv;  // inverse basis (rows are the dual/left eigenvectors)
  // eigenvalues[k](c) is the eigenvalue of ops[k] on column c of V.
  std::vector<Vector> eigenvalues;
};

// Simultaneous eigenbasis of a commuting family, found by diagonalizing a
// random linear combination.  Degeneracies of the combination are broken by
// retrying with fresh coefficients (at most 5 attempts); an attempt is
// accepted only if every operator satisfies ||A v - lambda v|| <=
// tol * ||A|| * ||v|| on every column.
inline JointEigenbasis joint_eigenbasis(const std::vector<TensorOperator>& ops,
                                        double tol = 1e-8, std::uint64_t seed = 42) {
  if (ops.empty()) throw InvalidInputError("joint_eigenbasis: no operators");
  const long dim = ops[0].rows();
  std::vector<double> norms;
  norms.reserve(ops.size());
  for (const auto& A : ops) norms.push_back(std::max(A.norm(), 1e-300));

  for (int attempt = 0; attempt < 5; ++attempt) {
    detail::Rng rng(seed + 1000 * static_cast<std::uint64_t>(attempt));
    Matrix F = Matrix::Zero(dim, dim);
    for (const auto& A : ops) F += rng.cnormal() * A;
    Eigen::ComplexEigenSolver<Matrix> es(F);
    if (es.info() != Eigen::Success) continue;
    Matrix V = es.eigenvectors();
    for (long c = 0; c < dim; ++c) V.col(c) = normalize_phase(V.col(c));
    Matrix Vinv = V.inverse();

    JointEigenbasis out;
    out.V = V;
    out.Vinv = Vinv;
    out.eigenvalues.resize(ops.size());
    bool ok = true;
    for (std::size_t k = 0; k < ops.size() && ok; ++k) {
      Matrix D = Vinv * ops[k] * V;
      Vector lam = D.diagonal();
      for (long c = 0; c < dim; ++c) {
        double resid = (ops[k] * V.col(c) - lam(c) * V.col(c)).norm();
        if (resid > tol * norms[k] * V.col(c).norm()) {
          ok = false;
          break;
        }
      }
      out.eigenvalues[k] = std::move(lam);
    }
    if (ok) return out;
  }
  throw NonGenericError(
      "joint_eigenbasis: no random combination separated the family within "
      "tolerance after 5 attempts (operators may fail to commute or the "
      "family may be non-diagonalizable)");
}

}  // namespace mastert

#endif  // MASTERT_TENSORSPACE_HPP
