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
#ifndef MASTERT_JETS_HPP
#define MASTERT_JETS_HPP

#include <vector>

#include "mastert/symfun.hpp"
#include "mastert/types.hpp"

namespace mastert {

// Exact arithmetic in C[eps_1..eps_k]/(eps_i^2): a jet holds 2^k coefficients,
// one per squarefree monomial in the eps generators, indexed by bitmask.  All
// derivative extraction in this library is done in this ring, so there is no
// finite-difference error anywhere in the operator construction.
using JetScalar = std::vector<cplx>;

// Jet with matrix coefficients: entry [mask] is the N x N coefficient of the
// eps-monomial encoded by mask.
using JetMatrix = std::vector<Matrix>;

inline JetScalar jzero(int k) { return JetScalar(std::size_t(1) << k, cplx(0.0)); }

inline JetScalar jconst(int k, cplx c) {
  JetScalar a = jzero(k);
  a[0] = c;
  return a;
}

inline JetScalar jadd(const JetScalar& a, const JetScalar& b) {
  JetScalar out(a.size());
  for (std::size_t s = 0; s < a.size(); ++s) out[s] = a[s] + b[s];
  return out;
}

// Product in the jet ring: out[s] = sum over submasks sub of s of
// a[sub] * b[s ^ sub].  The submask loop costs 3^k total.
inline JetScalar jmul(const JetScalar& a, const JetScalar& b) {
  const std::size_t n = a.size();
  JetScalar out(n, cplx(0.0));
  for (std::size_t s = 0; s < n; ++s) {
    std::size_t sub = s;
    while (true) {
      out[s] += a[sub] * b[s ^ sub];
      if (sub == 0) break;
      sub = (sub - 1) & s;
    }
  }
  return out;
}

// Inverse of a jet with invertible constant term: write a = c (1 + eta) with
// eta nilpotent, then 1/a = (1/c) sum_{r<=k} (-eta)^r.
inline JetScalar jinv(const JetScalar& a, int k) {
  const cplx c = a[0];
  if (std::abs(c) == 0.0) throw InvalidInputError("jinv: constant term is zero");
  JetScalar eta(a.size());
  for (std::size_t s = 0; s < a.size(); ++s) eta[s] = a[s] / c;
  eta[0] = 0.0;
  JetScalar out = jconst(k, 1.0);
  JetScalar pw = jconst(k, 1.0);
  double sgn = 1.0;
  for (int r = 1; r <= k; ++r) {
    pw = jmul(pw, eta);
    sgn = -sgn;
    for (std::size_t s = 0; s < out.size(); ++s) out[s] += sgn * pw[s];
  }
  for (std::size_t s = 0; s < out.size(); ++s) out[s] /= c;
  return out;
}

// exp of a jet: e^{a_0} sum_{r<=k} eta^r / r! with eta = a - a_0.
inline JetScalar jexp(const JetScalar& a, int k) {
  JetScalar eta = a;
  eta[0] = 0.0;
  JetScalar out = jconst(k, 1.0);
  JetScalar pw = jconst(k, 1.0);
  double fact = 1.0;
  for (int r = 1; r <= k; ++r) {
    pw = jmul(pw, eta);
    fact *= r;
    for (std::size_t s = 0; s < out.size(); ++s) out[s] += pw[s] / fact;
  }
  const cplx c = std::exp(a[0]);
  for (std::size_t s = 0; s < out.size(); ++s) out[s] *= c;
  return out;
}

inline JetMatrix jmat_from(const Matrix& g, int k) {
  JetMatrix J(std::size_t(1) << k, Matrix::Zero(g.rows(), g.cols()));
  J[0] = g;
  return J;
}

inline JetMatrix jmatmul(const JetMatrix& A, const JetMatrix& B) {
  const std::size_t n = A.size();
  JetMatrix out(n, Matrix::Zero(A[0].rows(), B[0].cols()));
  for (std::size_t s = 0; s < n; ++s) {
    std::size_t sub = s;
    while (true) {
      if (!A[sub].isZero(0.0) && !B[s ^ sub].isZero(0.0)) out[s] += A[sub] * B[s ^ sub];
      if (sub == 0) break;
      sub = (sub - 1) & s;
    }
  }
  return out;
}

inline JetScalar jtrace(const JetMatrix& A) {
  JetScalar t(A.size());
  for (std::size_t s = 0; s < A.size(); ++s) t[s] = A[s].trace();
  return t;
}

// Left-multiply the jet matrix by (1 + eps_bit * e_{b a}): in every component
// whose mask contains `bit`, add row a of the component with that bit cleared
// into row b.
inline void left_mul_elem(JetMatrix& J, int b, int a, std::size_t bit) {
  for (std::size_t s = J.size(); s-- > 0;) {
    if (s & bit) J[s].row(b) += J[s ^ bit].row(a);
  }
}

// Power sums p_m = tr M^m for m = 1..maxm as jets.
inline std::vector<JetScalar> power_sums(const JetMatrix& M, int maxm) {
  std::vector<JetScalar> p;
  p.reserve(maxm);
  JetMatrix cur = M;
  p.push_back(jtrace(cur));
  for (int m = 2; m <= maxm; ++m) {
    cur = jmatmul(cur, M);
    p.push_back(jtrace(cur));
  }
  return p;
}

// Complete homogeneous h_0..h_maxm from power sums via Newton's identities:
// m h_m = sum_{i=1}^{m} p_i h_{m-i}.
inline std::vector<JetScalar> h_from_p(const std::vector<JetScalar>& p, int maxm, int k) {
  std::vector<JetScalar> h;
  h.reserve(maxm + 1);
  h.push_back(jconst(k, 1.0));
  for (int m = 1; m <= maxm; ++m) {
    JetScalar acc = jzero(k);
    for (int i = 1; i <= m; ++i) acc = jadd(acc, jmul(p[i - 1], h[m - i]));
    for (auto& c : acc) c /= static_cast<double>(m);
    h.push_back(std::move(acc));
  }
  return h;
}

// Elementary e_0..e_maxa from power sums:
// a e_a = sum_{i=1}^{a} (-1)^{i-1} p_i e_{a-i}.
inline std::vector<JetScalar> e_from_p(const std::vector<JetScalar>& p, int maxa, int k) {
  std::vector<JetScalar> e;
  e.reserve(maxa + 1);
  e.push_back(jconst(k, 1.0));
  for (int a = 1; a <= maxa; ++a) {
    JetScalar acc = jzero(k);
    double sgn = 1.0;
    for (int i = 1; i <= a; ++i) {
      JetScalar term = jmul(p[i - 1], e[a - i]);
      for (std::size_t s = 0; s < acc.size(); ++s) acc[s] += sgn * term[s];
      sgn = -sgn;
    }
    for (auto& c : acc) c /= static_cast<double>(a);
    e.push_back(std::move(acc));
  }
  return e;
}

namespace detail {

// Determinant of a matrix with jet entries by Laplace expansion along the
// first column (the ring has zero divisors, so no pivoting-based elimination).
inline JetScalar jdet_minor(const std::vector<std::vector<JetScalar>>& M,
                            const std::vector<int>& rows, const std::vector<int>& cols, int k) {
  const std::size_t m = rows.size();
  if (m == 0) return jconst(k, 1.0);
  if (m == 1) return M[rows[0]][cols[0]];
  JetScalar acc = jzero(k);
  std::vector<int> subrows(rows.begin() + 1, rows.end());
  double sgn = 1.0;
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<int> subcols;
    subcols.reserve(m - 1);
    for (std::size_t jj = 0; jj < m; ++jj)
      if (jj != j) subcols.push_back(cols[jj]);
    JetScalar minor = jdet_minor(M, subrows, subcols, k);
    JetScalar term = jmul(M[rows[0]][cols[j]], minor);
    for (std::size_t s = 0; s < acc.size(); ++s) acc[s] += sgn * term[s];
    sgn = -sgn;
  }
  return acc;
}

}  // namespace detail

// Jacobi-Trudi determinant det(h_{lambda_i - i + j}) with jet-valued h.
inline JetScalar schur_from_h(const Partition& lam, const std::vector<JetScalar>& h, int k) {
  const int l = part_rows(lam);
  if (l == 0) return jconst(k, 1.0);
  std::vector<std::vector<JetScalar>> M(l, std::vector<JetScalar>(l));
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) {
      int idx = lam[i] - (i + 1) + (j + 1);
      M[i][j] = (idx >= 0) ? h[idx] : jzero(k);
    }
  std::vector<int> rows(l), cols(l);
  for (int i = 0; i < l; ++i) rows[i] = cols[i] = i;
  return detail::jdet_minor(M, rows, cols, k);
}

// ----- Scalar functionals of a jet matrix M (the building blocks all the
// ----- operator series are derivatives of).

// Schur character chi_lambda(M); identically zero when lambda has more rows
// than the matrix size.
inline JetScalar f_character(const Partition& lam, const JetMatrix& M, int k) {
  const int N = static_cast<int>(M[0].rows());
  if (part_rows(lam) > N) return jzero(k);
  if (lam.empty()) return jconst(k, 1.0);
  const int D = lam[0] + part_rows(lam) - 1;
  auto p = power_sums(M, D);
  auto h = h_from_p(p, D, k);
  return schur_from_h(lam, h, k);
}

// tr(M^pmul) * det(zI - M); pmul = 0 gives the bare characteristic value.
// det(zI - M) = sum_a (-1)^a z^{N-a} e_a(M).
inline JetScalar f_det_shift(cplx z, int pmul, const JetMatrix& M, int k) {
  const int N = static_cast<int>(M[0].rows());
  auto p = power_sums(M, std::max(N, pmul));
  auto e = e_from_p(p, N, k);
  JetScalar det = jzero(k);
  double sgn = 1.0;
  for (int a = 0; a <= N; ++a) {
    const cplx zp = std::pow(z, N - a);
    for (std::size_t s = 0; s < det.size(); ++s) det[s] += sgn * zp * e[a][s];
    sgn = -sgn;
  }
  if (pmul == 0) return det;
  return jmul(det, p[pmul - 1]);
}

// tr(M^pmul) / det(zI - M).
inline JetScalar f_invdet_shift(cplx z, int pmul, const JetMatrix& M, int k) {
  JetScalar det = f_det_shift(z, 0, M, k);
  JetScalar inv = jinv(det, k);
  if (pmul == 0) return inv;
  auto p = power_sums(M, pmul);
  return jmul(inv, p[pmul - 1]);
}

// tr M^m.
inline JetScalar f_power_sum(int m, const JetMatrix& M, int /*k*/) {
  JetMatrix cur = M;
  for (int i = 1; i < m; ++i) cur = jmatmul(cur, M);
  return jtrace(cur);
}

// exp(sum_j t_j tr M^j), the time-dependent scalar seed of the master
// operator.
inline JetScalar f_exp_times(const TimesVector& t, const JetMatrix& M, int k) {
  const int D = static_cast<int>(t.size());
  JetScalar arg = jzero(k);
  if (D > 0) {
    auto p = power_sums(M, D);
    for (int j = 1; j <= D; ++j) {
      if (t[j - 1] == cplx(0.0)) continue;
      for (std::size_t s = 0; s < arg.size(); ++s) arg[s] += t[j - 1] * p[j - 1][s];
    }
  }
  return jexp(arg, k);
}

}  // namespace mastert

#endif  // MASTERT_JETS_HPP
