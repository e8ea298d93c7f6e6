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
#ifndef MASTERT_CODERIV_HPP
#define MASTERT_CODERIV_HPP

#include <functional>
#include <utility>
#include <vector>

#include "mastert/jets.hpp"
#include "mastert/symfun.hpp"
#include "mastert/tensorspace.hpp"
#include "mastert/types.hpp"
#include "mastert/upoly.hpp"

namespace mastert {

// A GL(N)-invariant scalar function of the twist matrix, in one of the closed
// forms the matrix-derivative engine knows how to evaluate over jets.
struct ScalarFunctionSpec {
  enum class Kind { Character, DetShift, InvDetShift, PowerSum, ExpTimes };

  Kind kind = Kind::Character;
  Partition lam;   // Character: chi_lambda(M)
  cplx z = 0.0;    // DetShift: det(zI - M); InvDetShift: 1/det(zI - M)
  int pmul = 0;    // optional extra factor tr(M^pmul) on the det kinds
  int m = 1;       // PowerSum: tr(M^m)
  TimesVector t;   // ExpTimes: exp(sum_j t_j tr M^j)

  static ScalarFunctionSpec character(Partition l) {
    ScalarFunctionSpec s;
    s.kind = Kind::Character;
    s.lam = std::move(l);
    return s;
  }
  static ScalarFunctionSpec det_shift(cplx z, int pmul = 0) {
    ScalarFunctionSpec s;
    s.kind = Kind::DetShift;
    s.z = z;
    s.pmul = pmul;
    return s;
  }
  static ScalarFunctionSpec invdet_shift(cplx z, int pmul = 0) {
    ScalarFunctionSpec s;
    s.kind = Kind::InvDetShift;
    s.z = z;
    s.pmul = pmul;
    return s;
  }
  static ScalarFunctionSpec power_sum(int m) {
    ScalarFunctionSpec s;
    s.kind = Kind::PowerSum;
    s.m = m;
    return s;
  }
  static ScalarFunctionSpec exp_times(TimesVector times) {
    ScalarFunctionSpec s;
    s.kind = Kind::ExpTimes;
    s.t = std::move(times);
    return s;
  }

  JetScalar eval(const JetMatrix& M, int k) const {
    switch (kind) {
      case Kind::Character:
        return f_character(lam, M, k);
      case Kind::DetShift:
        return f_det_shift(z, pmul, M, k);
      case Kind::InvDetShift:
        return f_invdet_shift(z, pmul, M, k);
      case Kind::PowerSum:
        return f_power_sum(m, M, k);
      case Kind::ExpTimes:
        return f_exp_times(t, M, k);
    }
    throw InvalidInputError("ScalarFunctionSpec: unknown kind");
  }
};

// Table of all k-fold matrix derivatives of a scalar function f(g): entry
// (a_1 b_1, ..., a_k b_k) is the coefficient of eps_1...eps_k in
// f((1 + eps_1 e_{b_1 a_1}) ... (1 + eps_k e_{b_k a_k}) g).  The factor of the
// FIRST-applied derivative sits leftmost; slot j maps to the j-th smallest
// site of whatever subset the table is later placed on.  Values are stored
// flat with slot 1 most significant: index = sum_j (a_j N + b_j) (N^2)^{k-j}.
struct CoderivTable {
  int k = 0;
  int N = 0;
  std::vector<cplx> vals;
};

namespace detail {

// Enumerate the (N^2)^k leaf jet matrices (1 + eps_1 e_{b_1 a_1}) ...
// (1 + eps_k e_{b_k a_k}) g, multiplying slot k first (it is rightmost next to
// g) and slot 1 last.  cb(flatIndex, J) receives each leaf once.
template <typename Cb>
void foreach_coderiv_leaf(int k, const Matrix& g, Cb&& cb) {
  const int N = static_cast<int>(g.rows());
  const long NN = static_cast<long>(N) * N;
  if (k == 0) {
    cb(0L, jmat_from(g, 0));
    return;
  }
  std::function<void(int, const JetMatrix&, long, long)> rec =
      [&](int j, const JetMatrix& J, long idx, long weight) {
        if (j == 0) {
          cb(idx, J);
          return;
        }
        for (int a = 0; a < N; ++a)
          for (int b = 0; b < N; ++b) {
            JetMatrix J2 = J;
            left_mul_elem(J2, b, a, std::size_t(1) << (j - 1));
            rec(j - 1, J2, idx + (static_cast<long>(a) * N + b) * weight, weight * NN);
          }
      };
  // Slot k carries the least significant digit (weight 1), slot 1 the most.
  rec(k, jmat_from(g, k), 0, 1);
}

}  // namespace detail

// All k-fold derivative entries of f at the diagonal twist g.
inline CoderivTable coderivative_entries(const ScalarFunctionSpec& f, int k, const Matrix& g) {
  CoderivTable tab;
  tab.k = k;
  tab.N = static_cast<int>(g.rows());
  long size = 1;
  for (int i = 0; i < k; ++i) size *= static_cast<long>(tab.N) * tab.N;
  tab.vals.assign(size, cplx(0.0));
  const std::size_t full = (std::size_t(1) << k) - 1;
  detail::foreach_coderiv_leaf(k, g, [&](long idx, const JetMatrix& J) { tab.vals[idx] = f.eval(J, k)[full]; });
  return tab;
}

// Place a k-slot derivative table onto the ascending (0-based) site subset S
// of the n-site chain: slots act on the sites of S in increasing order and
// every other site carries a Kronecker delta.
inline TensorOperator assemble_subset(const CoderivTable& tab, const std::vector<int>& S, int n, int N) {
  const int k = tab.k;
  if (static_cast<int>(S.size()) != k) throw InvalidInputError("assemble_subset: |S| != table order");
  const long dim = tensor_dim(N, n);
  TensorOperator op = TensorOperator::Zero(dim, dim);
  std::vector<int> others;
  others.reserve(n - k);
  {
    std::vector<bool> inS(n, false);
    for (int s : S) inS[s] = true;
    for (int i = 0; i < n; ++i)
      if (!inS[i]) others.push_back(i);
  }
  const long restCount = tensor_dim(N, n - k);
  std::vector<int> alpha(n), beta(n);
  for (long t = 0; t < static_cast<long>(tab.vals.size()); ++t) {
    const cplx val = tab.vals[t];
    if (val == cplx(0.0)) continue;
    long rem = t;
    for (int idx = k - 1; idx >= 0; --idx) {
      const int ab = static_cast<int>(rem % (N * N));
      rem /= N * N;
      alpha[S[idx]] = ab / N;
      beta[S[idx]] = ab % N;
    }
    for (long r = 0; r < restCount; ++r) {
      long rr = r;
      for (int idx = static_cast<int>(others.size()) - 1; idx >= 0; --idx) {
        alpha[others[idx]] = beta[others[idx]] = static_cast<int>(rr % N);
        rr /= N;
      }
      long row = 0, col = 0;
      for (int i = 0; i < n; ++i) {
        row = row * N + alpha[i];
        col = col * N + beta[i];
      }
      op(row, col) += val;
    }
  }
  return op;
}

// The transfer-type operator prod->_{i=n..1}(u - u_i + D_i) applied to f(g),
// as an operator-valued polynomial in u (ascending coefficients, degree n).
// Expanding the ordered product over subsets: the sites in S receive matrix
// derivatives, the complement contributes prod (u - u_i).  Derivative tables
// depend only on |S|, so one table per order k serves all C(n,k) subsets.
inline OpPoly transfer_op(const ScalarFunctionSpec& f, const std::vector<cplx>& uvec,
                          const std::vector<cplx>& wvec) {
  const int n = static_cast<int>(uvec.size());
  const int N = static_cast<int>(wvec.size());
  Matrix g = Matrix::Zero(N, N);
  for (int a = 0; a < N; ++a) g(a, a) = wvec[a];
  const long dim = tensor_dim(N, n);
  OpPoly coeffs(n + 1, Matrix::Zero(dim, dim));
  std::vector<CoderivTable> tables;
  tables.reserve(n + 1);
  for (int k = 0; k <= n; ++k) tables.push_back(coderivative_entries(f, k, g));
  for (unsigned r = 0; r < (1u << n); ++r) {
    std::vector<int> S;
    std::vector<cplx> roots;
    for (int i = 0; i < n; ++i) {
      if (r & (1u << i))
        S.push_back(i);
      else
        roots.push_back(uvec[i]);
    }
    TensorOperator op = assemble_subset(tables[S.size()], S, n, N);
    UPoly pol = upoly_from_roots(roots);
    for (std::size_t d = 0; d < pol.size(); ++d) coeffs[d] += pol[d] * op;
  }
  return coeffs;
}

// The master operator's expansion over Schur polynomials: one operator-valued
// u-polynomial per partition with |lambda| <= K (rows beyond N dropped — their
// characters vanish identically).
struct MasterTSeries {
  int N = 0;
  int n = 0;
  int K = 0;
  std::vector<cplx> u;
  std::vector<cplx> w;
  std::vector<Partition> lams;   // partitions_up_to(K, N) order
  std::vector<OpPoly> coeffs;    // parallel to lams

  const OpPoly& at(const Partition& lam) const {
    for (std::size_t i = 0; i < lams.size(); ++i)
      if (lams[i] == lam) return coeffs[i];
    throw InvalidInputError("MasterTSeries: partition outside truncation");
  }
  bool has(const Partition& lam) const {
    for (const auto& l : lams)
      if (l == lam) return true;
    return false;
  }
};

// All Schur-coefficient operators up to degree K.  The expensive part of each
// leaf evaluation (power sums and the h-ladder of the jet matrix) is shared
// across every partition, and each per-order table is shared across all site
// subsets of that order.
inline MasterTSeries master_t_coeffs(int K, const std::vector<cplx>& uvec,
                                     const std::vector<cplx>& wvec) {
  MasterTSeries out;
  out.N = static_cast<int>(wvec.size());
  out.n = static_cast<int>(uvec.size());
  out.K = K;
  out.u = uvec;
  out.w = wvec;
  out.lams = partitions_up_to(K, out.N);
  const int L = static_cast<int>(out.lams.size());
  const int n = out.n;
  const int N = out.N;
  const int Dmax = std::max(K, 1);
  Matrix g = Matrix::Zero(N, N);
  for (int a = 0; a < N; ++a) g(a, a) = wvec[a];

  // tables[k][l] is the order-k derivative table of chi_{lams[l]}.
  std::vector<std::vector<std::vector<cplx>>> tables(n + 1);
  for (int k = 0; k <= n; ++k) {
    long size = 1;
    for (int i = 0; i < k; ++i) size *= static_cast<long>(N) * N;
    tables[k].assign(L, std::vector<cplx>(size, cplx(0.0)));
    const std::size_t full = (std::size_t(1) << k) - 1;
    detail::foreach_coderiv_leaf(k, g, [&](long idx, const JetMatrix& J) {
      auto p = power_sums(J, Dmax);
      auto h = h_from_p(p, Dmax, k);
      for (int l = 0; l < L; ++l) tables[k][l][idx] = schur_from_h(out.lams[l], h, k)[full];
    });
  }

  const long dim = tensor_dim(N, n);
  out.coeffs.assign(L, OpPoly(n + 1, Matrix::Zero(dim, dim)));
  for (unsigned r = 0; r < (1u << n); ++r) {
    std::vector<int> S;
    std::vector<cplx> roots;
    for (int i = 0; i < n; ++i) {
      if (r & (1u << i))
        S.push_back(i);
      else
        roots.push_back(uvec[i]);
    }
    UPoly pol = upoly_from_roots(roots);
    const int k = static_cast<int>(S.size());
    for (int l = 0; l < L; ++l) {
      CoderivTable tab;
      tab.k = k;
      tab.N = N;
      tab.vals = tables[k][l];  // copy; assemble reads only
      TensorOperator op = assemble_subset(tab, S, n, N);
      for (std::size_t d = 0; d < pol.size(); ++d) out.coeffs[l][d] += pol[d] * op;
    }
  }
  return out;
}

// Stationary wave-function operator: prod->(1 + D_i / (u - u_i)) applied to
// det(zI - g) (adjoint: applied to 1/det(zI - g)), scaled by z^{u-N}
// (adjoint: z^{N-u}).  The polynomial part prod->(u - u_i + D_i) f(zI, g) is
// returned unscaled as well, so callers with integer u offsets can stay clear
// of complex powers of z.
struct StationaryBAOp {
  TensorOperator polynomial;  // prod->(u - u_i + D_i) applied to the det kind
  cplx denom = 1.0;           // prod_i (u - u_i)
  cplx scale = 1.0;           // z^{u-N} (adjoint: z^{N-u}), principal branch
  bool at_pole = false;       // u coincides with an inhomogeneity

  // (1 + D/(u-u_n)) ... (1 + D/(u-u_1)) form; undefined at u = u_i.
  TensorOperator ratio() const {
    if (at_pole)
      throw NonGenericError("stationary_ba_op: u equals an inhomogeneity; use the polynomial part");
    return polynomial / denom;
  }
  TensorOperator scaled() const { return scale * ratio(); }
};

inline StationaryBAOp stationary_ba_op(cplx u, cplx z, const SpinChainSpec& spec, bool adjoint) {
  spec.validate();
  if (std::abs(z) == 0.0) throw InvalidInputError("stationary_ba_op: z must be nonzero");
  if (adjoint)
    for (cplx wa : spec.w)
      if (std::abs(z - wa) < kGenericityGap)
        throw InvalidInputError("stationary_ba_op: adjoint kind has a pole at z = w_a");
  const ScalarFunctionSpec f =
      adjoint ? ScalarFunctionSpec::invdet_shift(z) : ScalarFunctionSpec::det_shift(z);
  OpPoly P = transfer_op(f, spec.u, spec.w);
  StationaryBAOp out;
  out.polynomial = oppoly_eval(P, u);
  out.denom = 1.0;
  for (cplx ui : spec.u) {
    out.denom *= (u - ui);
    if (std::abs(u - ui) < 1e-12) out.at_pole = true;
  }
  const cplx expo = adjoint ? (cplx(spec.N) - u) : (u - cplx(spec.N));
  out.scale = std::exp(expo * std::log(z));
  return out;
}

}  // namespace mastert

#endif  // MASTERT_CODERIV_HPP
