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
#ifndef MASTERT_SPINCHAIN_HPP
#define MASTERT_SPINCHAIN_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mastert/coderiv.hpp"
#include "mastert/tensorspace.hpp"
#include "mastert/types.hpp"
#include "mastert/upoly.hpp"

namespace mastert {

// Occupation numbers of the N letters across the n sites.
using WeightVector = std::vector<int>;

// Rational two-site R-matrix I (x) I + P / u.
inline TensorOperator r_matrix(cplx u, int N) {
  if (std::abs(u) == 0.0) throw InvalidInputError("r_matrix: u must be nonzero");
  const long dim = static_cast<long>(N) * N;
  TensorOperator R = TensorOperator::Identity(dim, dim);
  R += permutation_op(1, 2, 2, N) / u;
  return R;
}

// Nonlocal commuting Hamiltonians: ordered product of nearest-unit-shift
// scatterings around the twist insertion at site i (1-based),
//   H_i = prod_{j=i+1..n}(1 + P_ij/(u_i-u_j)) g^{(i)} prod_{j=1..i-1}(1 + P_ij/(u_i-u_j)),
// factors multiplied left-to-right in increasing j on both sides.
inline TensorOperator hamiltonian(int i, const SpinChainSpec& spec) {
  spec.validate();
  const int n = spec.sites();
  const int N = spec.N;
  if (i < 1 || i > n) throw InvalidInputError("hamiltonian: site index out of range");
  const long dim = tensor_dim(N, n);
  const int i0 = i - 1;
  TensorOperator left = TensorOperator::Identity(dim, dim);
  for (int j = i0 + 1; j < n; ++j)
    left = left * (TensorOperator::Identity(dim, dim) +
                   permutation_op(i, j + 1, n, N) / (spec.u[i0] - spec.u[j]));
  TensorOperator right = TensorOperator::Identity(dim, dim);
  for (int j = 0; j < i0; ++j)
    right = right * (TensorOperator::Identity(dim, dim) +
                     permutation_op(i, j + 1, n, N) / (spec.u[i0] - spec.u[j]));
  Matrix g = Matrix::Zero(N, N);
  for (int a = 0; a < N; ++a) g(a, a) = spec.w[a];
  return left * embed_site(g, i, n, N) * right;
}

// Letter-counting operators M_a = sum_l e_aa^{(l)}, diagonal in the product
// basis; they commute with every H_i and grade the space into weight sectors.
inline std::vector<TensorOperator> weight_ops(const SpinChainSpec& spec) {
  const int n = spec.sites();
  const int N = spec.N;
  const long dim = tensor_dim(N, n);
  std::vector<TensorOperator> Ms(N, TensorOperator::Zero(dim, dim));
  for (int a = 0; a < N; ++a)
    for (long f = 0; f < dim; ++f) {
      int cnt = 0;
      for (int d : site_digits(f, n, N)) cnt += (d == a);
      Ms[a](f, f) = static_cast<double>(cnt);
    }
  return Ms;
}

// One-row (symmetric power) or one-column (antisymmetric power) auxiliary
// shape for the fusion construction.
struct FusedShape {
  enum class Kind { Row, Column };
  Kind kind = Kind::Row;
  int size = 1;
  static FusedShape row(int s) { return {Kind::Row, s}; }
  static FusedShape column(int a) { return {Kind::Column, a}; }
};

namespace detail {

// Monomial basis of Sym^s C^N (compositions alpha of s) or of Lambda^a C^N
// (increasing index subsets), together with the derived action of the matrix
// units e_{ab} and the diagonal twist.
struct AuxRep {
  std::vector<std::vector<int>> basis;  // Sym: exponent vectors; Asym: subsets
  bool symmetric = true;
  int N = 0;

  int dim() const { return static_cast<int>(basis.size()); }

  int index_of(const std::vector<int>& b) const {
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (basis[i] == b) return static_cast<int>(i);
    return -1;
  }

  // pi(e_{ab}): on monomials x^alpha it is x_a d/dx_b; on wedge subsets it
  // replaces letter b by letter a with the resorting sign.
  Matrix E(int a, int b) const {
    const int d = dim();
    Matrix M = Matrix::Zero(d, d);
    if (symmetric) {
      for (int i = 0; i < d; ++i) {
        const auto& al = basis[i];
        if (al[b] == 0) continue;
        std::vector<int> al2 = al;
        al2[b] -= 1;
        al2[a] += 1;
        M(index_of(al2), i) += static_cast<double>(al[b]);
      }
    } else {
      for (int i = 0; i < d; ++i) {
        const auto& S = basis[i];
        auto itb = std::find(S.begin(), S.end(), b);
        if (itb == S.end()) continue;
        if (a != b && std::find(S.begin(), S.end(), a) != S.end()) continue;
        std::vector<int> T;
        for (int x : S)
          if (x != b) T.push_back(x);
        T.push_back(a);
        std::vector<int> Ts = T;
        std::sort(Ts.begin(), Ts.end());
        const int pos_b = static_cast<int>(itb - S.begin());
        const int pos_a = static_cast<int>(std::find(Ts.begin(), Ts.end(), a) - Ts.begin());
        const double sign = ((pos_a + pos_b) % 2 == 0) ? 1.0 : -1.0;
        M(index_of(Ts), i) += sign;
      }
    }
    return M;
  }

  Matrix pi_g(const std::vector<cplx>& w) const {
    const int d = dim();
    Matrix M = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
      cplx val = 1.0;
      if (symmetric) {
        for (int a = 0; a < N; ++a)
          for (int r = 0; r < basis[i][a]; ++r) val *= w[a];
      } else {
        for (int a : basis[i]) val *= w[a];
      }
      M(i, i) = val;
    }
    return M;
  }
};

inline AuxRep make_aux_rep(const FusedShape& shape, int N) {
  AuxRep rep;
  rep.N = N;
  rep.symmetric = (shape.kind == FusedShape::Kind::Row);
  if (rep.symmetric) {
    const int s = shape.size;
    std::vector<int> al(N, 0);
    std::function<void(int, int)> rec = [&](int pos, int rem) {
      if (pos == N - 1) {
        al[pos] = rem;
        rep.basis.push_back(al);
        return;
      }
      for (int v = 0; v <= rem; ++v) {
        al[pos] = v;
        rec(pos + 1, rem - v);
      }
    };
    rec(0, s);
  } else {
    std::vector<int> S;
    std::function<void(int)> rec = [&](int start) {
      if (static_cast<int>(S.size()) == shape.size) {
        rep.basis.push_back(S);
        return;
      }
      for (int v = start; v < N; ++v) {
        S.push_back(v);
        rec(v + 1);
        S.pop_back();
      }
    };
    rec(0);
  }
  return rep;
}

}  // namespace detail

// Fusion oracle: T constructed from the trace formula with the auxiliary
// space carried explicitly in Sym^s or Lambda^a,
//   T(u) = prod_j (u - u_j) * tr_aux[ R^{1,aux}(u-u_1) ... R^{n,aux}(u-u_n) (I (x) pi(g)) ],
// with R^{j,aux}(x) = I + sum_{ab} e_ab^{(j)} (x) pi(e_ba) / x.  Independent
// of the matrix-derivative engine, which is exactly why it serves as its
// oracle.  A column with more rows than N is the zero operator.
inline TensorOperator fused_transfer(const FusedShape& shape, cplx u, const SpinChainSpec& spec) {
  spec.validate();
  const int n = spec.sites();
  const int N = spec.N;
  const long dimc = tensor_dim(N, n);
  if (shape.size < 0) throw InvalidInputError("fused_transfer: negative shape size");
  if (shape.kind == FusedShape::Kind::Column && shape.size > N)
    return TensorOperator::Zero(dimc, dimc);
  for (cplx uj : spec.u)
    if (std::abs(u - uj) < 1e-13)
      throw NonGenericError("fused_transfer: u collides with an inhomogeneity");

  detail::AuxRep rep = detail::make_aux_rep(shape, N);
  const int d = rep.dim();
  const long big = dimc * d;
  Matrix acc = Matrix::Identity(big, big);
  for (int j = 0; j < n; ++j) {
    Matrix R = Matrix::Identity(big, big);
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) {
        Matrix eab = Matrix::Zero(N, N);
        eab(a, b) = 1.0;
        const TensorOperator site = embed_site(eab, j + 1, n, N);
        const Matrix Eba = rep.E(b, a);
        // Kronecker product (chain slot major, aux slot minor).
        for (long r = 0; r < dimc; ++r)
          for (long c = 0; c < dimc; ++c) {
            if (site(r, c) == cplx(0.0)) continue;
            R.block(r * d, c * d, d, d) += site(r, c) / (u - spec.u[j]) * Eba;
          }
      }
    acc = acc * R;
  }
  {
    const Matrix pig = rep.pi_g(spec.w);
    Matrix post = Matrix::Zero(big, big);
    for (long r = 0; r < dimc; ++r)
      for (long c = 0; c < dimc; ++c)
        post.block(r * d, c * d, d, d) = acc.block(r * d, c * d, d, d) * pig;
    acc = std::move(post);
  }
  TensorOperator T = TensorOperator::Zero(dimc, dimc);
  for (long r = 0; r < dimc; ++r)
    for (long c = 0; c < dimc; ++c) T(r, c) = acc.block(r * d, c * d, d, d).trace();
  cplx pref = 1.0;
  for (cplx uj : spec.u) pref *= (u - uj);
  return pref * T;
}

// One eigenvalue's slice of the master-operator expansion: scalar
// u-polynomials tau_lambda(u), plus the chain data the classical modules need.
struct TauSeries {
  int N = 0;
  int n = 0;
  int K = 0;
  std::vector<cplx> u;
  std::vector<cplx> w;
  WeightVector m;             // twist-eigenvalue multiplicities of this state
  std::vector<cplx> H;        // Hamiltonian eigenvalues
  std::vector<Partition> lams;
  std::vector<UPoly> coeffs;  // parallel to lams

  const UPoly& at(const Partition& lam) const {
    for (std::size_t i = 0; i < lams.size(); ++i)
      if (lams[i] == lam) return coeffs[i];
    throw InvalidInputError("TauSeries: partition outside truncation");
  }
  bool has(const Partition& lam) const {
    for (const auto& l : lams)
      if (l == lam) return true;
    return false;
  }
  // tau at t = 0: the empty-partition polynomial prod_k (u - u_k).
  cplx tau0(cplx uu) const { return upoly_eval(coeffs[0], uu); }
};

struct SpectrumRecord {
  Vector eigenvector;    // unit norm, first nonzero component real-positive
  std::vector<cplx> H;   // eigenvalues of H_1..H_n
  WeightVector m;        // rounded weights, sum = n
  TauSeries tau;
};

// Joint diagonalization of {H_i} and {M_a} plus per-eigenvalue projection of
// every master coefficient.  Records are ordered lexicographically by weight
// vector, then by (Re H_1, Im H_1), so reports are stable across runs.
inline std::vector<SpectrumRecord> spectrum(const SpinChainSpec& spec) {
  spec.validate();
  const int n = spec.sites();
  const int N = spec.N;
  MasterTSeries master = master_t_coeffs(spec.K, spec.u, spec.w);
  const int L = static_cast<int>(master.lams.size());

  std::vector<SpectrumRecord> records;
  if (n == 0) {
    SpectrumRecord rec;
    rec.eigenvector = Vector::Ones(1);
    rec.m.assign(N, 0);
    rec.tau.N = N;
    rec.tau.n = 0;
    rec.tau.K = spec.K;
    rec.tau.u = spec.u;
    rec.tau.w = spec.w;
    rec.tau.m = rec.m;
    rec.tau.lams = master.lams;
    for (int l = 0; l < L; ++l) rec.tau.coeffs.push_back({master.coeffs[l][0](0, 0)});
    records.push_back(std::move(rec));
    return records;
  }

  std::vector<TensorOperator> ops;
  ops.reserve(n + N);
  for (int i = 1; i <= n; ++i) ops.push_back(hamiltonian(i, spec));
  for (auto& M : weight_ops(spec)) ops.push_back(std::move(M));
  JointEigenbasis basis = joint_eigenbasis(ops, 1e-8, spec.seed);

  const long dim = tensor_dim(N, n);
  records.reserve(dim);
  for (long r = 0; r < dim; ++r) {
    SpectrumRecord rec;
    rec.eigenvector = basis.V.col(r);
    for (int i = 0; i < n; ++i) rec.H.push_back(basis.eigenvalues[i](r));
    for (int a = 0; a < N; ++a) {
      const cplx mv = basis.eigenvalues[n + a](r);
      const double rounded = std::round(mv.real());
      if (std::abs(mv - rounded) > 1e-6)
        throw NonGenericError("spectrum: weight of record " + std::to_string(r) +
                              " is not integral (M_" + std::to_string(a + 1) + " = " +
                              std::to_string(mv.real()) + (mv.imag() < 0 ? "-" : "+") +
                              std::to_string(std::abs(mv.imag())) + "i)");
      rec.m.push_back(static_cast<int>(rounded));
    }
    int msum = 0;
    for (int c : rec.m) msum += c;
    if (msum != n) throw NonGenericError("spectrum: weights of a record do not sum to n");

    rec.tau.N = N;
    rec.tau.n = n;
    rec.tau.K = spec.K;
    rec.tau.u = spec.u;
    rec.tau.w = spec.w;
    rec.tau.m = rec.m;
    rec.tau.H = rec.H;
    rec.tau.lams = master.lams;
    rec.tau.coeffs.assign(L, UPoly(n + 1, cplx(0.0)));
    records.push_back(std::move(rec));
  }

  // Rayleigh quotients of every master coefficient against every eigenpair:
  // one similarity transform per coefficient serves all records.
  for (int l = 0; l < L; ++l)
    for (int d = 0; d <= n; ++d) {
      Matrix D = basis.Vinv * master.coeffs[l][d] * basis.V;
      for (long r = 0; r < dim; ++r) records[r].tau.coeffs[l][d] = D(r, r);
    }

  std::sort(records.begin(), records.end(), [](const SpectrumRecord& a, const SpectrumRecord& b) {
    if (a.m != b.m) return a.m < b.m;
    const cplx ha = a.H.empty() ? cplx(0.0) : a.H[0];
    const cplx hb = b.H.empty() ? cplx(0.0) : b.H[0];
    if (ha.real() != hb.real()) return ha.real() < hb.real();
    return ha.imag() < hb.imag();
  });
  return records;
}

}  // namespace mastert

#endif  // MASTERT_SPINCHAIN_HPP
