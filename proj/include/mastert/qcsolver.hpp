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
#ifndef MASTERT_QCSOLVER_HPP
#define MASTERT_QCSOLVER_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mastert/rs.hpp"
#include "mastert/spinchain.hpp"
#include "mastert/types.hpp"

namespace mastert {

// The inverse spectral problem: given the inhomogeneities u, the twist
// eigenvalues w and a weight vector m, find every H in C^n with
//   tr Y0(H)^j = sum_a m_a w_a^j   for j = 1..n,
// where Y0(H) = diag(H) B and B_ij = 1 (i = j), 1/(u_j - u_i + 1) otherwise.
// Each solution reproduces one joint eigenstate of the commuting family.

struct SolverOptions {
  int multistart_factor = 50;   // attempt budget = factor * expected count
  bool blind = false;           // ignore caller-provided hints entirely
  int max_newton = 60;          // iterations per attempt
  double stop = 1e-13;          // sup-norm of F that ends an attempt early
  double accept = 1e-11;        // sup-norm below which an attempt counts
  int max_halvings = 20;        // damping budget per Newton step
  double dedupe_tol = 1e-6;     // sup-norm identifying two solutions
  std::uint64_t seed = 42;      // restart-perturbation stream
};

struct ClassicalSolution {
  std::vector<cplx> H;
  WeightVector m;
  double residual = 0.0;  // sup-norm of the moment equations at H
};

struct SectorSolve {
  std::vector<ClassicalSolution> solutions;
  int expected = 0;    // multiset-permutation count n! / prod_a m_a!
  bool complete = false;
  long attempts = 0;
};

// Decoupled-chain seed: site i carries twist eigenvalue w[asn[i]] dressed by
// the one-particle factor prod_{j != i} (u_i - u_j + 1)/(u_i - u_j).  For a
// single-species sector (all asn equal) the seed solves the moment equations
// exactly in closed form.
inline std::vector<cplx> free_field_seed(const SpinChainSpec& spec, const std::vector<int>& asn) {
  const int n = spec.sites();
  if (static_cast<int>(asn.size()) != n)
    throw InvalidInputError("free_field_seed: assignment length must equal the site count");
  std::vector<cplx> H(n);
  for (int i = 0; i < n; ++i) {
    if (asn[i] < 0 || asn[i] >= spec.N)
      throw InvalidInputError("free_field_seed: assignment index out of range");
    cplx prod = 1.0;
    for (int j = 0; j < n; ++j)
      if (j != i) prod *= (spec.u[i] - spec.u[j] + 1.0) / (spec.u[i] - spec.u[j]);
    H[i] = spec.w[asn[i]] * prod;
  }
  return H;
}

namespace detail {

inline Matrix moment_kernel(const SpinChainSpec& spec) {
  const int n = spec.sites();
  Matrix B = Matrix::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (j != i) B(i, j) = 1.0 / (spec.u[j] - spec.u[i] + 1.0);
  return B;
}

// F_j(H) = tr Y^j - target_j and the analytic Jacobian
// dF_j/dH_i = j (B Y^{j-1})_ii.
inline void moment_system(const Matrix& B, const std::vector<cplx>& target,
                          const std::vector<cplx>& H, Vector& F, Matrix& J) {
  const int n = static_cast<int>(H.size());
  Matrix Y = B;
  for (int i = 0; i < n; ++i) Y.row(i) *= H[i];
  F = Vector::Zero(n);
  J = Matrix::Zero(n, n);
  Matrix Yjm1 = Matrix::Identity(n, n);  // Y^{j-1}
  for (int j = 1; j <= n; ++j) {
    const Matrix BY = B * Yjm1;
    for (int i = 0; i < n; ++i) J(j - 1, i) = static_cast<double>(j) * BY(i, i);
    Yjm1 = Yjm1 * Y;  // now Y^j
    F(j - 1) = Yjm1.trace() - target[j - 1];
  }
}

}  // namespace detail

// Find the classical solutions of one weight sector by damped Newton
// iteration from decoupled-chain seeds and randomized restarts.  `hints` may
// carry externally known H vectors (for instance from the quantum spectrum)
// to be tried first; blind mode ignores them so the search rests on the
// moment equations alone.  If the attempt budget runs out first, the partial
// list is returned with `complete = false`.
inline SectorSolve solve_sector(const SpinChainSpec& spec, const WeightVector& m,
                                const SolverOptions& opts = SolverOptions(),
                                const std::vector<std::vector<cplx>>& hints = {}) {
  spec.validate();
  const int n = spec.sites();
  if (static_cast<int>(m.size()) != spec.N)
    throw InvalidInputError("solve_sector: weight vector length must equal N");
  int msum = 0;
  for (int a : m) {
    if (a < 0) throw InvalidInputError("solve_sector: negative weight");
    msum += a;
  }
  if (msum != n) throw InvalidInputError("solve_sector: weights must sum to the site count");

  SectorSolve out;
  // expected = n! / prod m_a!
  double cnt = 1.0;
  for (int r = 2; r <= n; ++r) cnt *= r;
  for (int a : m)
    for (int r = 2; r <= a; ++r) cnt /= r;
  out.expected = static_cast<int>(cnt + 0.5);

  // The zero-site chain has one empty sector with one empty solution; the
  // Newton machinery below assumes at least one unknown.
  if (n == 0) {
    out.solutions.push_back({{}, m, 0.0});
    out.complete = true;
    out.attempts = 1;
    return out;
  }

  std::vector<cplx> target(n, cplx(0.0));
  for (int j = 1; j <= n; ++j)
    for (int a = 0; a < spec.N; ++a)
      target[j - 1] += static_cast<double>(m[a]) * std::pow(spec.w[a], j);
  const Matrix B = detail::moment_kernel(spec);

  // Seed queue: hints (unless blind), then every distinct weight assignment,
  // then randomized perturbations of the assignments round-robin.
  std::vector<std::vector<int>> assignments;
  {
    std::vector<int> asn;
    for (int a = 0; a < spec.N; ++a) asn.insert(asn.end(), m[a], a);
    std::sort(asn.begin(), asn.end());
    do {
      assignments.push_back(asn);
    } while (std::next_permutation(asn.begin(), asn.end()));
  }
  std::vector<std::vector<cplx>> seeds;
  if (!opts.blind)
    for (const auto& h : hints) seeds.push_back(h);
  for (const auto& asn : assignments) seeds.push_back(free_field_seed(spec, asn));

  detail::Rng rng(opts.seed);
  const long budget = static_cast<long>(opts.multistart_factor) * out.expected;
  Vector F;
  Matrix J;
  std::size_t next_base = (opts.blind ? 0 : hints.size());  // perturb assignments only

  auto known = [&](const std::vector<cplx>& H) {
    for (const auto& sol : out.solutions) {
      double d = 0.0;
      for (int i = 0; i < n; ++i) d = std::max(d, std::abs(sol.H[i] - H[i]));
      if (d <= opts.dedupe_tol) return true;
    }
    return false;
  };

  for (out.attempts = 0; out.attempts < budget; ++out.attempts) {
    std::vector<cplx> x;
    if (out.attempts < static_cast<long>(seeds.size())) {
      x = seeds[out.attempts];
    } else {
      if (next_base >= seeds.size()) next_base = (opts.blind ? 0 : hints.size());
      x = seeds[next_base++];
      for (auto& xi : x) xi *= (1.0 + 0.4 * rng.cnormal());
    }
    if (static_cast<int>(x.size()) != n) continue;

    detail::moment_system(B, target, x, F, J);
    double fn = F.cwiseAbs().maxCoeff();
    bool ok = true;
    for (int it = 0; it < opts.max_newton && fn > opts.stop; ++it) {
      const Vector dx = J.partialPivLu().solve(-F);
      if (!dx.allFinite()) {
        ok = false;
        break;
      }
      double lam = 1.0;
      std::vector<cplx> xTry = x;
      double fTry = fn;
      int halvings = 0;
      for (; halvings <= opts.max_halvings; ++halvings) {
        for (int i = 0; i < n; ++i) xTry[i] = x[i] + lam * dx(i);
        Vector Ft;
        Matrix Jt;
        detail::moment_system(B, target, xTry, Ft, Jt);
        fTry = Ft.cwiseAbs().maxCoeff();
        if (fTry < fn || fTry <= opts.stop) {
          x = xTry;
          F = Ft;
          J = Jt;
          fn = fTry;
          break;
        }
        lam *= 0.5;
      }
      if (halvings > opts.max_halvings) {
        ok = false;  // no descent within the damping budget
        break;
      }
    }
    if (!ok || fn > opts.accept || known(x)) continue;

    // Polish: two undamped steps sharpen the root to near machine precision.
    for (int it = 0; it < 2; ++it) {
      const Vector dx = J.partialPivLu().solve(-F);
      if (!dx.allFinite()) break;
      for (int i = 0; i < n; ++i) x[i] += dx(i);
      detail::moment_system(B, target, x, F, J);
    }
    fn = F.cwiseAbs().maxCoeff();
    if (fn > opts.accept || known(x)) continue;

    ClassicalSolution sol;
    sol.H = x;
    sol.m = m;
    sol.residual = fn;
    out.solutions.push_back(std::move(sol));
    if (static_cast<int>(out.solutions.size()) >= out.expected) {
      ++out.attempts;
      break;
    }
  }
  // Stable presentation order, matching the spectrum's record ordering.
  std::sort(out.solutions.begin(), out.solutions.end(),
            [](const ClassicalSolution& a, const ClassicalSolution& b) {
              if (a.H[0].real() != b.H[0].real()) return a.H[0].real() < b.H[0].real();
              return a.H[0].imag() < b.H[0].imag();
            });
  out.complete = static_cast<int>(out.solutions.size()) == out.expected;
  return out;
}

// All sectors of the chain: every weight vector with sum equal to the site
// count, enumerated in the sector order the spectrum uses.
inline std::vector<WeightVector> all_sectors(const SpinChainSpec& spec) {
  std::vector<WeightVector> out;
  WeightVector m(spec.N, 0);
  std::function<void(int, int)> rec = [&](int a, int rem) {
    if (a == spec.N - 1) {
      m[a] = rem;
      out.push_back(m);
      return;
    }
    for (int v = 0; v <= rem; ++v) {
      m[a] = v;
      rec(a + 1, rem - v);
    }
  };
  rec(0, spec.sites());
  return out;
}

// Bipartite identification of quantum records with classical solutions: pairs
// must share the weight vector and sit within `tol` in the sup norm over H.
// Globally greedy on distance, deterministic; anything left over is listed.
struct MatchReport {
  std::vector<std::pair<int, int>> pairs;  // (record index, solution index)
  std::vector<int> unmatched_records;
  std::vector<int> unmatched_solutions;
  double worst = 0.0;  // largest matched distance

  bool perfect() const { return unmatched_records.empty() && unmatched_solutions.empty(); }
};

inline MatchReport match_spectra(const std::vector<SpectrumRecord>& records,
                                 const std::vector<ClassicalSolution>& sols, double tol = 1e-6) {
  const int R = static_cast<int>(records.size());
  const int S = static_cast<int>(sols.size());
  std::vector<std::vector<double>> dist(R, std::vector<double>(S, 1e300));
  for (int r = 0; r < R; ++r)
    for (int s = 0; s < S; ++s) {
      if (records[r].m != sols[s].m) continue;
      if (records[r].H.size() != sols[s].H.size()) continue;
      double d = 0.0;
      for (std::size_t i = 0; i < sols[s].H.size(); ++i)
        d = std::max(d, std::abs(records[r].H[i] - sols[s].H[i]));
      dist[r][s] = d;
    }
  MatchReport rep;
  std::vector<bool> rUsed(R, false), sUsed(S, false);
  for (;;) {
    int br = -1, bs = -1;
    double bd = tol;
    for (int r = 0; r < R; ++r) {
      if (rUsed[r]) continue;
      for (int s = 0; s < S; ++s) {
        if (sUsed[s]) continue;
        if (dist[r][s] <= bd) {
          bd = dist[r][s];
          br = r;
          bs = s;
        }
      }
    }
    if (br < 0) break;
    rUsed[br] = true;
    sUsed[bs] = true;
    rep.pairs.emplace_back(br, bs);
    rep.worst = std::max(rep.worst, bd);
  }
  for (int r = 0; r < R; ++r)
    if (!rUsed[r]) rep.unmatched_records.push_back(r);
  for (int s = 0; s < S; ++s)
    if (!sUsed[s]) rep.unmatched_solutions.push_back(s);
  return rep;
}

}  // namespace mastert

#endif  // MASTERT_QCSOLVER_HPP
