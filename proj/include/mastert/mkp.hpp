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
#ifndef MASTERT_MKP_HPP
#define MASTERT_MKP_HPP

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "mastert/coderiv.hpp"
#include "mastert/rs.hpp"
#include "mastert/spinchain.hpp"
#include "mastert/symfun.hpp"
#include "mastert/types.hpp"
#include "mastert/upoly.hpp"

namespace mastert {

// Value of a truncated tau-function evaluation.  `exact` marks evaluations
// where the truncated sum provably equals the full series: zero base times
// with p downward shifts terminate once p * N <= Kcut (the shifted Schur
// values vanish outside a p-column strip of at most N rows).
struct TauValue {
  cplx value{0.0};
  bool exact = false;
};

inline TauValue tau_eval(const TauSeries& tau, cplx u, const ShiftedTimes& st, int Kcut = -1) {
  if (Kcut < 0) Kcut = tau.K;
  if (Kcut > tau.K)
    throw InvalidInputError("tau_eval: requested truncation exceeds the stored series");
  // One Hurwitz-series evaluation up to the largest degree any Jacobi-Trudi
  // determinant below can touch, then per-partition determinants.
  const int D = Kcut + tau.N;
  const std::vector<cplx> h = h_series(st, D);
  TauValue out;
  for (std::size_t l = 0; l < tau.lams.size(); ++l) {
    const Partition& lam = tau.lams[l];
    if (part_size(lam) > Kcut) continue;
    const int rows = part_rows(lam);
    cplx s;
    if (rows == 0) {
      s = 1.0;
    } else {
      std::vector<std::vector<cplx>> M(rows, std::vector<cplx>(rows, cplx(0.0)));
      for (int i = 0; i < rows; ++i)
        for (int j = 0; j < rows; ++j) {
          const int idx = lam[i] - (i + 1) + (j + 1);
          M[i][j] = (idx >= 0 && idx <= D) ? h[idx] : cplx(0.0);
        }
      s = detail::det_small(M);
    }
    if (s != cplx(0.0)) out.value += upoly_eval(tau.coeffs[l], u) * s;
  }
  const int p = static_cast<int>(st.shifts.size());
  out.exact = st.base_is_zero() && st.all_shifts_minus() && p * tau.N <= Kcut;
  return out;
}

// Raw bilinear combination plus the size of its largest term, so callers can
// normalize per evaluation or across a whole sample.
struct BilinearParts {
  cplx sum{0.0};
  double scale = 0.0;
};

// Three-term bilinear residual at a common spectral argument: with
// tau_i = tau(u, t - [z_i]) and tau_jk doubly shifted,
//   (z2-z3) tau_1 tau_23 + (z3-z1) tau_2 tau_31 + (z1-z2) tau_3 tau_12 = 0.
inline BilinearParts hirota3_parts(const TauSeries& tau, cplx u, const TimesVector& t, cplx z1,
                                   cplx z2, cplx z3, int Kcut = -1) {
  const cplx zs[3] = {z1, z2, z3};
  for (int i = 0; i < 3; ++i) {
    if (std::abs(zs[i]) < kGenericityGap) throw InvalidInputError("hirota3: shift parameter is zero");
    for (int j = i + 1; j < 3; ++j)
      if (std::abs(zs[i] - zs[j]) < kGenericityGap)
        throw NonGenericError("hirota3: coincident shift parameters");
  }
  auto tv = [&](std::initializer_list<cplx> shifts) {
    ShiftedTimes st;
    st.base = t;
    for (cplx z : shifts) st.minus(z);
    return tau_eval(tau, u, st, Kcut).value;
  };
  const cplx t1 = tv({z1}), t2 = tv({z2}), t3 = tv({z3});
  const cplx t23 = tv({z2, z3}), t31 = tv({z3, z1}), t12 = tv({z1, z2});
  const cplx a = (z2 - z3) * t1 * t23;
  const cplx b = (z3 - z1) * t2 * t31;
  const cplx c = (z1 - z2) * t3 * t12;
  BilinearParts out;
  out.sum = a + b + c;
  out.scale = std::max({std::abs(a), std::abs(b), std::abs(c), 1e-300});
  return out;
}

// The same combination divided by its largest term, so a clean identity sits
// at machine scale regardless of the tau magnitudes.
inline cplx hirota3(const TauSeries& tau, cplx u, const TimesVector& t, cplx z1, cplx z2, cplx z3,
                    int Kcut = -1) {
  const BilinearParts p = hirota3_parts(tau, u, t, z1, z2, z3, Kcut);
  return p.sum / p.scale;
}

// Shifted three-term bilinear residual coupling u and u+1:
//   z2 tau(u+1, t-[z2]) tau(u, t-[z1]) - z1 tau(u+1, t-[z1]) tau(u, t-[z2])
//     + (z1-z2) tau(u+1, t) tau(u, t-[z1]-[z2]) = 0.
inline BilinearParts hirota3_shifted_parts(const TauSeries& tau, cplx u, const TimesVector& t,
                                           cplx z1, cplx z2, int Kcut = -1) {
  if (std::abs(z1) < kGenericityGap || std::abs(z2) < kGenericityGap)
    throw InvalidInputError("hirota3_shifted: shift parameter is zero");
  if (std::abs(z1 - z2) < kGenericityGap)
    throw NonGenericError("hirota3_shifted: coincident shift parameters");
  auto tv = [&](cplx at, std::initializer_list<cplx> shifts) {
    ShiftedTimes st;
    st.base = t;
    for (cplx z : shifts) st.minus(z);
    return tau_eval(tau, at, st, Kcut).value;
  };
  const cplx a = z2 * tv(u + 1.0, {z2}) * tv(u, {z1});
  const cplx b = -z1 * tv(u + 1.0, {z1}) * tv(u, {z2});
  const cplx c = (z1 - z2) * tv(u + 1.0, {}) * tv(u, {z1, z2});
  BilinearParts out;
  out.sum = a + b + c;
  out.scale = std::max({std::abs(a), std::abs(b), std::abs(c), 1e-300});
  return out;
}

inline cplx hirota3_shifted(const TauSeries& tau, cplx u, const TimesVector& t, cplx z1, cplx z2,
                            int Kcut = -1) {
  const BilinearParts p = hirota3_shifted_parts(tau, u, t, z1, z2, Kcut);
  return p.sum / p.scale;
}

// Baker-Akhiezer value split into its multivalued prefactor, exponential
// phase and single-valued tau ratio: psi = z^exponent * exp(xi) * tau_ratio.
// The pieces are kept separate because z^exponent with complex exponent is
// branch-dependent; identity checks consume the parts, never value().
struct BAValue {
  cplx z{0.0};
  cplx exponent{0.0};   // u - N for the direct kind, -(u - N) for the adjoint
  cplx xi{0.0};         // +/- sum_k t_k z^k, sign already folded in
  cplx tau_ratio{0.0};  // tau(u, t -/+ [z]) / tau(u, t)
  bool exact = false;   // whether tau_ratio came from terminating sums

  cplx value() const { return std::pow(z, exponent) * std::exp(xi) * tau_ratio; }
};

inline BAValue ba_eval(const TauSeries& tau, cplx u, const TimesVector& t, cplx z, bool adjoint,
                       int Kcut = -1) {
  if (std::abs(z) < kGenericityGap) throw InvalidInputError("ba_eval: z must be nonzero");
  ShiftedTimes num;
  num.base = t;
  if (adjoint)
    num.plus(z);
  else
    num.minus(z);
  ShiftedTimes den;
  den.base = t;
  const TauValue nv = tau_eval(tau, u, num, Kcut);
  const TauValue dv = tau_eval(tau, u, den, Kcut);
  if (std::abs(dv.value) < 1e-300) throw NonGenericError("ba_eval: tau(u, t) vanishes");
  BAValue out;
  out.z = z;
  out.exponent = adjoint ? -(u - static_cast<double>(tau.N)) : (u - static_cast<double>(tau.N));
  cplx xi = 0.0;
  cplx zk = 1.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    zk *= z;
    xi += t[k] * zk;
  }
  out.xi = adjoint ? -xi : xi;
  out.tau_ratio = nv.value / dv.value;
  out.exact = nv.exact && dv.exact;
  return out;
}

// Residual of the first linear problem the wave function satisfies, written
// entirely in tau data at zero times.  With N(u) = tau(u, -[z]) and
// dN its first-time derivative (a terminating skew sum),
//   z N(u)/tau(u) + (dN(u) tau(u) - N(u) tau_1(u)) / tau(u)^2
//     = z N(u+1)/tau(u+1) + (tau_1(u+1)/tau(u+1) - tau_1(u)/tau(u)) N(u)/tau(u)
// for the direct kind; the adjoint kind couples u and u-1 with reversed
// derivative sign and an upward shift in the times.  Both sides are exact
// polynomials in u for the direct kind; the adjoint kind truncates the upward
// sum, so callers should keep |z| well outside the twist spectrum.
inline double linear_problem_residual(const TauSeries& tau, cplx u, cplx z, bool adjoint = false,
                                      int Kcut = -1) {
  if (std::abs(z) < kGenericityGap)
    throw InvalidInputError("linear_problem_residual: z must be nonzero");
  if (Kcut < 0) Kcut = tau.K;
  if (!tau.has(Partition{}) || !tau.has(Partition{1}))
    throw InvalidInputError("linear_problem_residual: series lacks the first coefficients");
  const UPoly& c_empty = tau.at(Partition{});
  const UPoly& c_one = tau.at(Partition{1});
  auto tau0 = [&](cplx at) { return upoly_eval(c_empty, at); };
  auto tau1 = [&](cplx at) { return upoly_eval(c_one, at); };

  ShiftedTimes st;
  if (adjoint)
    st.plus(z);
  else
    st.minus(z);
  auto bigN = [&](cplx at) { return tau_eval(tau, at, st, Kcut).value; };
  // First-time derivative of the shifted tau: d/dt_1 s_lam(t) = s_{lam/(1)}(t).
  auto dN = [&](cplx at) {
    cplx acc = 0.0;
    for (std::size_t l = 0; l < tau.lams.size(); ++l) {
      if (part_size(tau.lams[l]) > Kcut) continue;
      const cplx s = skew_schur(tau.lams[l], Partition{1}, st);
      if (s != cplx(0.0)) acc += upoly_eval(tau.coeffs[l], at) * s;
    }
    return acc;
  };

  cplx lhs, rhs;
  if (!adjoint) {
    const cplx Nu = bigN(u), tu = tau0(u), tu1 = tau0(u + 1.0);
    lhs = z * Nu / tu + (dN(u) * tu - Nu * tau1(u)) / (tu * tu);
    rhs = z * bigN(u + 1.0) / tu1 + (tau1(u + 1.0) / tu1 - tau1(u) / tu) * Nu / tu;
  } else {
    const cplx Nu = bigN(u), tu = tau0(u), tum = tau0(u - 1.0);
    lhs = z * Nu / tu - (dN(u) * tu - Nu * tau1(u)) / (tu * tu);
    rhs = z * bigN(u - 1.0) / tum + (tau1(u) / tu - tau1(u - 1.0) / tum) * Nu / tu;
  }
  return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-12});
}

// Residual of the pairing relation between hook coefficients of the tau
// series and moments of the classical Lax matrix: for m >= 1,
//   sum_{a=0}^{min(m,N)-1} (-1)^a [ tau_{(m-a,1^a)}(u+1)/tau(u+1)
//                                  - tau_{(m-a,1^a)}(u)/tau(u) ]
//     = alpha_{m-1} - beta_{m-1} - sum_{j=0}^{m-2} alpha_j beta_{m-2-j},
// with alpha_j = 1^t (uI-U0)^{-1} Y0^j v0 and
// beta_j = 1^t Y0^j ((u+1)I-U0)^{-1} v0, v0 = -H.
inline double residue_relation_residual(const TauSeries& tau, cplx u, int m) {
  if (m < 1 || m > tau.K)
    throw InvalidInputError("residue_relation_residual: need 1 <= m <= K");
  auto tau0 = [&](cplx at) { return upoly_eval(tau.at(Partition{}), at); };
  cplx lhs = 0.0;
  for (int a = 0; a < std::min(m, tau.N); ++a) {
    Partition hook;
    hook.push_back(m - a);
    for (int r = 0; r < a; ++r) hook.push_back(1);
    if (!tau.has(hook)) continue;  // vanishing coefficient (too many rows)
    const UPoly& c = tau.at(hook);
    const double sgn = (a % 2 == 0) ? 1.0 : -1.0;
    lhs += sgn * (upoly_eval(c, u + 1.0) / tau0(u + 1.0) - upoly_eval(c, u) / tau0(u));
  }

  const int n = tau.n;
  const Matrix Y0 = y0_matrix(tau.u, tau.H);
  Matrix U0 = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) U0(i, i) = tau.u[i];
  Vector v0 = Vector::Zero(n);
  for (int i = 0; i < n; ++i) v0(i) = -tau.H[i];
  const Vector ones = Vector::Ones(n);
  const Matrix Ru = (cplx(u) * Matrix::Identity(n, n) - U0).inverse();
  const Matrix Ru1 = (cplx(u + 1.0) * Matrix::Identity(n, n) - U0).inverse();
  std::vector<cplx> alpha(m), beta(m);
  Matrix Yj = Matrix::Identity(n, n);
  for (int j = 0; j < m; ++j) {
    alpha[j] = (ones.transpose() * Ru * Yj * v0).value();
    beta[j] = (ones.transpose() * Yj * Ru1 * v0).value();
    Yj = Yj * Y0;
  }
  cplx rhs = alpha[m - 1] - beta[m - 1];
  for (int j = 0; j + 2 <= m; ++j) rhs -= alpha[j] * beta[m - 2 - j];
  return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-12});
}

// z -> 0 degeneration of the shift operators.  The downward side is an exact
// polynomial statement: the deepest column coefficient satisfies
// T_{(1^N)}(u) = det(g) prod_k (u - u_k + 1) I, equivalently per eigenvalue
// tau_{(1^N)}(u) = det(g) tau_0(u+1).  The upward side is rational in z, so
// the limit is reached by two-point Richardson extrapolation of the inverse
// characteristic series operator at small z against
// (-1)^N det(g)^{-1} prod_k (u - 1 - u_k) I.  Returns the relative operator
// deviation (downward: exact; upward: extrapolated, z_base = 1e-4).
inline double fusion_shift_residual(const SpinChainSpec& spec, cplx u, bool upward) {
  spec.validate();
  const int n = spec.sites();
  cplx detg = 1.0;
  for (cplx wa : spec.w) detg *= wa;
  if (!upward) {
    Partition col(spec.N, 1);
    const OpPoly op = transfer_op(ScalarFunctionSpec::character(col), spec.u, spec.w);
    const TensorOperator lhs = oppoly_eval(op, u);
    cplx pref = detg;
    for (cplx uk : spec.u) pref *= (u - uk + 1.0);
    const TensorOperator rhs = pref * TensorOperator::Identity(lhs.rows(), lhs.cols());
    const double scale = std::max(rhs.cwiseAbs().maxCoeff(), 1e-300);
    return (lhs - rhs).cwiseAbs().maxCoeff() / scale;
  }
  const cplx z1 = 1e-4, z2 = 5e-5;
  const TensorOperator f1 =
      oppoly_eval(transfer_op(ScalarFunctionSpec::invdet_shift(z1), spec.u, spec.w), u);
  const TensorOperator f2 =
      oppoly_eval(transfer_op(ScalarFunctionSpec::invdet_shift(z2), spec.u, spec.w), u);
  const TensorOperator extr = 2.0 * f2 - f1;
  cplx pref = (spec.N % 2 == 0 ? 1.0 : -1.0) / detg;
  for (cplx uk : spec.u) pref *= (u - 1.0 - uk);
  const TensorOperator rhs = pref * TensorOperator::Identity(extr.rows(), extr.cols());
  const double scale = std::max(rhs.cwiseAbs().maxCoeff(), 1e-300);
  return (extr - rhs).cwiseAbs().maxCoeff() / scale;
}

// p-th Laurent coefficient of fn about `center` from uniform samples on a
// circle of the given radius (discrete contour integral, default 32 points).
inline cplx laurent_coeff(const std::function<cplx(cplx)>& fn, cplx center, double radius, int p,
                          int samples = 32) {
  cplx acc = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double th = 2.0 * 3.14159265358979323846 * k / samples;
    const cplx w = radius * std::exp(cplx(0.0, th));
    acc += fn(center + w) * std::pow(w, -p);
  }
  return acc / static_cast<double>(samples);
}

}  // namespace mastert

#endif  // MASTERT_MKP_HPP
