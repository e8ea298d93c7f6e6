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
#ifndef MASTERT_RS_HPP
#define MASTERT_RS_HPP

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mastert/spinchain.hpp"
#include "mastert/types.hpp"
#include "mastert/upoly.hpp"

namespace mastert {

// Phase point of the rational relativistic many-body system: coordinates q_i
// and velocities v_i.
struct RSPhase {
  std::vector<cplx> q;
  std::vector<cplx> v;

  int size() const { return static_cast<int>(q.size()); }

  void validate() const {
    if (q.size() != v.size()) throw InvalidInputError("RSPhase: q and v sizes differ");
    const int n = size();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const cplx d = q[i] - q[j];
        if (std::abs(d) < kGenericityGap)
          throw NonGenericError("RSPhase: coordinates " + std::to_string(i + 1) + " and " +
                                std::to_string(j + 1) + " coincide");
        if (std::abs(d - 1.0) < kGenericityGap || std::abs(d + 1.0) < kGenericityGap)
          throw NonGenericError("RSPhase: coordinates " + std::to_string(i + 1) + " and " +
                                std::to_string(j + 1) + " at unit separation");
      }
    for (int i = 0; i < n; ++i)
      if (std::abs(v[i]) < kGenericityGap)
        throw NonGenericError("RSPhase: velocity " + std::to_string(i + 1) + " vanishes");
  }
};

// Lax matrix Y_ij = v_i/(q_i - q_j - 1) (diagonal -v_i) and its companions:
// the Cauchy-type kernel Q, the evolution generator T = Ttilde - Y, and the
// force vector W.
struct LaxData {
  Matrix U;       // diag(q)
  Matrix Y;       // Lax matrix
  Matrix Q;       // Q_ij = 1/(q_i - q_j - 1); Y = diag(v) Q entrywise
  Matrix Ttilde;  // pre-subtraction generator
  Matrix T;       // Ttilde - Y
  Vector W;       // forces: qddot = -W along the first flow
};

inline LaxData lax(const RSPhase& st) {
  st.validate();
  const int n = st.size();
  const auto& q = st.q;
  const auto& v = st.v;
  LaxData d;
  d.U = Matrix::Zero(n, n);
  d.Y = Matrix::Zero(n, n);
  d.Q = Matrix::Zero(n, n);
  d.Ttilde = Matrix::Zero(n, n);
  d.W = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    d.U(i, i) = q[i];
    for (int j = 0; j < n; ++j) {
      d.Q(i, j) = 1.0 / (q[i] - q[j] - 1.0);
      d.Y(i, j) = v[i] * d.Q(i, j);
    }
    cplx diag = 0.0;
    for (int k = 0; k < n; ++k) {
      if (k != i) diag += v[k] / (q[i] - q[k]);
      diag -= v[k] / (q[i] - q[k] + 1.0);
    }
    d.Ttilde(i, i) = diag;
    for (int j = 0; j < n; ++j)
      if (j != i) d.Ttilde(i, j) = v[i] / (q[i] - q[j]);
    cplx wi = 0.0;
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      const cplx dq = q[i] - q[k];
      wi += 2.0 * v[i] * v[k] / (dq * (dq * dq - 1.0));
    }
    d.W(i) = wi;
  }
  d.T = d.Ttilde - d.Y;
  return d;
}

// Canonical momenta conjugate to q: vhat_i = -log(-v_i) + sum_{k!=i}
// log((q_i-q_k+1)/(q_i-q_k)).  All logarithms principal; the branch integers
// actually used (all zero here) are recorded so flows can carry continuity
// bookkeeping explicitly.
struct Momenta {
  std::vector<cplx> vhat;
  std::vector<int> branch;  // winding added to the principal log, per particle
};

inline Momenta momenta(const RSPhase& st) {
  st.validate();
  const int n = st.size();
  Momenta out;
  out.vhat.resize(n);
  out.branch.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    cplx acc = -std::log(-st.v[i]);
    for (int k = 0; k < n; ++k)
      if (k != i) acc += std::log((st.q[i] - st.q[k] + 1.0) / (st.q[i] - st.q[k]));
    out.vhat[i] = acc;
  }
  return out;
}

inline std::vector<cplx> velocities(const std::vector<cplx>& q, const std::vector<cplx>& vhat) {
  const int n = static_cast<int>(q.size());
  std::vector<cplx> v(n);
  for (int i = 0; i < n; ++i) {
    cplx prod = 1.0;
    for (int k = 0; k < n; ++k)
      if (k != i) prod *= (q[i] - q[k] + 1.0) / (q[i] - q[k]);
    v[i] = -std::exp(-vhat[i]) * prod;
  }
  return v;
}

namespace detail {

// Gradient matrix A^{(i)} of the Lax matrix under a shift of coordinate q_i at
// fixed momenta: A = v_i^{-1}(Y E_ii T' - T' E_ii Y) - sum_{l!=i}
// (1/(q_i-q_l+1) - 1/(q_i-q_l)) (E_ii - E_ll) Y, with T' the off-diagonal part
// of Ttilde.  Satisfies -A^{(i)} = d_{u_i} Y + [C^{(i)}, Y].
inline Matrix grad_matrix(const std::vector<cplx>& q, const std::vector<cplx>& v, const Matrix& Y,
                          const Matrix& Ttilde, int i) {
  const int n = static_cast<int>(q.size());
  Matrix Tp = Ttilde;
  Tp.diagonal().setZero();
  Matrix A = (Y.col(i) * Tp.row(i) - Tp.col(i) * Y.row(i)) / v[i];
  for (int l = 0; l < n; ++l) {
    if (l == i) continue;
    const cplx coef = 1.0 / (q[i] - q[l] + 1.0) - 1.0 / (q[i] - q[l]);
    A.row(i) -= coef * Y.row(i);
    A.row(l) += coef * Y.row(l);
  }
  return A;
}

// Canonical partial derivative of Y with respect to q_i at fixed momenta
// (velocities respond through the product formula), used to test grad_matrix.
inline Matrix dY_dqi(const std::vector<cplx>& q, const std::vector<cplx>& v, int i) {
  const int n = static_cast<int>(q.size());
  std::vector<cplx> dlogv(n, cplx(0.0));
  for (int j = 0; j < n; ++j) {
    if (j == i) {
      for (int l = 0; l < n; ++l)
        if (l != i) dlogv[j] += 1.0 / (q[i] - q[l] + 1.0) - 1.0 / (q[i] - q[l]);
    } else {
      dlogv[j] = -1.0 / (q[j] - q[i] + 1.0) + 1.0 / (q[j] - q[i]);
    }
  }
  Matrix dY = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const cplx den = q[j] - q[k] - 1.0;
      dY(j, k) = v[j] * dlogv[j] / den;
      const double del = (j == i ? 1.0 : 0.0) - (k == i ? 1.0 : 0.0);
      if (del != 0.0) dY(j, k) -= v[j] * del / (den * den);
    }
  return dY;
}

// Diagonal conjugation generator C^{(i)} accompanying grad_matrix.
inline Matrix conj_matrix(const std::vector<cplx>& q, int i) {
  const int n = static_cast<int>(q.size());
  Matrix C = Matrix::Zero(n, n);
  for (int l = 0; l < n; ++l) {
    C(l, l) = 1.0 / (q[l] - q[i] + 1.0);
    if (l != i) C(l, l) -= 1.0 / (q[l] - q[i]);
  }
  return C;
}

// Time derivative of (q, vhat) under the m-th flow with Hamiltonian tr Y^m:
// dq_i = -m (Y^m)_ii, dvhat_i = m tr(A^{(i)} Y^{m-1}).
inline void flow_rhs(int m, const std::vector<cplx>& q, const std::vector<cplx>& vhat,
                     std::vector<cplx>& dq, std::vector<cplx>& dvh) {
  const int n = static_cast<int>(q.size());
  RSPhase st;
  st.q = q;
  st.v = velocities(q, vhat);
  LaxData d = lax(st);
  Matrix Ym1 = Matrix::Identity(n, n);
  for (int r = 1; r < m; ++r) Ym1 = Ym1 * d.Y;
  Matrix Ym = Ym1 * d.Y;
  dq.resize(n);
  dvh.resize(n);
  for (int i = 0; i < n; ++i) dq[i] = -static_cast<double>(m) * Ym(i, i);
  for (int i = 0; i < n; ++i) {
    Matrix A = grad_matrix(q, st.v, d.Y, d.Ttilde, i);
    dvh[i] = static_cast<double>(m) * (A * Ym1).trace();
  }
}

}  // namespace detail

struct StepControl {
  double tol = 1e-10;      // local truncation error per step (embedded pair)
  double h_init = 1e-2;
  double h_min = 1e-11;
  double min_gap = 1e-6;   // abort when a genericity gap falls below this
  long max_steps = 500000;
};

// Integrate the m-th flow for (complex) time t, propagating the canonical
// pair (q, vhat) with an embedded Cash-Karp 4(5) pair and returning the phase
// point (q, v).  Near-collisions (coinciding or unit-separated coordinates,
// vanishing velocities) abort with a closest-approach report.
inline RSPhase flow(const RSPhase& start, int m, cplx t, const StepControl& ctl = StepControl()) {
  if (m < 1) throw InvalidInputError("flow: m must be >= 1");
  start.validate();
  const int n = start.size();
  if (std::abs(t) == 0.0) return start;
  const cplx dir = t / std::abs(t);
  const double send = std::abs(t);

  // State y = (q, vhat) as one complex vector.
  std::vector<cplx> q = start.q;
  std::vector<cplx> vh = momenta(start).vhat;

  auto deriv = [&](const std::vector<cplx>& qq, const std::vector<cplx>& vv,
                   std::vector<cplx>& dq, std::vector<cplx>& dvh) {
    detail::flow_rhs(m, qq, vv, dq, dvh);
    for (auto& x : dq) x *= dir;
    for (auto& x : dvh) x *= dir;
  };

  // Cash-Karp tableau.
  static const double A21 = 1.0 / 5;
  static const double A31 = 3.0 / 40, A32 = 9.0 / 40;
  static const double A41 = 3.0 / 10, A42 = -9.0 / 10, A43 = 6.0 / 5;
  static const double A51 = -11.0 / 54, A52 = 5.0 / 2, A53 = -70.0 / 27, A54 = 35.0 / 27;
  static const double A61 = 1631.0 / 55296, A62 = 175.0 / 512, A63 = 575.0 / 13824,
                      A64 = 44275.0 / 110592, A65 = 253.0 / 4096;
  static const double B1 = 37.0 / 378, B3 = 250.0 / 621, B4 = 125.0 / 594, B6 = 512.0 / 1771;
  static const double E1 = 37.0 / 378 - 2825.0 / 27648, E3 = 250.0 / 621 - 18575.0 / 48384,
                      E4 = 125.0 / 594 - 13525.0 / 55296, E5 = -277.0 / 14336,
                      E6 = 512.0 / 1771 - 1.0 / 4;

  double closest = 1e300;
  std::string closestWhat;
  double closestAt = 0.0;
  auto monitor = [&](const std::vector<cplx>& qq, const std::vector<cplx>& vv, double s) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const cplx d = qq[i] - qq[j];
        const double g0 = std::abs(d), gp = std::abs(d - 1.0), gm = std::abs(d + 1.0);
        if (g0 < closest) {
          closest = g0;
          closestWhat = "|q_" + std::to_string(i + 1) + " - q_" + std::to_string(j + 1) + "|";
          closestAt = s;
        }
        if (gp < closest) {
          closest = gp;
          closestWhat = "|q_" + std::to_string(i + 1) + " - q_" + std::to_string(j + 1) + " - 1|";
          closestAt = s;
        }
        if (gm < closest) {
          closest = gm;
          closestWhat = "|q_" + std::to_string(i + 1) + " - q_" + std::to_string(j + 1) + " + 1|";
          closestAt = s;
        }
      }
    for (int i = 0; i < n; ++i)
      if (std::abs(vv[i]) < closest) {
        closest = std::abs(vv[i]);
        closestWhat = "|v_" + std::to_string(i + 1) + "|";
        closestAt = s;
      }
    if (closest < ctl.min_gap)
      throw NonGenericError("flow: trajectory left the generic region: closest approach " +
                            closestWhat + " = " + std::to_string(closest) + " at |t| = " +
                            std::to_string(closestAt));
  };

  double s = 0.0;
  double h = std::min(ctl.h_init, send);
  std::vector<cplx> k1q(n), k1v(n), k2q(n), k2v(n), k3q(n), k3v(n), k4q(n), k4v(n), k5q(n),
      k5v(n), k6q(n), k6v(n), tq(n), tv(n);
  for (long step = 0; step < ctl.max_steps && s < send; ++step) {
    if (s + h > send) h = send - s;
    deriv(q, vh, k1q, k1v);
    auto at = [&](double c1, double c2, double c3, double c4, double c5) {
      for (int i = 0; i < n; ++i) {
        tq[i] = q[i] + h * (c1 * k1q[i] + c2 * k2q[i] + c3 * k3q[i] + c4 * k4q[i] + c5 * k5q[i]);
        tv[i] = vh[i] + h * (c1 * k1v[i] + c2 * k2v[i] + c3 * k3v[i] + c4 * k4v[i] + c5 * k5v[i]);
      }
    };
    try {
      at(A21, 0, 0, 0, 0);
      deriv(tq, tv, k2q, k2v);
      at(A31, A32, 0, 0, 0);
      deriv(tq, tv, k3q, k3v);
      at(A41, A42, A43, 0, 0);
      deriv(tq, tv, k4q, k4v);
      at(A51, A52, A53, A54, 0);
      deriv(tq, tv, k5q, k5v);
      at(A61, A62, A63, A64, A65);
      deriv(tq, tv, k6q, k6v);
    } catch (const NonGenericError&) {
      // A trial stage stepped outside the generic region: shrink and retry.
      h *= 0.25;
      if (h < ctl.h_min)
        throw NonGenericError("flow: step size underflow while avoiding a singular region near |t| = " +
                              std::to_string(s));
      continue;
    }
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      const cplx eq = h * (E1 * k1q[i] + E3 * k3q[i] + E4 * k4q[i] + E5 * k5q[i] + E6 * k6q[i]);
      const cplx ev = h * (E1 * k1v[i] + E3 * k3v[i] + E4 * k4v[i] + E5 * k5v[i] + E6 * k6v[i]);
      err = std::max({err, std::abs(eq), std::abs(ev)});
    }
    if (err <= ctl.tol) {
      for (int i = 0; i < n; ++i) {
        q[i] += h * (B1 * k1q[i] + B3 * k3q[i] + B4 * k4q[i] + B6 * k6q[i]);
        vh[i] += h * (B1 * k1v[i] + B3 * k3v[i] + B4 * k4v[i] + B6 * k6v[i]);
      }
      s += h;
      monitor(q, velocities(q, vh), s);
      if (s >= send) break;
    }
    const double fac = (err > 0.0) ? 0.9 * std::pow(ctl.tol / err, 0.2) : 5.0;
    h *= std::min(5.0, std::max(0.2, fac));
    if (h < ctl.h_min)
      throw NonGenericError("flow: step size underflow (local error cannot reach tolerance) at |t| = " +
                            std::to_string(s));
  }
  if (s < send) throw NonGenericError("flow: step budget exhausted before reaching t");

  RSPhase out;
  out.q = q;
  out.v = velocities(q, vh);
  return out;
}

// Finite-difference and algebraic consistency of the Lax representation at a
// phase point: dY/dt from two short integrations against [T, Y], plus the
// closed-form identities the evolution generator satisfies.
struct LaxResidualReport {
  double lax_fd = 0.0;    // ||dY/dt - [T,Y]||_max, central difference step 1e-5
  double m_eq_wq = 0.0;   // ||diag(v)(dQ/dt + QT - diag(v)^{-1} T diag(v) Q) - diag(W) Q||
  double force_sum = 0.0; // ||T v + W||_max
  double left_null = 0.0; // ||1^t T||_max
  double grad_id = 0.0;   // max_i ||A^{(i)} + d_{q_i}Y + [C^{(i)}, Y]||_max

  double value() const {
    return std::max({lax_fd, m_eq_wq, force_sum, left_null, grad_id});
  }
};

inline LaxResidualReport lax_residual(const RSPhase& st, int m = 1) {
  st.validate();
  const int n = st.size();
  LaxResidualReport rep;
  const double h = 1e-5;
  StepControl ctl;
  ctl.tol = 1e-12;
  const RSPhase plus = flow(st, m, cplx(h), ctl);
  const RSPhase minus = flow(st, m, cplx(-h), ctl);
  const LaxData d = lax(st);
  const Matrix Yd = (lax(plus).Y - lax(minus).Y) / (2.0 * h);
  rep.lax_fd = (Yd - (d.T * d.Y - d.Y * d.T)).cwiseAbs().maxCoeff();

  Matrix Qd = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const cplx den = st.q[i] - st.q[j] - 1.0;
      Qd(i, j) = -(st.v[i] - st.v[j]) / (den * den);
    }
  Matrix Ud = Matrix::Zero(n, n);
  Matrix Udinv = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    Ud(i, i) = st.v[i];
    Udinv(i, i) = 1.0 / st.v[i];
  }
  const Matrix M = Ud * (Qd + d.Q * d.T - Udinv * d.T * Ud * d.Q);
  Matrix WQ = d.Q;
  for (int i = 0; i < n; ++i) WQ.row(i) *= d.W(i);
  rep.m_eq_wq = (M - WQ).cwiseAbs().maxCoeff();

  Vector vvec = Vector::Zero(n);
  for (int i = 0; i < n; ++i) vvec(i) = st.v[i];
  rep.force_sum = (d.T * vvec + d.W).cwiseAbs().maxCoeff();
  rep.left_null = (Vector::Ones(n).transpose() * d.T).cwiseAbs().maxCoeff();

  for (int i = 0; i < n; ++i) {
    const Matrix A = detail::grad_matrix(st.q, st.v, d.Y, d.Ttilde, i);
    const Matrix dY = detail::dY_dqi(st.q, st.v, i);
    const Matrix C = detail::conj_matrix(st.q, i);
    rep.grad_id = std::max(rep.grad_id, (A + dY + C * d.Y - d.Y * C).cwiseAbs().maxCoeff());
  }
  return rep;
}

// Lax matrix built from one quantum eigenstate: diagonal H_i, off-diagonal
// H_i/(u_j - u_i + 1).  Equals lax({q = u, v = -H}).Y.
inline Matrix y0_matrix(const std::vector<cplx>& u, const std::vector<cplx>& H) {
  const int n = static_cast<int>(u.size());
  if (static_cast<int>(H.size()) != n) throw InvalidInputError("y0_matrix: H and u sizes differ");
  Matrix Y = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    Y(i, i) = H[i];
    for (int j = 0; j < n; ++j)
      if (j != i) Y(i, j) = H[i] / (u[j] - u[i] + 1.0);
  }
  return Y;
}

inline Matrix y0_from_record(const SpectrumRecord& rec, const SpinChainSpec& spec) {
  return y0_matrix(spec.u, rec.H);
}

// Determinant form of one master-operator eigenvalue:
//   tau(u, t) = exp(sum_k t_k tr g^k) det(uI - U0 + sum_k k t_k Y0^k).
inline cplx tau_det(const SpectrumRecord& rec, const SpinChainSpec& spec, cplx u,
                    const TimesVector& t) {
  const int n = spec.sites();
  const Matrix Y0 = y0_from_record(rec, spec);
  Matrix Arg = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) Arg(i, i) = u - spec.u[i];
  cplx xi = 0.0;
  Matrix Yk = Matrix::Identity(n, n);
  for (std::size_t k = 1; k <= t.size(); ++k) {
    Yk = Yk * Y0;
    if (t[k - 1] == cplx(0.0)) continue;
    cplx trgk = 0.0;
    for (cplx wa : spec.w) trgk += std::pow(wa, static_cast<int>(k));
    xi += t[k - 1] * trgk;
    Arg += static_cast<double>(k) * t[k - 1] * Yk;
  }
  return std::exp(xi) * Arg.determinant();
}

// Stationary wave-function ratio from classical data.  For the direct kind:
//   r(u, z) = det(I - g/z) (1 + 1^t (uI-U0)^{-1} (zI-Y0)^{-1} v0),  v0 = -H,
// and for the adjoint kind:
//   r*(u, z) = (1 - 1^t (zI-Y0)^{-1} (uI-U0)^{-1} v0) / det(I - g/z).
// Each is evaluated both as a resolvent and as a ratio of determinants; the
// two routes must agree to 1e-12 or the state is flagged non-generic.
inline cplx ba_rational(const SpectrumRecord& rec, const SpinChainSpec& spec, cplx u, cplx z,
                        bool adjoint) {
  const int n = spec.sites();
  for (cplx ui : spec.u)
    if (std::abs(u - ui) < kGenericityGap)
      throw NonGenericError("ba_rational: u is a root of the stationary tau polynomial");
  cplx c0 = 1.0;
  for (cplx wa : spec.w) {
    if (adjoint && std::abs(z - wa) < kGenericityGap)
      throw NonGenericError("ba_rational: adjoint kind has a pole at z = w_a");
    c0 *= (1.0 - wa / z);
  }
  const Matrix Y0 = y0_from_record(rec, spec);
  Matrix U0 = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) U0(i, i) = spec.u[i];
  const Matrix Zu = cplx(u) * Matrix::Identity(n, n) - U0;
  const Matrix Zz = cplx(z) * Matrix::Identity(n, n) - Y0;
  Vector v0 = Vector::Zero(n);
  for (int i = 0; i < n; ++i) v0(i) = -rec.H[i];
  const Vector ones = Vector::Ones(n);

  cplx res, det;
  if (!adjoint) {
    const Vector x = Zu.partialPivLu().solve(Zz.partialPivLu().solve(v0));
    res = c0 * (1.0 + (ones.transpose() * x).value());
    det = c0 * (Zu * Zz - Y0).determinant() / (Zu.determinant() * Zz.determinant());
  } else {
    const Vector x = Zz.partialPivLu().solve(Zu.partialPivLu().solve(v0));
    res = (1.0 - (ones.transpose() * x).value()) / c0;
    det = (Zz * Zu + Y0).determinant() / (Zu.determinant() * Zz.determinant()) / c0;
  }
  const double scale = detail::rel_scale(std::abs(res), std::abs(det));
  if (std::abs(res - det) / scale > 1e-12)
    throw NonGenericError("ba_rational: determinant and resolvent forms disagree (" +
                          std::to_string(std::abs(res - det) / scale) + ")");
  return res;
}

// Trajectories of the tau-polynomial roots along the first time: zeros of
// tau(u, t1) are the eigenvalues of U0 - t1 Y0, ordered continuously from
// u_k(0) = spec.u by nearest-neighbor continuation (internally refining the
// path until each hop is unambiguous).  Collisions are reported, not resolved.
struct RootTrajectories {
  std::vector<cplx> t;                   // the requested path
  std::vector<std::vector<cplx>> roots;  // roots[s][k] = u_k at t[s]
  std::vector<std::string> collisions;   // human-readable ambiguity reports
};

inline RootTrajectories track_roots(const SpectrumRecord& rec, const SpinChainSpec& spec,
                                    const std::vector<cplx>& path) {
  const int n = spec.sites();
  const Matrix Y0 = y0_from_record(rec, spec);
  Matrix U0 = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) U0(i, i) = spec.u[i];

  auto roots_at = [&](cplx t1) {
    Eigen::ComplexEigenSolver<Matrix> es(U0 - t1 * Y0, false);
    std::vector<cplx> r(n);
    for (int i = 0; i < n; ++i) r[i] = es.eigenvalues()(i);
    return r;
  };
  auto min_sep = [&](const std::vector<cplx>& r) {
    double m = 1e300;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) m = std::min(m, std::abs(r[i] - r[j]));
    return m;
  };
  // Greedy nearest matching of new roots onto the current ordering; returns
  // the worst hop distance so callers can decide whether the hop was safe.
  auto match = [&](const std::vector<cplx>& cur, std::vector<cplx> nxt, double& worstHop) {
    std::vector<cplx> out(n);
    std::vector<bool> used(n, false);
    worstHop = 0.0;
    for (int i = 0; i < n; ++i) {
      int best = -1;
      double bd = 1e300;
      for (int j = 0; j < n; ++j) {
        if (used[j]) continue;
        const double d = std::abs(nxt[j] - cur[i]);
        if (d < bd) {
          bd = d;
          best = j;
        }
      }
      used[best] = true;
      out[i] = nxt[best];
      worstHop = std::max(worstHop, bd);
    }
    return out;
  };

  RootTrajectories out;
  out.t = path;
  std::vector<cplx> cur = spec.u;  // exact roots at t1 = 0
  cplx tcur = 0.0;
  for (cplx target : path) {
    // walk from tcur to target, halving the hop while matching is ambiguous
    int guard = 0;
    while (std::abs(target - tcur) > 0.0) {
      cplx step = target - tcur;
      for (;;) {
        std::vector<cplx> nxt = roots_at(tcur + step);
        const double sep = min_sep(nxt);
        if (sep < 1e-8)
          out.collisions.push_back("root collision near t1 = " + std::to_string((tcur + step).real()) +
                                   (std::abs((tcur + step).imag()) > 0 ? " (+imag)" : "") +
                                   ": min separation " + std::to_string(sep));
        double hop = 0.0;
        std::vector<cplx> matched = match(cur, nxt, hop);
        if (hop <= 0.45 * sep || std::abs(step) < 1e-12 || ++guard > 64) {
          if (hop > 0.45 * sep)
            out.collisions.push_back("branch ambiguity near t1 = " +
                                     std::to_string((tcur + step).real()) + ": hop " +
                                     std::to_string(hop) + " vs separation " + std::to_string(sep));
          cur = std::move(matched);
          tcur += step;
          break;
        }
        step *= 0.5;  // ambiguous hop: refine
      }
    }
    out.roots.push_back(cur);
  }
  return out;
}

// ---- coefficientwise comparison of the determinant tau against the Schur
// ---- expansion, through total degree 4 in the times.

namespace detail {

// Sparse polynomials in t_1..t_4, truncated at total weight sum(k * c_k) <= 4.
constexpr int kTWeightMax = 4;
using TMono = std::array<int, 4>;
using TPoly = std::map<TMono, cplx>;

inline int tmono_weight(const TMono& m) {
  int w = 0;
  for (int k = 0; k < 4; ++k) w += (k + 1) * m[k];
  return w;
}

inline TPoly tp_mul(const TPoly& f, const TPoly& g) {
  TPoly out;
  for (const auto& [m1, c1] : f)
    for (const auto& [m2, c2] : g) {
      TMono m;
      for (int k = 0; k < 4; ++k) m[k] = m1[k] + m2[k];
      if (tmono_weight(m) > kTWeightMax) continue;
      out[m] += c1 * c2;
    }
  return out;
}

inline TPoly tp_exp(const TPoly& f) {
  TPoly out{{TMono{0, 0, 0, 0}, cplx(1.0)}};
  TPoly term = out;
  for (int r = 1; r <= kTWeightMax; ++r) {
    term = tp_mul(term, f);
    for (auto& [m, c] : term) c /= static_cast<double>(r);
    for (const auto& [m, c] : term) out[m] += c;
  }
  return out;
}

// h_k as an exact polynomial in the times: sum over partitions mu of k of
// prod_j t_j^{c_j} / c_j!.
inline TPoly h_tpoly(int k) {
  TPoly out;
  if (k == 0) {
    out[TMono{0, 0, 0, 0}] = 1.0;
    return out;
  }
  if (k > kTWeightMax) return out;
  std::function<void(int, int, TMono&)> rec = [&](int rem, int maxpart, TMono& counts) {
    if (rem == 0) {
      double coef = 1.0;
      for (int c : counts)
        for (int r = 2; r <= c; ++r) coef /= r;
      out[counts] += coef;
      return;
    }
    for (int p = std::min(rem, maxpart); p >= 1; --p) {
      counts[p - 1] += 1;
      rec(rem - p, p, counts);
      counts[p - 1] -= 1;
    }
  };
  TMono counts{0, 0, 0, 0};
  rec(k, std::min(k, kTWeightMax), counts);
  return out;
}

inline TPoly schur_tpoly(const Partition& lam) {
  const int l = part_rows(lam);
  if (l == 0) return TPoly{{TMono{0, 0, 0, 0}, cplx(1.0)}};
  std::vector<std::vector<TPoly>> M(l, std::vector<TPoly>(l));
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) {
      const int idx = lam[i] - (i + 1) + (j + 1);
      M[i][j] = (idx >= 0) ? h_tpoly(idx) : TPoly{};
    }
  std::function<TPoly(const std::vector<std::vector<TPoly>>&)> det =
      [&](const std::vector<std::vector<TPoly>>& rows) -> TPoly {
    const std::size_t m = rows.size();
    if (m == 1) return rows[0][0];
    TPoly acc;
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<std::vector<TPoly>> minor;
      for (std::size_t r = 1; r < m; ++r) {
        std::vector<TPoly> row;
        for (std::size_t c = 0; c < m; ++c)
          if (c != j) row.push_back(rows[r][c]);
        minor.push_back(std::move(row));
      }
      TPoly term = tp_mul(rows[0][j], det(minor));
      const double sgn = (j % 2 == 0) ? 1.0 : -1.0;
      for (const auto& [mo, c] : term) acc[mo] += sgn * c;
    }
    return acc;
  };
  return det(M);
}

}  // namespace detail

// Maximum relative mismatch, over every monomial in t_1..t_4 of total weight
// <= 4 and every power of u, between the determinant form of tau and its
// Schur expansion.  Requires the series truncation K >= 4.
inline double det_tau_coefficient_residual(const SpectrumRecord& rec, const SpinChainSpec& spec) {
  using detail::TMono;
  using detail::TPoly;
  const int n = spec.sites();
  if (n == 0)
    throw InvalidInputError(
        "det_tau_coefficient_residual: the determinant correspondence requires at least one site");
  const TauSeries& tau = rec.tau;
  if (tau.K < detail::kTWeightMax)
    throw InvalidInputError("det_tau_coefficient_residual: truncation K must be >= 4");

  // Right side: det(uI - U0 + sum_k k t_k Y0^k) with entries that are
  // u-polynomials over t-monomials, expanded by Laplace, then the exponential
  // prefactor exp(sum_k t_k tr g^k).
  const Matrix Y0 = y0_from_record(rec, spec);
  std::vector<Matrix> Ypow(detail::kTWeightMax + 1, Matrix::Identity(n, n));
  for (int k = 1; k <= detail::kTWeightMax; ++k) Ypow[k] = Ypow[k - 1] * Y0;

  using PEntry = std::map<TMono, UPoly>;
  std::vector<std::vector<PEntry>> ent(n, std::vector<PEntry>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      PEntry d;
      UPoly base(2, cplx(0.0));
      if (i == j) {
        base[1] = 1.0;
        base[0] = -spec.u[i];
        d[TMono{0, 0, 0, 0}] = base;
      }
      for (int k = 1; k <= detail::kTWeightMax; ++k) {
        TMono mo{0, 0, 0, 0};
        mo[k - 1] = 1;
        d[mo] = UPoly{static_cast<double>(k) * Ypow[k](i, j)};
      }
      ent[i][j] = std::move(d);
    }

  auto pmul = [&](const PEntry& f, const PEntry& g) {
    PEntry out;
    for (const auto& [m1, c1] : f)
      for (const auto& [m2, c2] : g) {
        TMono m;
        for (int k = 0; k < 4; ++k) m[k] = m1[k] + m2[k];
        if (detail::tmono_weight(m) > detail::kTWeightMax) continue;
        UPoly pr = upoly_mul(c1, c2);
        if (pr.size() > static_cast<std::size_t>(n + 1)) pr.resize(n + 1);
        auto it = out.find(m);
        if (it == out.end())
          out[m] = std::move(pr);
        else
          it->second = upoly_add(it->second, pr);
      }
    return out;
  };
  std::function<PEntry(const std::vector<std::vector<PEntry>>&)> pdet =
      [&](const std::vector<std::vector<PEntry>>& rows) -> PEntry {
    const std::size_t m = rows.size();
    if (m == 1) return rows[0][0];
    PEntry acc;
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<std::vector<PEntry>> minor;
      for (std::size_t r = 1; r < m; ++r) {
        std::vector<PEntry> row;
        for (std::size_t c = 0; c < m; ++c)
          if (c != j) row.push_back(rows[r][c]);
        minor.push_back(std::move(row));
      }
      PEntry term = pmul(rows[0][j], pdet(minor));
      const double sgn = (j % 2 == 0) ? 1.0 : -1.0;
      for (auto& [mo, arr] : term) {
        UPoly scaled = upoly_scale(arr, sgn);
        auto it = acc.find(mo);
        if (it == acc.end())
          acc[mo] = std::move(scaled);
        else
          it->second = upoly_add(it->second, scaled);
      }
    }
    return acc;
  };

  PEntry rhs = pdet(ent);
  TPoly expArg;
  for (int k = 1; k <= detail::kTWeightMax; ++k) {
    cplx trgk = 0.0;
    for (cplx wa : spec.w) trgk += std::pow(wa, k);
    TMono mo{0, 0, 0, 0};
    mo[k - 1] = 1;
    expArg[mo] = trgk;
  }
  TPoly expf = detail::tp_exp(expArg);
  PEntry rhsFull;
  for (const auto& [m1, c1] : rhs)
    for (const auto& [m2, c2] : expf) {
      TMono m;
      for (int k = 0; k < 4; ++k) m[k] = m1[k] + m2[k];
      if (detail::tmono_weight(m) > detail::kTWeightMax) continue;
      UPoly scaled = upoly_scale(c1, c2);
      auto it = rhsFull.find(m);
      if (it == rhsFull.end())
        rhsFull[m] = std::move(scaled);
      else
        it->second = upoly_add(it->second, scaled);
    }

  // Left side: sum_lam tau_lam(u) s_lam(t) collected per monomial.
  PEntry lhs;
  for (std::size_t l = 0; l < tau.lams.size(); ++l) {
    if (part_size(tau.lams[l]) > detail::kTWeightMax) continue;
    TPoly sp = detail::schur_tpoly(tau.lams[l]);
    for (const auto& [mo, c] : sp) {
      UPoly scaled = upoly_scale(tau.coeffs[l], c);
      auto it = lhs.find(mo);
      if (it == lhs.end())
        lhs[mo] = std::move(scaled);
      else
        it->second = upoly_add(it->second, scaled);
    }
  }

  double err = 0.0;
  auto compare = [&](const PEntry& a, const PEntry& b) {
    for (const auto& [mo, arr] : a) {
      UPoly other;
      auto it = b.find(mo);
      if (it != b.end()) other = it->second;
      other.resize(std::max(other.size(), arr.size()), cplx(0.0));
      UPoly mine = arr;
      mine.resize(other.size(), cplx(0.0));
      double scale = 1e-12;
      for (std::size_t d = 0; d < mine.size(); ++d)
        scale = std::max({scale, std::abs(mine[d]), std::abs(other[d])});
      for (std::size_t d = 0; d < mine.size(); ++d)
        err = std::max(err, std::abs(mine[d] - other[d]) / scale);
    }
  };
  compare(lhs, rhsFull);
  compare(rhsFull, lhs);
  return err;
}

}  // namespace mastert

#endif  // MASTERT_RS_HPP
