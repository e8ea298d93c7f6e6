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
#ifndef MASTERT_SYMFUN_HPP
#define MASTERT_SYMFUN_HPP

#include <algorithm>
#include <functional>
#include <vector>

#include "mastert/types.hpp"

namespace mastert {

// Young diagram: weakly decreasing positive parts; empty vector is the empty
// partition.
using Partition = std::vector<int>;

inline int part_size(const Partition& lam) {
  int s = 0;
  for (int p : lam) s += p;
  return s;
}

inline int part_rows(const Partition& lam) { return static_cast<int>(lam.size()); }

inline bool partition_valid(const Partition& lam) {
  for (std::size_t i = 0; i < lam.size(); ++i) {
    if (lam[i] <= 0) return false;
    if (i + 1 < lam.size() && lam[i] < lam[i + 1]) return false;
  }
  return true;
}

// All partitions with |lambda| <= K and at most maxRows rows, in the fixed
// enumeration order used everywhere (reports, series truncation): graded by
// |lambda|, lexicographically descending within each grade.
inline std::vector<Partition> partitions_up_to(int K, int maxRows) {
  if (K < 0 || maxRows < 1) throw InvalidInputError("partitions_up_to: K >= 0 and maxRows >= 1 required");
  std::vector<Partition> out;
  for (int s = 0; s <= K; ++s) {
    std::vector<Partition> grade;
    Partition pref;
    std::function<void(int, int)> rec = [&](int rem, int maxpart) {
      if (rem == 0) {
        grade.push_back(pref);
        return;
      }
      if (static_cast<int>(pref.size()) >= maxRows) return;
      for (int p = std::min(rem, maxpart); p >= 1; --p) {
        pref.push_back(p);
        rec(rem - p, p);
        pref.pop_back();
      }
    };
    if (s == 0) {
      grade.push_back({});
    } else {
      rec(s, s);
    }
    std::sort(grade.begin(), grade.end(),
              [](const Partition& a, const Partition& b) { return a > b; });  // lex descending
    out.insert(out.end(), grade.begin(), grade.end());
  }
  return out;
}

// Finite vector of time variables t_1..t_Kmax (absent entries are zero).
using TimesVector = std::vector<cplx>;

// Time point t +- [1/z_1] +- [1/z_2] ... : a finite base vector plus a list of
// signed spectral shifts t_k -> t_k +- z^{-k}/k, kept symbolic.  Resolving the
// shifts inside the generating series (never as infinite time vectors) is what
// keeps the bilinear-identity checks exact at t = 0.
struct ShiftedTimes {
  TimesVector base;
  std::vector<std::pair<int, cplx>> shifts;  // (sign in {+1,-1}, z != 0)

  ShiftedTimes() = default;
  explicit ShiftedTimes(TimesVector b) : base(std::move(b)) {}

  ShiftedTimes& minus(cplx z) {
    check_z(z);
    shifts.emplace_back(-1, z);
    return *this;
  }
  ShiftedTimes& plus(cplx z) {
    check_z(z);
    shifts.emplace_back(+1, z);
    return *this;
  }

  bool base_is_zero() const {
    for (cplx t : base)
      if (std::abs(t) != 0.0) return false;
    return true;
  }
  bool all_shifts_minus() const {
    for (const auto& s : shifts)
      if (s.first > 0) return false;
    return true;
  }
  // True iff the h-generating series of this time point terminates, i.e. all
  // evaluations against it are finite sums with no truncation error.
  bool h_series_terminates() const { return base_is_zero() && all_shifts_minus(); }

 private:
  static void check_z(cplx z) {
    if (std::abs(z) == 0.0) throw InvalidInputError("ShiftedTimes: shift with z = 0");
  }
};

// Complete homogeneous polynomials h_0..h_D of the shifted times: coefficients
// of w^k in exp(sum_j t_j w^j) * prod_shifts (1 - w/z)^{+-1}.  A minus shift
// multiplies the series by (1 - w/z); a plus shift divides (geometric series).
inline std::vector<cplx> h_series(const ShiftedTimes& st, int D) {
  std::vector<cplx> series(D + 1, cplx(0.0));
  series[0] = 1.0;
  if (!st.base_is_zero()) {
    // exp of the truncated polynomial P(w) = sum t_j w^j (no constant term).
    std::vector<cplx> P(D + 1, cplx(0.0));
    for (std::size_t j = 1; j <= st.base.size() && static_cast<int>(j) <= D; ++j) P[j] = st.base[j - 1];
    std::vector<cplx> term(D + 1, cplx(0.0));
    term[0] = 1.0;
    double fact = 1.0;
    for (int r = 1; r <= D; ++r) {
      std::vector<cplx> nt(D + 1, cplx(0.0));
      for (int i = 0; i <= D; ++i) {
        if (term[i] == cplx(0.0)) continue;
        for (int j = 1; i + j <= D; ++j) nt[i + j] += term[i] * P[j];
      }
      term = std::move(nt);
      fact *= r;
      for (int i = 0; i <= D; ++i) series[i] += term[i] / fact;
    }
  }
  for (const auto& [sgn, z] : st.shifts) {
    if (sgn < 0) {
      for (int i = D; i >= 1; --i) series[i] -= series[i - 1] / z;
    } else {
      // multiply by sum_j (w/z)^j
      std::vector<cplx> out(D + 1, cplx(0.0));
      cplx zinv = 1.0 / z;
      for (int i = 0; i <= D; ++i) {
        cplx zp = 1.0;
        for (int j = 0; i + j <= D; ++j) {
          out[i + j] += series[i] * zp;
          zp *= zinv;
        }
      }
      series = std::move(out);
    }
  }
  return series;
}

// h_k of the shifted times; h_k = 0 for k < 0, h_0 = 1.
inline cplx h_poly(int k, const ShiftedTimes& st) {
  if (k < 0) return 0.0;
  return h_series(st, k)[k];
}

namespace detail {

inline cplx det_small(std::vector<std::vector<cplx>> M) {
  // Gaussian elimination with partial pivoting; sizes here are <= ~10.
  const std::size_t m = M.size();
  cplx det = 1.0;
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < m; ++r)
      if (std::abs(M[r][c]) > std::abs(M[piv][c])) piv = r;
    if (std::abs(M[piv][c]) == 0.0) return 0.0;
    if (piv != c) {
      std::swap(M[piv], M[c]);
      det = -det;
    }
    det *= M[c][c];
    for (std::size_t r = c + 1; r < m; ++r) {
      cplx f = M[r][c] / M[c][c];
      for (std::size_t k = c; k < m; ++k) M[r][k] -= f * M[c][k];
    }
  }
  return det;
}

}  // namespace detail

// Schur polynomial s_lambda(t) as the determinant det(h_{lambda_i - i + j}).
inline cplx schur(const Partition& lam, const ShiftedTimes& st) {
  const int l = part_rows(lam);
  if (l == 0) return 1.0;
  const int D = lam[0] + l - 1;
  std::vector<cplx> h = h_series(st, D);
  std::vector<std::vector<cplx>> M(l, std::vector<cplx>(l));
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) {
      int idx = lam[i] - (i + 1) + (j + 1);
      M[i][j] = (idx >= 0) ? h[idx] : cplx(0.0);
    }
  return detail::det_small(std::move(M));
}

// Skew Schur polynomial s_{lambda/mu}(t) = det(h_{lambda_i - mu_j - i + j}).
inline cplx skew_schur(const Partition& lam, const Partition& mu, const ShiftedTimes& st) {
  const int l = part_rows(lam);
  if (l == 0) return mu.empty() ? cplx(1.0) : cplx(0.0);
  Partition mup = mu;
  mup.resize(l, 0);
  const int D = lam[0] + l;
  std::vector<cplx> h = h_series(st, D);
  std::vector<std::vector<cplx>> M(l, std::vector<cplx>(l));
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) {
      int idx = lam[i] - mup[j] - (i + 1) + (j + 1);
      M[i][j] = (idx >= 0) ? h[idx] : cplx(0.0);
    }
  return detail::det_small(std::move(M));
}

// Character chi_lambda(g) of GL(N) at the diagonal twist with eigenvalues w.
// Weyl's ratio of alternants when the w_a are pairwise distinct; otherwise the
// Jacobi-Trudi determinant in the power-sum specialization t_k = (sum w^k)/k.
inline cplx character(const Partition& lam, const std::vector<cplx>& w) {
  const int N = static_cast<int>(w.size());
  if (part_rows(lam) > N) return 0.0;
  double minGap = 1e300;
  for (int a = 0; a < N; ++a)
    for (int b = a + 1; b < N; ++b) minGap = std::min(minGap, std::abs(w[a] - w[b]));
  if (N >= 2 && minGap < 1e-8) {
    int D = lam.empty() ? 0 : lam[0] + part_rows(lam) - 1;
    TimesVector t(std::max(D, 1), cplx(0.0));
    for (int k = 1; k <= std::max(D, 1); ++k) {
      cplx p = 0.0;
      for (cplx wa : w) p += std::pow(wa, k);
      t[k - 1] = p / static_cast<double>(k);
    }
    return schur(lam, ShiftedTimes(t));
  }
  Partition full = lam;
  full.resize(N, 0);
  std::vector<std::vector<cplx>> num(N, std::vector<cplx>(N)), den(N, std::vector<cplx>(N));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      num[i][j] = std::pow(w[j], full[i] + N - 1 - i);
      den[i][j] = std::pow(w[j], N - 1 - i);
    }
  return detail::det_small(std::move(num)) / detail::det_small(std::move(den));
}

}  // namespace mastert

#endif  // MASTERT_SYMFUN_HPP
