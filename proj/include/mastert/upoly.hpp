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
#ifndef MASTERT_UPOLY_HPP
#define MASTERT_UPOLY_HPP

#include <vector>

#include "mastert/types.hpp"

namespace mastert {

// Dense polynomial in the spectral parameter u, ascending coefficients.
// Tau eigenvalues and transfer-operator entries are degree-n polynomials in u,
// stored exactly so u -> u+1 shifts and coefficient tests never interpolate.
using UPoly = std::vector<cplx>;

inline cplx upoly_eval(const UPoly& p, cplx u) {
  cplx acc = 0.0;
  for (std::size_t d = p.size(); d-- > 0;) acc = acc * u + p[d];
  return acc;
}

inline UPoly upoly_add(const UPoly& a, const UPoly& b) {
  UPoly out(std::max(a.size(), b.size()), cplx(0.0));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

inline UPoly upoly_scale(const UPoly& a, cplx s) {
  UPoly out = a;
  for (auto& c : out) c *= s;
  return out;
}

inline UPoly upoly_mul(const UPoly& a, const UPoly& b) {
  if (a.empty() || b.empty()) return {};
  UPoly out(a.size() + b.size() - 1, cplx(0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// prod_r (u - r), ascending coefficients; empty root list gives the constant 1.
inline UPoly upoly_from_roots(const std::vector<cplx>& roots) {
  UPoly out{cplx(1.0)};
  for (cplx r : roots) out = upoly_mul(out, UPoly{-r, cplx(1.0)});
  return out;
}

// Operator-valued polynomial in u (ascending coefficients of dense matrices).
using OpPoly = std::vector<Matrix>;

inline Matrix oppoly_eval(const OpPoly& p, cplx u) {
  if (p.empty()) return Matrix();
  Matrix acc = Matrix::Zero(p[0].rows(), p[0].cols());
  cplx up = 1.0;
  for (const Matrix& c : p) {
    acc += up * c;
    up *= u;
  }
  return acc;
}

}  // namespace mastert

#endif  // MASTERT_UPOLY_HPP
