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
#ifndef MASTERT_TESTS_TESTING_UTIL_HPP
#define MASTERT_TESTS_TESTING_UTIL_HPP

#include <algorithm>
#include <cmath>
#include <complex>

#include "mastert/types.hpp"

namespace mastert::testing {

// The reference chain every numerical suite runs on: two-dimensional sites,
// three generic inhomogeneities, generic twist, series truncated at degree 8.
inline SpinChainSpec pinned_spec() {
  SpinChainSpec spec;
  spec.N = 2;
  spec.u = {{0.2, -0.7}, {1.4, 0.3}, {-1.0, 0.9}};
  spec.w = {{0.9, 0.4}, {-0.5, 1.1}};
  spec.K = 8;
  spec.seed = 42;
  return spec;
}

// Generic spectral argument clear of every tau root of the pinned chain.
inline constexpr cplx kU0{0.55, 0.21};

inline double rel(cplx a, cplx b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-12});
}

// Relative max-norm deviation between two operators.
inline double opdev(const Matrix& A, const Matrix& B) {
  const double scale = std::max({A.cwiseAbs().maxCoeff(), B.cwiseAbs().maxCoeff(), 1e-12});
  return (A - B).cwiseAbs().maxCoeff() / scale;
}

}  // namespace mastert::testing

#endif  // MASTERT_TESTS_TESTING_UTIL_HPP
