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
#ifndef MASTERT_TYPES_HPP
#define MASTERT_TYPES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mastert {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr const char* kToolVersion = "1.0.0";

// Supported envelope: dense operators up to N^n = 1024.
inline constexpr int kMaxSiteDim = 4;
inline constexpr int kMaxSites = 5;

// Anything closer than this to a forbidden coincidence (equal inhomogeneities,
// unit gaps, vanishing or colliding twist eigenvalues) counts as non-generic.
inline constexpr double kGenericityGap = 1e-8;

struct NonGenericError : std::runtime_error {
  explicit NonGenericError(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidInputError : std::invalid_argument {
  explicit InvalidInputError(const std::string& what) : std::invalid_argument(what) {}
};

namespace detail {

// Deterministic RNG independent of the standard library's unspecified
// distribution algorithms, so seeded runs are reproducible byte-for-byte.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next_u64() {
    // splitmix64: tiny, well-mixed, stable across platforms.
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller (always consumes two uniforms).
  double normal() {
    double a = uniform();
    double b = uniform();
    if (a < 1e-300) a = 1e-300;
    return std::sqrt(-2.0 * std::log(a)) * std::cos(6.283185307179586476925287 * b);
  }

  cplx cnormal() {
    double re = normal();
    double im = normal();
    return {re, im};
  }

  // Complex number with modulus in [lo, hi] and uniform phase.
  cplx annulus(double lo, double hi) {
    double r = uniform(lo, hi);
    double phi = 6.283185307179586476925287 * uniform();
    return std::polar(r, phi);
  }

 private:
  std::uint64_t state_;
};

inline double rel_scale(double a, double b) { return std::max({a, b, 1e-12}); }

}  // namespace detail

// Definition of one inhomogeneous twisted spin chain: N-dimensional site
// spaces, site inhomogeneities u_1..u_n, and the eigenvalues w_1..w_N of the
// diagonal twist matrix g.
struct SpinChainSpec {
  int N = 0;
  std::vector<cplx> u;
  std::vector<cplx> w;
  int K = 6;                  // master-series truncation degree
  std::uint64_t seed = 42;    // seed for every randomized internal choice

  int sites() const { return static_cast<int>(u.size()); }

  // Structural checks throw InvalidInputError; genericity checks (the
  // coincidences every formula in this library divides by) throw
  // NonGenericError naming the offending pair.
  void validate() const {
    if (N < 1 || N > kMaxSiteDim)
      throw InvalidInputError("SpinChainSpec: N must be in 1.." + std::to_string(kMaxSiteDim));
    if (static_cast<int>(w.size()) != N)
      throw InvalidInputError("SpinChainSpec: w must have N entries");
    if (static_cast<int>(u.size()) > kMaxSites)
      throw InvalidInputError("SpinChainSpec: at most " + std::to_string(kMaxSites) + " sites supported");
    const int n = sites();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const cplx d = u[i] - u[j];
        if (std::abs(d) < kGenericityGap)
          throw NonGenericError("SpinChainSpec: inhomogeneities " + std::to_string(i + 1) + " and " +
                                std::to_string(j + 1) + " coincide");
        if (std::abs(d - 1.0) < kGenericityGap || std::abs(d + 1.0) < kGenericityGap)
          throw NonGenericError("SpinChainSpec: inhomogeneities " + std::to_string(i + 1) + " and " +
                                std::to_string(j + 1) + " differ by a unit shift");
      }
    for (int a = 0; a < N; ++a) {
      if (std::abs(w[a]) < kGenericityGap)
        throw NonGenericError("SpinChainSpec: twist eigenvalue " + std::to_string(a + 1) + " vanishes");
      for (int b = a + 1; b < N; ++b)
        if (std::abs(w[a] - w[b]) < kGenericityGap)
          throw NonGenericError("SpinChainSpec: twist eigenvalues " + std::to_string(a + 1) + " and " +
                                std::to_string(b + 1) + " coincide");
    }
  }
};

}  // namespace mastert

#endif  // MASTERT_TYPES_HPP
