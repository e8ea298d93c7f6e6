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
#ifndef MASTERT_REPORT_HPP
#define MASTERT_REPORT_HPP

#include <json.hpp>

#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "mastert/qcsolver.hpp"
#include "mastert/spinchain.hpp"
#include "mastert/types.hpp"

namespace mastert {

using json = nlohmann::json;

// Complex numbers serialize as [re, im]; nlohmann already prints doubles in
// shortest round-trip form and orders object keys, so reports are
// byte-for-byte reproducible for identical inputs.
inline json jcplx(cplx z) { return json::array({z.real(), z.imag()}); }

inline json jcvec(const std::vector<cplx>& v) {
  json out = json::array();
  for (cplx z : v) out.push_back(jcplx(z));
  return out;
}

inline cplx cplx_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw InvalidInputError("expected a complex number as [re, im]");
  return cplx(j[0].get<double>(), j[1].get<double>());
}

inline json spec_to_json(const SpinChainSpec& spec) {
  json out;
  out["N"] = spec.N;
  out["u"] = jcvec(spec.u);
  out["w"] = jcvec(spec.w);
  out["K"] = spec.K;
  out["seed"] = spec.seed;
  return out;
}

inline SpinChainSpec spec_from_json(const json& j) {
  SpinChainSpec spec;
  if (!j.contains("N") || !j.contains("u") || !j.contains("w"))
    throw InvalidInputError("chain config requires N, u and w");
  spec.N = j.at("N").get<int>();
  for (const auto& e : j.at("u")) spec.u.push_back(cplx_from_json(e));
  for (const auto& e : j.at("w")) spec.w.push_back(cplx_from_json(e));
  if (j.contains("K")) spec.K = j.at("K").get<int>();
  if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
  return spec;
}

inline json record_to_json(const SpectrumRecord& rec, bool with_series) {
  json out;
  out["m"] = rec.m;
  out["H"] = jcvec(rec.H);
  json vec = json::array();
  for (int i = 0; i < rec.eigenvector.size(); ++i) vec.push_back(jcplx(rec.eigenvector(i)));
  out["eigenvector"] = vec;
  if (with_series) {
    json series = json::array();
    for (std::size_t l = 0; l < rec.tau.lams.size(); ++l) {
      json entry;
      entry["partition"] = rec.tau.lams[l];
      entry["coeff"] = jcvec(rec.tau.coeffs[l]);
      series.push_back(entry);
    }
    out["tau_series"] = series;
  }
  return out;
}

inline json solution_to_json(const ClassicalSolution& sol) {
  json out;
  out["m"] = sol.m;
  out["H"] = jcvec(sol.H);
  out["residual"] = sol.residual;
  return out;
}

// 64-bit FNV-1a over the canonical (sorted-key, shortest-float) dump of a
// config object: a cheap stable fingerprint embedded in every report.
inline std::string config_hash(const json& j) {
  const std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << "fnv1a:" << std::hex << std::setfill('0') << std::setw(16) << h;
  return os.str();
}

inline json report_shell(const json& config) {
  json out;
  out["tool_version"] = kToolVersion;
  out["config_hash"] = config_hash(config);
  return out;
}

}  // namespace mastert

#endif  // MASTERT_REPORT_HPP
