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

// Command-line front end: spectra, identity verification, classical flows and
// the inverse (classical -> quantum) solver, all driven by a JSON chain
// config.  Exit codes: 0 ok, 1 check failed, 2 invalid config, 3 non-generic
// input.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "mastert/cli.hpp"

namespace {

// Stream sink: stdout by default, a file when --out is given.
struct Sink {
  std::ofstream file;
  std::ostream* os = &std::cout;

  bool open(const std::string& path) {
    if (path.empty()) return true;
    file.open(path);
    if (!file) return false;
    os = &file;
    return true;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin-chain master operator: spectra, bilinear identities and the classical correspondence"};
  app.require_subcommand(1);

  std::string configPath;
  std::string outPath;
  app.add_option("-c,--config", configPath, "JSON chain config")->required();
  app.add_option("-o,--out", outPath, "write the report here instead of stdout");

  auto* cmdSpectrum = app.add_subcommand("spectrum", "diagonalize the commuting family");
  bool withSeries = false;
  cmdSpectrum->add_flag("--series", withSeries, "include the per-state tau coefficients");

  auto* cmdVerify = app.add_subcommand("verify", "run identity checks");
  cmdVerify->require_subcommand(1);
  int trials = 100;
  auto* vHirota = cmdVerify->add_subcommand("hirota", "bilinear identities and truncation decay");
  vHirota->add_option("--trials", trials, "random shift triples (default 100)");
  auto* vQc = cmdVerify->add_subcommand("qc", "blind classical solve against the quantum spectrum");
  auto* vDetTau = cmdVerify->add_subcommand("det-tau", "determinant form vs series coefficients");
  auto* vAll = cmdVerify->add_subcommand("all", "every verification in sequence");
  vAll->add_option("--trials", trials, "random shift triples for the bilinear sweep");

  auto* cmdRs = app.add_subcommand("rs", "classical many-body system");
  cmdRs->require_subcommand(1);
  auto* rsFlow = cmdRs->add_subcommand("flow", "CSV of tau-root trajectories along the first time");
  int record = 0, samples = 11;
  double tEnd = 0.5;
  rsFlow->add_option("--record", record, "spectrum record index (default 0)");
  rsFlow->add_option("--t-end", tEnd, "endpoint of the real time interval (default 0.5)");
  rsFlow->add_option("--samples", samples, "number of CSV rows (default 11)");

  auto* cmdSolve = app.add_subcommand("solve", "inverse solver");
  cmdSolve->require_subcommand(1);
  auto* solveClassical = cmdSolve->add_subcommand("classical", "moment equations per weight sector");
  std::vector<int> sector;
  bool blind = false;
  solveClassical->add_option("--sector", sector, "weight vector, e.g. 2,1 (default: all sectors)")
      ->delimiter(',');
  solveClassical->add_flag("--blind", blind, "ignore every quantum hint");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Keep the advertised exit contract: anything malformed on the command
    // line is invalid input; --help/--version stay successful.
    const int code = app.exit(e);
    return code == 0 ? 0 : mastert::kExitInvalidConfig;
  }

  return mastert::run_guarded([&]() -> int {
    const mastert::RunConfig cfg = mastert::RunConfig::from_file(configPath);
    Sink sink;
    if (!sink.open(outPath)) {
      std::cerr << "error: cannot open output file " << outPath << "\n";
      return mastert::kExitInvalidConfig;
    }
    if (cmdSpectrum->parsed()) return mastert::run_spectrum(cfg, *sink.os, withSeries);
    if (vHirota->parsed()) return mastert::run_verify_hirota(cfg, *sink.os, trials);
    if (vQc->parsed()) return mastert::run_verify_qc(cfg, *sink.os);
    if (vDetTau->parsed()) return mastert::run_verify_dettau(cfg, *sink.os);
    if (vAll->parsed()) return mastert::run_verify_all(cfg, *sink.os, trials);
    if (rsFlow->parsed()) return mastert::run_rs_flow(cfg, *sink.os, record, tEnd, samples);
    if (solveClassical->parsed()) {
      const mastert::WeightVector* sec = nullptr;
      mastert::WeightVector m(sector.begin(), sector.end());
      if (!sector.empty()) sec = &m;
      return mastert::run_solve_classical(cfg, *sink.os, sec, blind);
    }
    std::cerr << "error: no subcommand\n";
    return mastert::kExitInvalidConfig;
  });
}
