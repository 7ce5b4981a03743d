// Copyright 2026 The ccpart Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ccpart/errors.hpp"
#include "commands.hpp"

using namespace ccpart;
using namespace ccpart::cli;

namespace {

using Command = std::function<int(const RunConfig&, std::ostream&)>;

int run(const RunConfig& c, const Command& cmd) {
  c.validate();
  std::vector<std::string> paths = c.inputs;
  paths.insert(paths.end(), c.amplitudes.begin(), c.amplitudes.end());
  if (!c.pauli.empty()) paths.push_back(c.pauli);
  for (const auto& p : paths) {
    if (!std::filesystem::exists(p)) {
      std::fprintf(stderr, "ccpart: cannot read %s\n", p.c_str());
      return kParse;
    }
  }
  if (c.out.empty()) return cmd(c, std::cout);
  std::ostringstream buf;
  const int code = cmd(c, buf);
  std::ofstream out(c.out, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + c.out);
  out << buf.str();
  std::ofstream manifest(c.out + ".manifest.json", std::ios::binary);
  manifest << c.manifest_json() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partitioned coupled-cluster wave operators and moment-corrected energies"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "INI file with option defaults; flags override it");

  RunConfig c;
  std::string strategy;
  app.add_option("--seed", c.seed, "Seed for shot sampling")->capture_default_str();
  app.add_option("--shots", c.shots, "Shots per measured term in shot mode")->capture_default_str();
  app.add_option("--strategy", strategy, "Coloring strategy, or a comma list (dsatur, largest_first)");
  app.add_option("--mode", c.mode, "exact or shots")->capture_default_str();
  app.add_option("--tol", c.tol, "Solver convergence tolerance")->capture_default_str();
  app.add_option("--out", c.out, "Output CSV path (manifest written next to it)");

  auto add_systems = [&](CLI::App* sub) {
    sub->add_option("inputs", c.inputs, "FCIDUMP files");
    sub->add_option("--siam", c.siam_u, "SIAM points by U (V = 1)")->delimiter(',')->allow_extra_args(false);
    sub->add_option("--n-bath", c.n_bath, "SIAM bath sites")->capture_default_str();
    sub->add_option("--siam-basis", c.siam_basis, "site or meanfield")->capture_default_str();
    sub->add_option("--solver", c.solver, "auto, jacobi or newton")->capture_default_str();
    sub->add_option("--guess", c.guess, "auto, zero or ci")->capture_default_str();
  };

  std::map<CLI::App*, std::pair<std::string, Command>> commands;
  auto* part = app.add_subcommand("partition", "Unitary partition counts per system");
  add_systems(part);
  part->add_option("--pauli", c.pauli, "Pauli-sum text file to partition");
  part->add_option("--amplitudes", c.amplitudes, "Amplitude files; partitions their ket generator");
  part->add_option("--operator", c.operator_kind, "hamiltonian, ket or bra")->capture_default_str();
  commands[part] = {"partition", cmd_partition};

  auto* siam = app.add_subcommand("siam-scan", "SIAM energies over a log10(U/V) grid");
  siam->add_option("--grid", c.grid, "log10(U/V) values")->delimiter(',')->allow_extra_args(false);
  siam->add_option("--siam", c.siam_u, "Explicit U values instead of the grid")->delimiter(',')->allow_extra_args(false);
  siam->add_option("--n-bath", c.n_bath, "SIAM bath sites")->capture_default_str();
  siam->add_option("--siam-basis", c.siam_basis, "site or meanfield")->capture_default_str();
  commands[siam] = {"siam-scan", cmd_siam_scan};

  auto* pes = app.add_subcommand("pes-scan", "Energies along a set of FCIDUMP geometries");
  pes->add_option("inputs", c.inputs, "FCIDUMP files or a directory")->required();
  pes->add_option("--methods", c.methods, "Subset of hf,ccsd,ccsd_l3,ccsd[t],ccsd(t),r-ccsd[t],r-ccsd(t),fci")
      ->delimiter(',')->allow_extra_args(false);
  pes->add_option("--solver", c.solver, "auto, jacobi or newton")->capture_default_str();
  commands[pes] = {"pes-scan", cmd_pes_scan};

  auto* cc = app.add_subcommand("cc-solve", "Solve the CC equations");
  add_systems(cc);
  cc->add_option("--rank", c.rank, "Highest excitation rank")->capture_default_str();
  cc->add_option("--amplitudes-out", c.amplitudes_out, "Write converged amplitudes here");
  cc->add_option("--log", c.log_path, "Write the iteration log (CSV) here");
  commands[cc] = {"cc-solve", cmd_cc_solve};

  auto* energy = app.add_subcommand("energy", "Moment-corrected energies through the measurement pipeline");
  add_systems(energy);
  energy->add_option("--methods", c.methods,
                     "ccsd, ccsd_lambda3, ccsd_l3, lambda_functional, exact_trial, ccsd[t]_trial, ccsd(t)_trial")
      ->delimiter(',')->allow_extra_args(false);
  energy->add_option("--amplitudes", c.amplitudes, "Amplitude files, one per system, instead of solving");
  energy->add_flag("!--factored", c.one_shot, "Partition H and the ket separately for the Gamma state");
  commands[energy] = {"energy", cmd_energy};

  auto* verify = app.add_subcommand("verify", "Run the invariant suite and print a pass/fail matrix");
  add_systems(verify);
  verify->add_option("--amplitudes", c.amplitudes, "Amplitude files to check");
  commands[verify] = {"verify", cmd_verify};

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  if (!strategy.empty()) {
    c.strategies.clear();
    std::stringstream ss(strategy);
    for (std::string s; std::getline(ss, s, ',');)
      if (!s.empty()) c.strategies.push_back(s);
  }
  for (const auto& [sub, entry] : commands) {
    if (!sub->parsed()) continue;
    c.command = entry.first;
    try {
      return run(c, entry.second);
    } catch (const ccpart::ParseError& e) {
      std::fprintf(stderr, "ccpart: parse error: %s\n", e.what());
      return kParse;
    } catch (const ModelError& e) {
      std::fprintf(stderr, "ccpart: %s\n", e.what());
      return kParse;
    } catch (const DimensionError& e) {
      std::fprintf(stderr, "ccpart: %s\n", e.what());
      return kParse;
    } catch (const ConvergenceError& e) {
      std::fprintf(stderr, "ccpart: %s\n", e.what());
      return kConvergence;
    } catch (const ContractViolation& e) {
      std::fprintf(stderr, "ccpart: invariant failure: %s\n", e.what());
      return kInvariant;
    } catch (const DenominatorError& e) {
      std::fprintf(stderr, "ccpart: invariant failure: %s\n", e.what());
      return kInvariant;
    } catch (const std::invalid_argument& e) {
      std::fprintf(stderr, "ccpart: usage: %s\n", e.what());
      return kUsage;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "ccpart: %s\n", e.what());
      return kUsage;
    }
  }
  return kUsage;
}
