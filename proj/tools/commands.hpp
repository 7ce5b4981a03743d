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


#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ccpart::cli {

enum Exit : int { kOk = 0, kUsage = 1, kParse = 2, kConvergence = 3, kInvariant = 4 };

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;     // FCIDUMP files or one directory (pes-scan)
  std::vector<std::string> amplitudes;  // amplitude files
  std::string pauli;                    // Pauli-sum text file (partition)
  std::vector<double> siam_u;           // SIAM points given by U
  std::vector<double> grid{0.0, 0.3, 0.6, 0.9, 1.2, 1.5};  // log10(U/V)
  int n_bath = 3;
  std::string siam_basis = "site";
  std::string operator_kind = "hamiltonian";  // partition: hamiltonian | ket | bra
  std::vector<std::string> methods;
  int rank = 2;
  std::string solver = "auto";  // auto | jacobi | newton
  std::string guess = "auto";   // auto | zero | ci
  std::vector<std::string> strategies{"dsatur"};
  std::string mode = "exact";  // exact | shots
  std::uint64_t shots = 10000;
  std::uint64_t seed = 7;
  double tol = 1e-10;
  bool one_shot = true;
  std::string out;
  std::string amplitudes_out;
  std::string log_path;

  void validate() const;
  std::string manifest_json() const;
};

// Each writes CSV (manifest comment line first) to `os` and returns an exit code.
int cmd_partition(const RunConfig& c, std::ostream& os);
int cmd_siam_scan(const RunConfig& c, std::ostream& os);
int cmd_pes_scan(const RunConfig& c, std::ostream& os);
int cmd_cc_solve(const RunConfig& c, std::ostream& os);
int cmd_energy(const RunConfig& c, std::ostream& os);
int cmd_verify(const RunConfig& c, std::ostream& os);

}  // namespace ccpart::cli
