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

#include <Eigen/Dense>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ccpart/fermion.hpp"

namespace ccpart {

struct MolecularIntegrals {
  int n_spatial = 0;
  int n_electrons = 0;
  int ms2 = 0;
  double core_energy = 0.0;
  Eigen::MatrixXd one_body;      // h_pq
  std::vector<double> two_body;  // (pq|rs), chemist notation, dense n^4
  std::vector<int> orbsym;       // parsed, unused
  int isym = 1;
  std::map<std::string, std::string> extra;  // unknown namelist keys

  MolecularIntegrals() = default;
  MolecularIntegrals(int n, int n_elec, int ms2_ = 0);

  double eri(int p, int q, int r, int s) const {
    return two_body[static_cast<std::size_t>(((p * n_spatial + q) * n_spatial + r) * n_spatial + s)];
  }
  // Sets all eight permutations.
  void set_eri(int p, int q, int r, int s, double v);
  void set_h(int p, int q, double v);
  int n_alpha() const { return (n_electrons + ms2) / 2; }
  int n_beta() const { return (n_electrons - ms2) / 2; }
};

MolecularIntegrals parse_fcidump(const std::string& text);
MolecularIntegrals read_fcidump(const std::string& path);
std::string serialize_fcidump(const MolecularIntegrals& m);

// One-body basis change: new orbital k = sum_p C(p,k) old orbital p.
MolecularIntegrals rotate_orbitals(const MolecularIntegrals& m, const Eigen::MatrixXd& C);

struct RhfResult {
  double energy = 0.0;
  Eigen::VectorXd orbital_energies;
  Eigen::MatrixXd coefficients;  // columns = orbitals, ascending energy
  int iterations = 0;
  bool converged = false;
};

// Closed-shell Roothaan iterations with DIIS in the (orthonormal) orbital basis of m.
RhfResult restricted_hartree_fock(const MolecularIntegrals& m, double tol = 1e-10, int max_iter = 500);

struct MolecularHamiltonian {
  FermionOperator op;
  ReferenceDeterminant ref;
};

// Interleaved spin orbitals (2p alpha, 2p+1 beta); reference fills the first
// n_alpha / n_beta spatial orbitals.
MolecularHamiltonian to_fermion_operator(const MolecularIntegrals& m);
// Same with an explicit list of doubly/singly occupied spatial orbitals.
MolecularHamiltonian to_fermion_operator(const MolecularIntegrals& m, const std::vector<int>& alpha_orbitals,
                                         const std::vector<int>& beta_orbitals);
// Closed-shell <Phi|H|Phi> from integrals: core + sum_i 2h_ii + sum_ij (2J - K).
double restricted_reference_energy(const MolecularIntegrals& m, const std::vector<int>& occupied);

enum class SiamBasis { site, meanfield };

struct SiamParams {
  double U = 1.0;
  double V = 1.0;
  double eps_c = -0.5;
  std::vector<double> bath_levels{-1.0, 0.0, 1.0};
  int n_bath = 3;
  SiamBasis basis = SiamBasis::site;

  // eps_c = -U/2, n_bath levels evenly spaced over [-1, 1] including endpoints.
  static SiamParams symmetric(double U, double V = 1.0, int n_bath = 3,
                              SiamBasis basis = SiamBasis::site);
  void validate() const;
};

// Site-basis spatial integrals: orbital 0 = impurity, 1..n_bath = bath sites.
MolecularIntegrals siam_integrals(const SiamParams& p);
// Half-filled Hamiltonian and CC reference in the requested orbital basis.
MolecularHamiltonian build_siam(const SiamParams& p);

struct FockSpectrum {
  std::vector<double> eps;
};

// eps_p = h_pp + sum_{i occ} <pi||pi>, from determinant diagonal energies.
FockSpectrum fock_spectrum(const FermionOperator& h, const ReferenceDeterminant& ref);

// <det|H|det>.
double diagonal_energy(const FermionOperator& h, Mask det);

// H = c + sum h_pq a+p a_q + 1/4 sum g_pqrs a+p a+q a_s a_r with g antisymmetric.
struct SpinOrbitalTensors {
  int n = 0;
  cplx constant = 0.0;
  Eigen::MatrixXcd h;
  std::vector<cplx> g;

  cplx& G(int p, int q, int r, int s) {
    return g[static_cast<std::size_t>(((p * n + q) * n + r) * n + s)];
  }
  cplx G(int p, int q, int r, int s) const {
    return g[static_cast<std::size_t>(((p * n + q) * n + r) * n + s)];
  }
};

// Throws ContractViolation for terms that are not number-conserving 0/1/2-body.
SpinOrbitalTensors extract_tensors(const FermionOperator& h);

}  // namespace ccpart
