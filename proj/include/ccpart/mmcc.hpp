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
#include <map>
#include <string>
#include <vector>

#include "ccpart/cc.hpp"
#include "ccpart/fermion.hpp"
#include "ccpart/fock.hpp"
#include "ccpart/partition.hpp"

namespace ccpart {

enum class StateKind { omega, gamma, theta };

std::string kind_name(StateKind k);

// |state> = F_k ... F_1 |Phi> with each factor a partitioned Pauli sum.
struct PartitionedState {
  std::vector<PartitionedOperator> factors;
  ReferenceDeterminant ref;
  StateKind label = StateKind::omega;

  int n_qubits() const { return ref.n_modes; }
  std::size_t circuit_count() const;
};

struct PipelineConfig {
  ColoringStrategy strategy = ColoringStrategy::dsatur;
  bool one_shot = true;  // gamma as one partitioned product, else H and Omega factors
  SrJwOptions srjw;
  ExpansionScheme ket_scheme = ExpansionScheme::nilpotent_exact;
  // ccsd_bra: (1 + Lambda)(1 - T1 - T2 + T1^2/2); nilpotent_exact: (1 + Lambda) e^{-T}
  ExpansionScheme bra_scheme = ExpansionScheme::ccsd_bra;
};

// Pauli sum G with G|Phi> = op|Phi>.
PauliSum ket_generator(const FermionOperator& op, const ReferenceDeterminant& ref, const SrJwOptions& o = {});
// Pauli sum G with G|Phi> = op^dagger|Phi>, i.e. <Phi|op = (G|Phi>)^dagger.
PauliSum bra_generator(const FermionOperator& op, const ReferenceDeterminant& ref, const SrJwOptions& o = {});

// sum_D c_D (sign tau_D) so that applying it to |Phi> gives v.
FermionOperator state_generator(const StateVector& v, const ReferenceDeterminant& ref, double tol = 0.0);

PartitionedState assemble_omega(const ClusterOperator& t, const PipelineConfig& cfg = {});
PartitionedState assemble_gamma(const FermionOperator& h, const ClusterOperator& t, const PipelineConfig& cfg = {});
// <Theta| = <Phi| (1 + Lambda) B(T); lam may be null (then 1).
PartitionedState assemble_theta(const ClusterOperator& t, const ClusterOperator* lam, const PipelineConfig& cfg = {});
// |Theta> = op |Phi> for a trial generator op.
PartitionedState assemble_theta_ket(const FermionOperator& op, const ReferenceDeterminant& ref,
                                    const PipelineConfig& cfg = {});
PartitionedState assemble_theta_state(const StateVector& trial, const ReferenceDeterminant& ref,
                                      const PipelineConfig& cfg = {});

// Every factor of every state (for soundness checks).
std::vector<const PartitionedOperator*> all_parts(const PartitionedState& s);

struct OverlapEstimate {
  cplx value;
  std::uint64_t shots_per_term = 0;  // 0: exact
  double std_error = 0.0;
  std::uint64_t seed = 0;
  std::size_t circuits = 0;
};

// <a|b> = sum_{m,l} u_m u_l <Phi|U_m^dagger U_l|Phi>. With shots, each Re and
// Im expectation is replaced by a binomial estimate with its own stream
// seeded from (seed, stream, m, l).
OverlapEstimate estimate_overlap(const PartitionedState& a, const PartitionedState& b, std::uint64_t shots = 0,
                                 std::uint64_t seed = 0, std::uint64_t stream = 0);

inline constexpr double kDenominatorFloor = 1e-8;

struct EnergyEstimate {
  double energy = 0.0;
  double imag_residue = 0.0;
  cplx numerator, denominator;
  double std_error = 0.0;
};

EnergyEstimate e_mmcc(const PartitionedState& theta, const PartitionedState& gamma, const PartitionedState& omega,
                      std::uint64_t shots = 0, std::uint64_t seed = 0, double floor = kDenominatorFloor);

// Statevector route: <Theta|H e^T Phi> / <Theta|e^T Phi>.
double e_mmcc_statevector(const CcProblem& p, const StateVector& theta, const ClusterOperator& t,
                          double floor = kDenominatorFloor);
// |Theta> = B(T)^dagger (1 + Lambda)^dagger |Phi>.
StateVector theta_state(const CcProblem& p, const ClusterOperator& t, const ClusterOperator* lam,
                        ExpansionScheme bra_scheme = ExpansionScheme::ccsd_bra);

// <Phi|(1 + Lambda) e^{-T} H e^{T}|Phi>, no denominator.
double e_lambda_functional(const CcProblem& p, const ClusterOperator& lam, const ClusterOperator& t);
double e_lambda_functional_pipeline(const FermionOperator& h, const ClusterOperator& lam, const ClusterOperator& t,
                                    const PipelineConfig& cfg = {});

double e_ccsd_lambda3_indirect(double e_ccsd, double num, double den, double floor = kDenominatorFloor);

// <Psi|e^T Q_R M|Phi> / <Psi|e^T|Phi>, Q_R above t.max_rank, M = e^{-T} H e^{T}|Phi>.
double mmcc_full_correction(const CcProblem& p, const StateVector& psi, const ClusterOperator& t,
                            double floor = kDenominatorFloor);

inline constexpr int kDenseExpCap = 4096;

// Anti-Hermitian sector matrix T - T^dagger.
SectorMatrix anti_hermitian_generator(const ClusterOperator& t, const SectorBasis& basis);
// sigma with e^{sigma}|from> = |to> for normalized real-overlap states (plane rotation).
SectorMatrix rotation_generator(const StateVector& from, const StateVector& to);
StateVector apply_unitary_exponential(const SectorMatrix& sigma, const StateVector& v, int cap = kDenseExpCap);

double ucc_energy(const CcProblem& p, const ClusterOperator& t);
double ucc_energy(const CcProblem& p, const SectorMatrix& sigma);
double ucc_mmcc_energy(const CcProblem& p, const SectorMatrix& sigma_s, const SectorMatrix& sigma_a,
                       double floor = kDenominatorFloor);
double ucc_mmcc_energy(const CcProblem& p, const ClusterOperator& t_s, const ClusterOperator& t_a,
                       double floor = kDenominatorFloor);

struct UccDecomposition {
  double e_ucc = 0.0;
  double moment_term = 0.0;
  double total() const { return e_ucc + moment_term; }
};
// E = E_UCC(A) + <Phi|e^{-sS} e^{sA} (Q_A + Q_R) M_UCC|Phi> / <Phi|e^{-sS} e^{sA}|Phi>
UccDecomposition ucc_mmcc_decomposition(const CcProblem& p, const SectorMatrix& sigma_s, const SectorMatrix& sigma_a,
                                        double floor = kDenominatorFloor);

struct EnergyRow {
  std::string system, method, mode;
  std::uint64_t shots = 0, seed = 0;
  double energy = 0.0, std_error = 0.0;
};

std::string energy_csv_header();
std::string energy_csv_line(const EnergyRow& r);

std::uint64_t fnv1a64(const std::string& bytes);
std::uint64_t fnv1a64_file(const std::string& path);
std::string hex64(std::uint64_t h);

}  // namespace ccpart
