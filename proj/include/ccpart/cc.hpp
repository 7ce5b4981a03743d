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

#include <string>
#include <vector>

#include "ccpart/fermion.hpp"
#include "ccpart/fock.hpp"
#include "ccpart/models.hpp"

namespace ccpart {

// D = sum eps_occ - sum eps_virt.
double denominator(const Excitation& e, const FockSpectrum& spectrum);

// Shared sector data for one Hamiltonian and reference.
class CcProblem {
 public:
  CcProblem(const FermionOperator& h, const ReferenceDeterminant& ref, int max_rank,
            std::size_t sector_cap = kSectorCap);

  const FermionOperator& hamiltonian() const { return h_; }
  const SectorMatrix& h_matrix() const { return hm_; }
  const BasisPtr& basis() const { return basis_; }
  const ReferenceDeterminant& ref() const { return ref_; }
  int max_rank() const { return max_rank_; }
  const FockSpectrum& spectrum() const { return spectrum_; }
  const std::vector<Excitation>& manifold() const { return manifold_; }
  std::size_t n_amplitudes() const { return manifold_.size(); }
  // tau_mu |Phi> = sign(mu) |det(mu)>.
  int sign(std::size_t mu) const { return signs_[mu]; }
  long det_index(std::size_t mu) const { return rows_[mu]; }
  double denominator(std::size_t mu) const { return denoms_[mu]; }
  double reference_energy() const { return e_ref_; }

  StateVector reference_state() const;
  Eigen::VectorXd pack(const ClusterOperator& t) const;
  ClusterOperator unpack(const Eigen::VectorXd& v, bool deexcitation = false) const;
  // sign(mu) * v[det(mu)] for every mu.
  Eigen::VectorXcd components(const StateVector& v) const;
  // sum_mu c_mu tau_mu |Phi> as a state.
  StateVector excited_state(const Eigen::VectorXcd& c) const;

  // e^{sign T} v
  StateVector exp_t(const ClusterOperator& t, const StateVector& v, int sign = +1) const;
  // e^{-T} H e^{T} v
  StateVector hbar(const ClusterOperator& t, const StateVector& v) const;
  StateVector hbar_ref(const ClusterOperator& t) const { return hbar(t, reference_state()); }

 private:
  FermionOperator h_;
  ReferenceDeterminant ref_;
  int max_rank_;
  BasisPtr basis_;
  SectorMatrix hm_;
  FockSpectrum spectrum_;
  std::vector<Excitation> manifold_;
  std::vector<int> signs_;
  std::vector<long> rows_;
  std::vector<double> denoms_;
  double e_ref_ = 0.0;
};

struct IterationRecord {
  int iteration = 0;
  double energy = 0.0;
  double residual = 0.0;
};

struct SolverOptions {
  enum class Method { jacobi, newton, direct };
  enum class Guess { zero, ci, given };

  double tol = 1e-9;
  int max_iter = 500;
  int diis_depth = 8;
  Method method = Method::jacobi;
  Guess guess = Guess::zero;
  const ClusterOperator* initial = nullptr;
  double shift_threshold = 1e-6;
  double level_shift = 0.1;
  std::string log_path;  // CSV iteration,energy,residual when set
};

struct CcSolution {
  ClusterOperator t;
  double energy = 0.0;
  double residual_norm = 0.0;
  int iterations = 0;
  int level_shifts = 0;
  std::vector<IterationRecord> history;
};

struct LambdaSolution {
  ClusterOperator lam;
  double residual_norm = 0.0;
  int iterations = 0;
  int level_shifts = 0;
  std::vector<IterationRecord> history;
};

// r_mu = <Phi_mu| e^{-T} H e^{T} |Phi>, with <Phi_mu| = <Phi| tau_mu^dagger.
Eigen::VectorXd cc_residual_vector(const CcProblem& p, const ClusterOperator& t);
std::map<Excitation, double> cc_residuals(const CcProblem& p, const ClusterOperator& t);
std::map<Excitation, double> cc_residuals(const FermionOperator& h, const ClusterOperator& t,
                                          const ReferenceDeterminant& ref, int max_rank);
// <Phi| H e^{T} |Phi>
double cc_energy(const CcProblem& p, const ClusterOperator& t);

CcSolution solve_cc(const CcProblem& p, const SolverOptions& opts = {});
CcSolution solve_cc(const FermionOperator& h, const ReferenceDeterminant& ref, int max_rank,
                    const SolverOptions& opts = {});

// Lowest root of H in the rank <= max_rank CI space, written as e^{T}|Phi>.
ClusterOperator ci_cluster_guess(const CcProblem& p);
// Exact cluster decomposition of a state with <Phi|c> != 0 up to rank max_rank.
ClusterOperator cluster_decomposition(const CcProblem& p, const StateVector& c);

// rho_mu = <Phi|(1 + Lambda) Hbar |Phi_mu> - E lambda_mu
Eigen::VectorXd lambda_residual_vector(const CcProblem& p, const ClusterOperator& t, const ClusterOperator& lam,
                                       double energy);
LambdaSolution solve_lambda(const CcProblem& p, const ClusterOperator& t, const SolverOptions& opts = {});

// V_N = H - <Phi|H|Phi> - F_N with F_N the normal-ordered Fock operator.
FermionOperator fock_operator(const FermionOperator& h, const ReferenceDeterminant& ref);
FermionOperator fluctuation_potential(const FermionOperator& h, const ReferenceDeterminant& ref);

struct TriplesOptions {
  // Also feed V_N T1 into the l3 amplitudes.
  bool include_t1 = false;
  double shift_threshold = 1e-6;
  double level_shift = 0.1;
};

// Rank-3 component of V_N T2 |Phi>. The T1 version keeps the plain product,
// whose triples part is entirely T1 V_N |Phi>.
StateVector triples_moment(const FermionOperator& h, const ClusterOperator& t2, const ReferenceDeterminant& ref,
                           BasisPtr basis = nullptr);
StateVector triples_singles_moment(const FermionOperator& h, const ClusterOperator& t1,
                                   const ReferenceDeterminant& ref, BasisPtr basis = nullptr);

// l3_mu = conj(M3_mu) / D_mu as a rank-3 de-excitation operator.
ClusterOperator perturbative_l3(const FermionOperator& h, const ClusterOperator& t, const FockSpectrum& spectrum,
                                const TriplesOptions& opts = {});

enum class TriplesTrial { bracket, paren };

// R0^(3) applied to a rank-3 state: component-wise division by D.
StateVector triples_resolvent(const StateVector& v, const ReferenceDeterminant& ref, const FockSpectrum& spectrum,
                              const TriplesOptions& opts = {});

// |Psi_trial> = (1 + T1 + T2)|Phi> + R0 M3 (bracket) or R0 (M3 + Z3) (paren).
StateVector triples_trial_state(TriplesTrial kind, const CcProblem& p, const ClusterOperator& t,
                                const TriplesOptions& opts = {});

// <Psi_trial|M3>, divided by <Psi_trial|e^{T}Phi> when renormalized.
double delta_t_correction(TriplesTrial kind, bool renormalized, const CcProblem& p, const ClusterOperator& t,
                          const TriplesOptions& opts = {});
// Same with a precomputed M3 (from triples_moment).
double delta_t_correction(TriplesTrial kind, bool renormalized, const CcProblem& p, const ClusterOperator& t,
                          const StateVector& m3, const TriplesOptions& opts = {});

void write_iteration_log(const std::string& path, const std::vector<IterationRecord>& history);

}  // namespace ccpart
