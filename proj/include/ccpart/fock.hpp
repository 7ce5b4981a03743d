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
#include <Eigen/Sparse>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "ccpart/fermion.hpp"
#include "ccpart/pauli.hpp"
#include "ccpart/reference.hpp"

namespace ccpart {

inline constexpr std::size_t kSectorCap = 2'000'000;
inline constexpr int kDenseEigenCap = 5000;

// All determinants with n_alpha electrons on even modes and n_beta on odd
// modes, ascending bit pattern.
class SectorBasis {
 public:
  SectorBasis(int n_modes, int n_alpha, int n_beta, std::size_t cap = kSectorCap);

  int n_modes() const { return n_modes_; }
  int n_alpha() const { return n_alpha_; }
  int n_beta() const { return n_beta_; }
  std::size_t size() const { return dets_.size(); }
  const std::vector<Mask>& determinants() const { return dets_; }
  Mask det(std::size_t i) const { return dets_[i]; }
  // -1 when det is outside the sector.
  long find(Mask det) const;
  bool same_sector(const SectorBasis& o) const;

 private:
  int n_modes_, n_alpha_, n_beta_;
  std::vector<Mask> dets_;
  std::unordered_map<Mask, std::size_t> index_;
};

using BasisPtr = std::shared_ptr<const SectorBasis>;

BasisPtr sector_basis(int n_modes, int n_alpha, int n_beta, std::size_t cap = kSectorCap);
BasisPtr sector_basis_for(const ReferenceDeterminant& ref, std::size_t cap = kSectorCap);

struct StateVector {
  BasisPtr basis;
  Eigen::VectorXcd amps;

  StateVector() = default;
  explicit StateVector(BasisPtr b);
  StateVector(BasisPtr b, Eigen::VectorXcd a);

  static StateVector basis_state(BasisPtr b, Mask det, cplx c = 1.0);
  cplx at(Mask det) const;
  double norm() const { return amps.norm(); }
};

StateVector operator+(const StateVector& a, const StateVector& b);
StateVector operator-(const StateVector& a, const StateVector& b);
StateVector operator*(cplx c, const StateVector& a);

using SectorMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

// Matrix of op inside the sector; any nonzero image leaving the sector is a
// ContractViolation.
SectorMatrix sector_matrix(const FermionOperator& op, const SectorBasis& basis);
SectorMatrix sector_matrix(const PauliSum& s, const SectorBasis& basis);
SectorMatrix sector_matrix(const ClusterOperator& t, const SectorBasis& basis);

StateVector apply_matrix(const SectorMatrix& m, const StateVector& v);
StateVector apply_fermion(const FermionOperator& op, const StateVector& v);
StateVector apply_pauli(const PauliSum& s, const StateVector& v);
StateVector apply_cluster(const ClusterOperator& t, const StateVector& v);

// sum_k (sign M)^k / k! v, stopping when the running term is exactly zero.
StateVector apply_exponential(const SectorMatrix& m, const StateVector& v, int sign = +1,
                              int max_terms = 200);
StateVector apply_cluster_exponential(const ClusterOperator& t, const StateVector& v, int sign = +1);

struct EigenOptions {
  int dense_cap = kDenseEigenCap;
  double tol = 1e-10;  // residual norm for the iterative path
  int max_iter = 2000;
  int max_subspace = 48;
};

struct GroundState {
  double energy = 0.0;
  StateVector state;
  double residual = 0.0;
  int iterations = 0;
  bool dense = true;
};

// Lowest eigenpair. Phase fixed so the largest-magnitude component (first
// in basis order on ties) is real positive.
GroundState exact_ground_state(const FermionOperator& h, BasisPtr basis, const EigenOptions& opts = {});
GroundState exact_ground_state(const SectorMatrix& h, BasisPtr basis, const EigenOptions& opts = {});

enum class Manifold { P, QA, QR, rank };

// Excitation rank of det relative to ref (number of holes).
int excitation_rank(Mask det, const ReferenceDeterminant& ref);

// P keeps rank 0, QA ranks 1..max_rank, QR ranks above max_rank, rank keeps
// exactly max_rank.
StateVector project(const StateVector& v, const ReferenceDeterminant& ref, Manifold m, int max_rank = 0);

cplx overlap(const StateVector& a, const StateVector& b);

std::string format_state(const StateVector& v, double tol = 0.0);
StateVector parse_state(const std::string& text, BasisPtr basis = nullptr);
void write_state(const std::string& path, const StateVector& v);
StateVector read_state(const std::string& path, BasisPtr basis = nullptr);

}  // namespace ccpart
