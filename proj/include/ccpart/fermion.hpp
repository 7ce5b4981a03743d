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

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ccpart/pauli.hpp"
#include "ccpart/reference.hpp"

namespace ccpart {

struct Ladder {
  int mode = 0;
  bool create = false;

  auto operator<=>(const Ladder&) const = default;
};

inline Ladder cre(int p) { return {p, true}; }
inline Ladder ann(int p) { return {p, false}; }

struct FermionTerm {
  cplx coeff{1.0, 0.0};
  std::vector<Ladder> factors;

  bool is_scalar() const { return factors.empty(); }
  Mask create_mask() const;
  Mask annihilate_mask() const;
};

struct FermionOperator {
  int n_modes = 0;
  std::vector<FermionTerm> terms;

  FermionOperator() = default;
  explicit FermionOperator(int n) : n_modes(n) {}

  static FermionOperator scalar(int n_modes, cplx c);
  static FermionOperator identity(int n_modes) { return scalar(n_modes, 1.0); }
  static FermionOperator single(int n_modes, cplx c, std::vector<Ladder> factors);

  void add(cplx c, std::vector<Ladder> factors);
  void add(const FermionTerm& t) { add(t.coeff, t.factors); }
  std::size_t size() const { return terms.size(); }
  bool empty() const { return terms.empty(); }
  // Largest factor count over terms.
  int max_degree() const;
};

// Creates left of annihilates, strictly decreasing mode inside each block.
bool is_normal_ordered(const FermionTerm& t);
bool is_normal_ordered(const FermionOperator& op);

// Wick-equivalent operator with every term normal ordered and like terms merged
// (deterministic order, |coeff| < tol dropped).
FermionOperator normal_order(const FermionOperator& op, double tol = kDropTolerance);
// Merge identical factor lists without reordering.
FermionOperator collect(const FermionOperator& op, double tol = kDropTolerance);

FermionOperator adjoint(const FermionOperator& op);
FermionOperator add(const FermionOperator& a, const FermionOperator& b);
FermionOperator scale(const FermionOperator& a, cplx c);
// Normal-ordered product a*b.
FermionOperator multiply(const FermionOperator& a, const FermionOperator& b,
                         double tol = kDropTolerance);

// Action of a product of ladder operators (rightmost first) on a determinant.
struct DetImage {
  int sign = 0;  // 0: annihilated
  Mask det = 0;
};
DetImage apply_factors(const std::vector<Ladder>& factors, Mask det);

enum class Side { ket, bra };

// Keep only what survives on |ref> (ket) or <ref| (bra): pure excitation
// (resp. de-excitation) strings, number pairs replaced by their eigenvalue.
FermionOperator reduce_on_reference(const FermionOperator& op, const ReferenceDeterminant& ref,
                                    Side side, double tol = kDropTolerance);

PauliSum standard_jw(const FermionOperator& op, double tol = kDropTolerance);

enum class Branch { X, Y };

// Which single-qubit letter replaces a touched mode in the SR-guided map.
struct SrJwOptions {
  Branch annihilate = Branch::Y;
  Branch create = Branch::X;
};

// One Pauli string per surviving term with (PauliSum)|ref> == op|ref>; pure
// de-excitation terms are mapped so that <ref|(PauliSum) == <ref|op.
PauliSum sr_jw(const FermionOperator& op, const ReferenceDeterminant& ref,
               const SrJwOptions& opts = {}, double tol = kDropTolerance);

// Excitation tau = a+_{a1} .. a+_{ak} a_{ik} .. a_{i1}, a1<..<ak, i1<..<ik.
struct Excitation {
  Mask occ = 0;
  Mask virt = 0;

  int rank() const { return popcount(occ); }
  auto operator<=>(const Excitation&) const = default;
  std::vector<int> occ_modes() const;
  std::vector<int> virt_modes() const;
  std::vector<Ladder> factors() const;
};

// tau |det>, zero sign if tau annihilates det.
DetImage apply_excitation(const Excitation& e, Mask det);
// tau^dagger |det>.
DetImage apply_deexcitation(const Excitation& e, Mask det);

// All spin-conserving excitations of rank 1..max_rank of ref within n_modes.
std::vector<Excitation> excitation_manifold(const ReferenceDeterminant& ref, int max_rank);

// sum_mu t_mu tau_mu (or sum_mu l_mu tau_mu^dagger when deexcitation is set).
struct ClusterOperator {
  int n_modes = 0;
  int max_rank = 0;
  ReferenceDeterminant ref;
  bool deexcitation = false;
  std::map<Excitation, double> amplitudes;

  ClusterOperator() = default;
  ClusterOperator(const ReferenceDeterminant& r, int max_rank_, bool deex = false)
      : n_modes(r.n_modes), max_rank(max_rank_), ref(r), deexcitation(deex) {}

  double get(const Excitation& e) const;
  void set(const Excitation& e, double value);
  void set(const std::vector<int>& occ, const std::vector<int>& virt, double value);
  std::size_t size() const { return amplitudes.size(); }
  bool empty() const { return amplitudes.empty(); }

  // T_k as its own operator.
  ClusterOperator rank_part(int k) const;
  ClusterOperator ranks(int lo, int hi) const;
  ClusterOperator scaled(double c) const;
  // Same amplitudes, excitation <-> de-excitation.
  ClusterOperator dagger() const;
  // Drop |amplitude| < tol.
  ClusterOperator pruned(double tol) const;
  int highest_rank() const;

  FermionOperator to_fermion() const;
  void validate() const;
};

ClusterOperator merge(const ClusterOperator& a, const ClusterOperator& b);

enum class ExpansionScheme { ccsd_bra, ccsd_ket, nilpotent_exact };

struct ExpansionOptions {
  ExpansionScheme scheme = ExpansionScheme::nilpotent_exact;
  int max_power = 32;
  // nilpotent_exact only: +1 for e^{T}, -1 for e^{-T}.
  int sign = +1;
  // Optional left prefactor (1 + Lambda); ccsd_bra without it uses 1.
  const ClusterOperator* lambda = nullptr;
};

// ccsd_bra: (1 + Lambda)(1 - T1 - T2 + T1^2/2)
// ccsd_ket: 1 + T1 + T2 + T1^2/2 + T1 T2 + T1^3/6 + T2^2/2 + T1^4/24
// nilpotent_exact: (1 + Lambda) sum_k (sign T)^k / k! until T^k|ref> = 0.
FermionOperator expand_exponential(const ClusterOperator& t, const ExpansionOptions& opts);

// Amplitude text format: "key value" header lines (n_modes, reference,
// max_rank, kind), then "rank i1..ik a1..ak value" records, 0-based modes.
std::string format_amplitudes(const ClusterOperator& t);
ClusterOperator parse_amplitudes(const std::string& text);
void write_amplitudes(const std::string& path, const ClusterOperator& t);
ClusterOperator read_amplitudes(const std::string& path);

}  // namespace ccpart
