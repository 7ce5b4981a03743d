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
#include <vector>

#include "ccpart/reference.hpp"

namespace ccpart {

inline constexpr double kDropTolerance = 1e-12;
inline constexpr int kDenseQubitCap = 12;

// coeff * P(x, z) where P(x, z) = i^{|x & z|} X^x Z^z is the Hermitian Pauli
// string with Y on the qubits set in both masks.
struct PauliTerm {
  cplx coeff{1.0, 0.0};
  Mask x = 0;
  Mask z = 0;
  int n_qubits = 0;

  static PauliTerm identity(int n_qubits, cplx coeff = 1.0);
  // Label like "X0 Z3 Y5"; "I" or "" is the identity.
  static PauliTerm from_label(const std::string& label, int n_qubits, cplx coeff = 1.0);

  std::string label() const;
  bool is_identity() const { return x == 0 && z == 0; }
  bool is_diagonal() const { return x == 0; }
  bool same_string(const PauliTerm& o) const { return x == o.x && z == o.z; }
  // Qubits carrying a non-identity letter.
  Mask support() const { return x | z; }
};

PauliTerm multiply(const PauliTerm& a, const PauliTerm& b);
bool anticommutes(const PauliTerm& a, const PauliTerm& b);
bool commutes(const PauliTerm& a, const PauliTerm& b);
PauliTerm adjoint(const PauliTerm& a);

// Image of a basis state: P|b> = phase |b ^ x>.
struct BasisImage {
  cplx phase;
  Mask state;
};
BasisImage apply_to_basis(const PauliTerm& p, Mask b);

struct PauliSum {
  int n_qubits = 0;
  std::vector<PauliTerm> terms;

  PauliSum() = default;
  explicit PauliSum(int n) : n_qubits(n) {}
  PauliSum(int n, std::vector<PauliTerm> t) : n_qubits(n), terms(std::move(t)) {}

  static PauliSum identity(int n_qubits, cplx coeff = 1.0);

  void add(const PauliTerm& t);
  std::size_t size() const { return terms.size(); }
  bool empty() const { return terms.empty(); }
};

// Merge duplicate strings, drop |coeff| < tol, sort lexicographically on (x, z).
PauliSum collect(const PauliSum& s, double tol = kDropTolerance);
PauliSum multiply(const PauliSum& a, const PauliSum& b, double tol = kDropTolerance);
PauliSum add(const PauliSum& a, const PauliSum& b, double tol = kDropTolerance);
PauliSum scale(const PauliSum& a, cplx c);
PauliSum adjoint(const PauliSum& a);

cplx expectation_on_reference(const PauliSum& s, const ReferenceDeterminant& ref);
// <ref| a^dagger b |ref>, without materialising the collected product.
cplx expectation_of_product(const PauliSum& a, const PauliSum& b, const ReferenceDeterminant& ref);

// Sparse state over computational basis states, ordered for deterministic sums.
using SparseState = std::map<Mask, cplx>;
SparseState apply(const PauliSum& s, const SparseState& v, double tol = 0.0);
cplx inner(const SparseState& a, const SparseState& b);

Eigen::MatrixXcd to_dense_matrix(const PauliTerm& t, int cap = kDenseQubitCap);
Eigen::MatrixXcd to_dense_matrix(const PauliSum& s, int cap = kDenseQubitCap);

// One "coeff_re coeff_im label" line per term, 17 significant digits.
std::string format_pauli_sum(const PauliSum& s);
PauliSum parse_pauli_sum(const std::string& text, int n_qubits);

}  // namespace ccpart
