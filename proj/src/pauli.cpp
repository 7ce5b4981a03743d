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

#include "ccpart/pauli.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <unordered_map>

#include "ccpart/errors.hpp"

namespace ccpart {

namespace {

const cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

cplx ipow(int k) { return kIPow[((k % 4) + 4) % 4]; }

void check_same(int a, int b) {
  if (a != b) throw DimensionError("Pauli qubit-count mismatch");
}

void check_masks(const PauliTerm& t) {
  Mask bad = ~low_bits(t.n_qubits);
  if ((t.x | t.z) & bad) throw DimensionError("Pauli mask has bit >= n_qubits");
}

struct MaskPairHash {
  std::size_t operator()(const std::pair<Mask, Mask>& k) const {
    return std::hash<Mask>()(k.first * 0x9E3779B97F4A7C15ULL ^ k.second);
  }
};

}  // namespace

PauliTerm PauliTerm::identity(int n_qubits, cplx coeff) { return {coeff, 0, 0, n_qubits}; }

PauliTerm PauliTerm::from_label(const std::string& label, int n_qubits, cplx coeff) {
  PauliTerm t{coeff, 0, 0, n_qubits};
  std::istringstream in(label);
  std::string tok;
  while (in >> tok) {
    if (tok == "I") continue;
    char letter = tok[0];
    int q = -1;
    try {
      std::size_t used = 0;
      q = std::stoi(tok.substr(1), &used);
      if (used + 1 != tok.size()) q = -1;
    } catch (const std::exception&) {
      q = -1;
    }
    if (q < 0) throw ParseError("bad Pauli factor '" + tok + "'");
    if (q >= n_qubits) throw DimensionError("Pauli factor '" + tok + "' beyond n_qubits");
    Mask b = Mask{1} << q;
    if ((t.x | t.z) & b) throw ParseError("repeated qubit in Pauli label '" + label + "'");
    switch (letter) {
      case 'X': t.x |= b; break;
      case 'Y': t.x |= b; t.z |= b; break;
      case 'Z': t.z |= b; break;
      default: throw ParseError("bad Pauli letter in '" + tok + "'");
    }
  }
  return t;
}

std::string PauliTerm::label() const {
  std::string out;
  for (int q = 0; q < n_qubits; ++q) {
    bool bx = has_bit(x, q), bz = has_bit(z, q);
    if (!bx && !bz) continue;
    if (!out.empty()) out += ' ';
    out += bx ? (bz ? 'Y' : 'X') : 'Z';
    out += std::to_string(q);
  }
  return out.empty() ? "I" : out;
}

PauliTerm multiply(const PauliTerm& a, const PauliTerm& b) {
  check_same(a.n_qubits, b.n_qubits);
  PauliTerm r{a.coeff * b.coeff, a.x ^ b.x, a.z ^ b.z, a.n_qubits};
  int k = popcount(a.x & a.z) + popcount(b.x & b.z) - popcount(r.x & r.z) + 2 * popcount(a.z & b.x);
  r.coeff *= ipow(k);
  return r;
}

bool anticommutes(const PauliTerm& a, const PauliTerm& b) {
  check_same(a.n_qubits, b.n_qubits);
  return ((popcount(a.x & b.z) + popcount(a.z & b.x)) & 1) != 0;
}

bool commutes(const PauliTerm& a, const PauliTerm& b) { return !anticommutes(a, b); }

PauliTerm adjoint(const PauliTerm& a) { return {std::conj(a.coeff), a.x, a.z, a.n_qubits}; }

BasisImage apply_to_basis(const PauliTerm& p, Mask b) {
  int k = popcount(p.x & p.z) + 2 * popcount(p.z & b);
  return {p.coeff * ipow(k), b ^ p.x};
}

PauliSum PauliSum::identity(int n_qubits, cplx coeff) {
  return PauliSum(n_qubits, {PauliTerm::identity(n_qubits, coeff)});
}

void PauliSum::add(const PauliTerm& t) {
  check_same(n_qubits, t.n_qubits);
  check_masks(t);
  terms.push_back(t);
}

PauliSum collect(const PauliSum& s, double tol) {
  std::unordered_map<std::pair<Mask, Mask>, std::size_t, MaskPairHash> slot;
  std::vector<PauliTerm> merged;
  merged.reserve(s.terms.size());
  for (const auto& t : s.terms) {
    check_same(s.n_qubits, t.n_qubits);
    auto [it, fresh] = slot.try_emplace({t.x, t.z}, merged.size());
    if (fresh)
      merged.push_back(t);
    else
      merged[it->second].coeff += t.coeff;
  }
  PauliSum out(s.n_qubits);
  for (const auto& t : merged)
    if (std::abs(t.coeff) >= tol && std::abs(t.coeff) > 0.0) out.terms.push_back(t);
  std::sort(out.terms.begin(), out.terms.end(), [](const PauliTerm& a, const PauliTerm& b) {
    return a.x != b.x ? a.x < b.x : a.z < b.z;
  });
  return out;
}

PauliSum multiply(const PauliSum& a, const PauliSum& b, double tol) {
  check_same(a.n_qubits, b.n_qubits);
  PauliSum out(a.n_qubits);
  out.terms.reserve(a.size() * b.size());
  for (const auto& ta : a.terms)
    for (const auto& tb : b.terms) out.terms.push_back(multiply(ta, tb));
  return collect(out, tol);
}

PauliSum add(const PauliSum& a, const PauliSum& b, double tol) {
  check_same(a.n_qubits, b.n_qubits);
  PauliSum out = a;
  out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
  return collect(out, tol);
}

PauliSum scale(const PauliSum& a, cplx c) {
  PauliSum out = a;
  for (auto& t : out.terms) t.coeff *= c;
  return out;
}

PauliSum adjoint(const PauliSum& a) {
  PauliSum out = a;
  for (auto& t : out.terms) t.coeff = std::conj(t.coeff);
  return out;
}

cplx expectation_on_reference(const PauliSum& s, const ReferenceDeterminant& ref) {
  check_same(s.n_qubits, ref.n_modes);
  cplx acc = 0.0;
  for (const auto& t : s.terms) {
    if (t.x != 0) continue;
    acc += (popcount(t.z & ref.occupation) & 1) ? -t.coeff : t.coeff;
  }
  return acc;
}

cplx expectation_of_product(const PauliSum& a, const PauliSum& b, const ReferenceDeterminant& ref) {
  check_same(a.n_qubits, b.n_qubits);
  check_same(a.n_qubits, ref.n_modes);
  // <ref|P_a^dag P_b|ref> vanishes unless both strings flip the same bits.
  std::map<Mask, cplx> by_flip;
  for (const auto& t : a.terms) by_flip[t.x] += apply_to_basis(t, ref.occupation).phase;
  cplx acc = 0.0;
  for (const auto& t : b.terms) {
    auto it = by_flip.find(t.x);
    if (it == by_flip.end()) continue;
    acc += std::conj(it->second) * apply_to_basis(t, ref.occupation).phase;
  }
  return acc;
}

SparseState apply(const PauliSum& s, const SparseState& v, double tol) {
  SparseState out;
  for (const auto& [b, amp] : v)
    for (const auto& t : s.terms) {
      auto img = apply_to_basis(t, b);
      out[img.state] += img.phase * amp;
    }
  if (tol > 0.0)
    std::erase_if(out, [tol](const auto& kv) { return std::abs(kv.second) < tol; });
  return out;
}

cplx inner(const SparseState& a, const SparseState& b) {
  cplx acc = 0.0;
  for (const auto& [k, va] : a) {
    auto it = b.find(k);
    if (it != b.end()) acc += std::conj(va) * it->second;
  }
  return acc;
}

Eigen::MatrixXcd to_dense_matrix(const PauliTerm& t, int cap) {
  return to_dense_matrix(PauliSum(t.n_qubits, {t}), cap);
}

Eigen::MatrixXcd to_dense_matrix(const PauliSum& s, int cap) {
  if (s.n_qubits > cap) throw ResourceError("dense Pauli matrix above qubit cap");
  const Eigen::Index dim = Eigen::Index{1} << s.n_qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : s.terms)
    for (Eigen::Index col = 0; col < dim; ++col) {
      auto img = apply_to_basis(t, static_cast<Mask>(col));
      m(static_cast<Eigen::Index>(img.state), col) += img.phase;
    }
  return m;
}

std::string format_pauli_sum(const PauliSum& s) {
  std::string out;
  char buf[96];
  for (const auto& t : s.terms) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g ", t.coeff.real(), t.coeff.imag());
    out += buf;
    out += t.label();
    out += '\n';
  }
  return out;
}

PauliSum parse_pauli_sum(const std::string& text, int n_qubits) {
  PauliSum out(n_qubits);
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    double re = 0, im = 0;
    if (!(ls >> re >> im)) throw ParseError("expected 'coeff_re coeff_im label'", lineno);
    std::string rest;
    std::getline(ls, rest);
    try {
      out.add(PauliTerm::from_label(rest, n_qubits, {re, im}));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return out;
}

}  // namespace ccpart
