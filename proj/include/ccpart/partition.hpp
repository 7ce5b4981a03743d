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

#include "ccpart/pauli.hpp"

namespace ccpart {

inline constexpr double kGroupTolerance = 1e-10;

// Two weighted strings can share a unitary when p1* p2 P1 P2 + p2* p1 P2 P1 = 0:
// anticommuting with real p1* p2, or commuting with imaginary p1* p2.
bool groupable(const PauliTerm& a, const PauliTerm& b, double tol = kGroupTolerance);

struct CompatibilityGraph {
  // Nodes ordered by descending |coeff|, then (x, z).
  std::vector<PauliTerm> nodes;
  double tol = kGroupTolerance;

  std::size_t size() const { return nodes.size(); }
  // Edges are evaluated on demand; dense storage would not fit product sums.
  bool adjacent(std::size_t i, std::size_t j) const { return i != j && groupable(nodes[i], nodes[j], tol); }
  std::size_t edge_count() const;
};

CompatibilityGraph build_compatibility_graph(const PauliSum& s, double tol = kGroupTolerance);

enum class ColoringStrategy { dsatur, largest_first };

ColoringStrategy parse_strategy(const std::string& name);
std::string strategy_name(ColoringStrategy s);

// Proper coloring of the complement graph, returned as cliques of g (node
// indices, ascending within each clique; cliques ordered by color).
std::vector<std::vector<std::size_t>> clique_cover(const CompatibilityGraph& g, ColoringStrategy strategy);

struct UnitaryGroup {
  std::vector<PauliTerm> members;
  double normalizer = 0.0;  // sqrt(sum |p|^2)

  // (1/u) sum p_s P_s
  PauliSum unitary(int n_qubits) const;
};

struct PartitionedOperator {
  int n_qubits = 0;
  std::vector<UnitaryGroup> groups;
  std::size_t source_term_count = 0;

  std::size_t group_count() const { return groups.size(); }
  // sum_l u_l U_l
  PauliSum flatten() const;
};

PartitionedOperator partition(const PauliSum& s, ColoringStrategy strategy = ColoringStrategy::dsatur);

struct FactoredPartition {
  PartitionedOperator left, right;
  std::size_t measurement_terms() const { return left.group_count() * right.group_count(); }
};

// a*b collected, then partitioned as one sum.
PartitionedOperator partition_product_one_shot(const PauliSum& a, const PauliSum& b,
                                               ColoringStrategy strategy = ColoringStrategy::dsatur);
FactoredPartition partition_product_factored(const PauliSum& a, const PauliSum& b,
                                             ColoringStrategy strategy = ColoringStrategy::dsatur);

// max |U^dagger U - I| by dense embedding (n_qubits <= cap).
double unitarity_error_dense(const UnitaryGroup& g, int n_qubits, int cap = 8);
// Same through Pauli algebra (no size limit).
double unitarity_error_algebraic(const UnitaryGroup& g, int n_qubits);
// Largest coefficient difference between flatten() and s.
double reconstruction_error(const PartitionedOperator& p, const PauliSum& s);
bool cover_valid(const PartitionedOperator& p, double tol = kGroupTolerance);

struct PartitionReportRow {
  std::string system;
  int n_qubits = 0;
  std::size_t n_paulis = 0;
  std::size_t n_unitaries = 0;
  std::string strategy;
  unsigned long long seed = 0;

  double ratio() const { return n_paulis ? static_cast<double>(n_unitaries) / n_paulis : 0.0; }
};

std::string partition_report_header();
std::string partition_report_line(const PartitionReportRow& r);

}  // namespace ccpart
