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


#include <gtest/gtest.h>

#include <random>

#include "ccpart/cc.hpp"
#include "ccpart/fock.hpp"
#include "ccpart/partition.hpp"
#include "oracle.hpp"

using namespace ccpart;
using oracle::cplx;

namespace {

const cplx I(0, 1);

PauliSum sum_of(int n, std::initializer_list<std::pair<const char*, cplx>> terms) {
  PauliSum s(n);
  for (const auto& [label, c] : terms) s.add(PauliTerm::from_label(label, n, c));
  return s;
}

// Random sums whose coefficients are drawn from {+-1, +-i} times a magnitude,
// so both branches of the groupability condition occur.
PauliSum random_sum(std::mt19937_64& rng, int n, int terms) {
  std::uniform_int_distribution<Mask> bits(0, low_bits(n));
  std::uniform_int_distribution<int> ph(0, 3);
  std::uniform_real_distribution<double> mag(0.1, 1.0);
  const cplx phases[] = {1.0, I, -1.0, -I};
  PauliSum s(n);
  for (int k = 0; k < terms; ++k) s.add({phases[ph(rng)] * mag(rng), bits(rng), bits(rng), n});
  return collect(s);
}

void expect_sound(const PartitionedOperator& p, const PauliSum& s) {
  EXPECT_LT(reconstruction_error(p, s), 1e-12);
  EXPECT_TRUE(cover_valid(p));
  EXPECT_LE(p.group_count(), p.source_term_count);
  for (const auto& g : p.groups) {
    EXPECT_LT(unitarity_error_algebraic(g, p.n_qubits), 1e-12);
    if (p.n_qubits <= 8) EXPECT_LT(unitarity_error_dense(g, p.n_qubits), 1e-12);
  }
}

std::vector<std::vector<bool>> adjacency(const CompatibilityGraph& g) {
  std::vector<std::vector<bool>> a(g.size(), std::vector<bool>(g.size(), false));
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) a[i][j] = g.adjacent(i, j);
  return a;
}

}  // namespace

TEST(Groupable, Examples) {
  EXPECT_TRUE(groupable(PauliTerm::from_label("X0", 1, 1.0), PauliTerm::from_label("Z0", 1, 2.0)));
  EXPECT_FALSE(groupable(PauliTerm::from_label("X0", 1, 1.0), PauliTerm::from_label("Z0", 1, I)));
  EXPECT_FALSE(groupable(PauliTerm::from_label("X0 X1", 2), PauliTerm::from_label("Z0 Z1", 2)));
  EXPECT_TRUE(groupable(PauliTerm::from_label("X0 X1", 2), PauliTerm::from_label("Z0 Z1", 2, I)));
}

TEST(Groupable, MatchesDenseCondition) {
  std::mt19937_64 rng(127);
  for (int trial = 0; trial < 200; ++trial) {
    auto s = random_sum(rng, 3, 2);
    if (s.size() < 2) continue;
    const auto &a = s.terms[0], &b = s.terms[1];
    Eigen::MatrixXcd A = to_dense_matrix(PauliSum(3, {a})), B = to_dense_matrix(PauliSum(3, {b}));
    const bool zero = (A.adjoint() * B + B.adjoint() * A).cwiseAbs().maxCoeff() < 1e-12;
    EXPECT_EQ(groupable(a, b), zero);
  }
}

TEST(Graph, SmallShapes) {
  auto g = build_compatibility_graph(sum_of(1, {{"X0", 1.0}, {"Y0", 1.0}, {"Z0", 1.0}}));
  EXPECT_EQ(g.edge_count(), 3u);
  auto z = build_compatibility_graph(sum_of(3, {{"Z0", 1.0}, {"Z1", 0.5}, {"Z0 Z2", 0.3}, {"Z1 Z2", -0.2}}));
  EXPECT_EQ(z.edge_count(), 0u);
  EXPECT_EQ(clique_cover(z, ColoringStrategy::dsatur).size(), 4u);
  EXPECT_EQ(clique_cover(g, ColoringStrategy::dsatur).size(), 1u);
  EXPECT_EQ(clique_cover(g, ColoringStrategy::largest_first).size(), 1u);
}

TEST(Graph, NodeOrderDeterministic) {
  auto g = build_compatibility_graph(sum_of(2, {{"Z0", 0.5}, {"X1", -2.0}, {"X0", 0.5}, {"Y0", 1.0}}));
  ASSERT_EQ(g.size(), 4u);
  EXPECT_EQ(g.nodes[0].label(), "X1");
  EXPECT_EQ(g.nodes[1].label(), "Y0");
  EXPECT_EQ(g.nodes[2].label(), "Z0");
  EXPECT_EQ(g.nodes[3].label(), "X0");
}

TEST(CliqueCover, AgainstExhaustiveMinimum) {
  std::mt19937_64 rng(131);
  for (int trial = 0; trial < 60; ++trial) {
    auto s = random_sum(rng, 3, 12);
    auto g = build_compatibility_graph(s);
    const int best = oracle::minimum_clique_cover(adjacency(g));
    for (auto st : {ColoringStrategy::dsatur, ColoringStrategy::largest_first}) {
      auto cover = clique_cover(g, st);
      std::vector<int> seen(g.size(), 0);
      for (const auto& c : cover) {
        for (std::size_t i = 0; i < c.size(); ++i) {
          ++seen[c[i]];
          for (std::size_t j = i + 1; j < c.size(); ++j) EXPECT_TRUE(g.adjacent(c[i], c[j]));
        }
      }
      for (int k : seen) EXPECT_EQ(k, 1);
      EXPECT_GE(static_cast<int>(cover.size()), best);
      // Greedy colorings never exceed max complement degree + 1.
      std::size_t maxdeg = 0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        std::size_t d = 0;
        for (std::size_t j = 0; j < g.size(); ++j) d += i != j && !g.adjacent(i, j);
        maxdeg = std::max(maxdeg, d);
      }
      EXPECT_LE(cover.size(), maxdeg + 1);
    }
  }
}

TEST(CliqueCover, FiftyNodeValidity) {
  std::mt19937_64 rng(137);
  for (int trial = 0; trial < 10; ++trial) {
    auto s = random_sum(rng, 5, 50);
    for (auto st : {ColoringStrategy::dsatur, ColoringStrategy::largest_first}) expect_sound(partition(s, st), s);
  }
}

TEST(Partition, SingleTermAndReflection) {
  auto one = sum_of(2, {{"X0 Z1", cplx(0.0, -0.5)}});
  auto p = partition(one);
  ASSERT_EQ(p.group_count(), 1u);
  EXPECT_NEAR(p.groups[0].normalizer, 0.5, 1e-15);
  expect_sound(p, one);

  auto refl = sum_of(1, {{"X0", 0.6}, {"Z0", 0.8}});
  auto q = partition(refl);
  ASSERT_EQ(q.group_count(), 1u);
  EXPECT_NEAR(q.groups[0].normalizer, 1.0, 1e-15);
  auto u = to_dense_matrix(q.groups[0].unitary(1));
  EXPECT_LT((u * u - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Partition, EmptyInput) {
  auto p = partition(PauliSum(4));
  EXPECT_EQ(p.group_count(), 0u);
  EXPECT_EQ(p.source_term_count, 0u);
}

TEST(Partition, H2Hamiltonian) {
  auto h = to_fermion_operator(read_fcidump(oracle::fixture("h2_sto3g.fcidump")));
  auto hp = standard_jw(h.op);
  for (auto st : {ColoringStrategy::dsatur, ColoringStrategy::largest_first}) {
    auto p = partition(hp, st);
    EXPECT_EQ(p.source_term_count, 15u);
    EXPECT_LE(p.group_count(), 11u);
    expect_sound(p, hp);
  }
}

TEST(Partition, H4KetState) {
  auto h = to_fermion_operator(read_fcidump(oracle::fixture("h4_chain_sto3g.fcidump")));
  auto sol = solve_cc(h.op, h.ref, 2);
  ExpansionOptions o;
  o.scheme = ExpansionScheme::ccsd_ket;
  auto ket = sr_jw(reduce_on_reference(normal_order(expand_exponential(sol.t, o)), h.ref, Side::ket), h.ref);
  EXPECT_EQ(ket.size(), 20u);
  auto p = partition(ket);
  expect_sound(p, ket);
  EXPECT_LT(p.group_count(), 20u);
  std::printf("H4 ket: %zu terms -> %zu unitaries\n", p.source_term_count, p.group_count());
}

TEST(PartitionProduct, IdentityFactor) {
  std::mt19937_64 rng(139);
  auto s = random_sum(rng, 4, 30);
  auto a = partition(s), b = partition_product_one_shot(PauliSum::identity(4), s);
  EXPECT_EQ(a.group_count(), b.group_count());
  EXPECT_LT(reconstruction_error(b, s), 1e-15);
}

TEST(PartitionProduct, OneShotAndFactoredAgreeOnReference) {
  auto h = build_siam(SiamParams::symmetric(1.0));
  SolverOptions so;
  so.method = SolverOptions::Method::newton;
  so.guess = SolverOptions::Guess::ci;
  auto sol = solve_cc(h.op, h.ref, 2, so);
  auto hp = standard_jw(h.op);
  auto ket = sr_jw(reduce_on_reference(normal_order(expand_exponential(sol.t, {})), h.ref, Side::ket), h.ref);
  auto one = partition_product_one_shot(hp, ket);
  auto fac = partition_product_factored(hp, ket);
  expect_sound(one, collect(multiply(hp, ket)));
  expect_sound(fac.left, hp);
  expect_sound(fac.right, ket);
  EXPECT_LT(one.group_count(), fac.left.source_term_count * fac.right.group_count());
  auto b = sector_basis_for(h.ref);
  auto phi = StateVector::basis_state(b, h.ref.occupation);
  auto v1 = apply_pauli(one.flatten(), phi);
  auto v2 = apply_pauli(fac.left.flatten(), apply_pauli(fac.right.flatten(), phi));
  EXPECT_LT((v1.amps - v2.amps).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(fac.measurement_terms(), fac.left.group_count() * fac.right.group_count());
}

TEST(Report, CsvLayout) {
  EXPECT_EQ(partition_report_header(), "system,n_qubits,n_paulis,n_unitaries,ratio,strategy,seed");
  PartitionReportRow r{"h2", 4, 15, 11, "dsatur", 7};
  EXPECT_EQ(partition_report_line(r), "h2,4,15,11,0.7333333333,dsatur,7");
  PartitionReportRow z{"empty", 4, 0, 0, "dsatur", 0};
  EXPECT_EQ(partition_report_line(z), "empty,4,0,0,0,dsatur,0");
  EXPECT_EQ(parse_strategy("largest_first"), ColoringStrategy::largest_first);
  EXPECT_THROW(parse_strategy("greedy"), std::invalid_argument);
}
