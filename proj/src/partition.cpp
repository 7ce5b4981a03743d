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

#include "ccpart/partition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "ccpart/errors.hpp"

namespace ccpart {

bool groupable(const PauliTerm& a, const PauliTerm& b, double tol) {
  if (a.n_qubits != b.n_qubits) throw DimensionError("groupable needs equal qubit counts");
  const cplx w = std::conj(a.coeff) * b.coeff;
  const double scale = std::abs(a.coeff) * std::abs(b.coeff);
  if (scale == 0.0) return true;
  if (anticommutes(a, b)) return std::abs(w.imag()) <= tol * scale;
  return std::abs(w.real()) <= tol * scale;
}

std::size_t CompatibilityGraph::edge_count() const {
  std::size_t e = 0;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j) e += adjacent(i, j);
  return e;
}

CompatibilityGraph build_compatibility_graph(const PauliSum& s, double tol) {
  CompatibilityGraph g;
  g.tol = tol;
  g.nodes = s.terms;
  std::stable_sort(g.nodes.begin(), g.nodes.end(), [](const PauliTerm& a, const PauliTerm& b) {
    const double ma = std::abs(a.coeff), mb = std::abs(b.coeff);
    if (ma != mb) return ma > mb;
    if (a.x != b.x) return a.x < b.x;
    return a.z < b.z;
  });
  return g;
}

ColoringStrategy parse_strategy(const std::string& name) {
  if (name == "dsatur") return ColoringStrategy::dsatur;
  if (name == "largest_first") return ColoringStrategy::largest_first;
  throw std::invalid_argument("unknown coloring strategy '" + name + "'");
}

std::string strategy_name(ColoringStrategy s) { return s == ColoringStrategy::dsatur ? "dsatur" : "largest_first"; }

namespace {

struct ColorSet {
  std::vector<std::uint64_t> words;
  bool has(std::size_t c) const { return c / 64 < words.size() && ((words[c / 64] >> (c % 64)) & 1u); }
  bool insert(std::size_t c) {
    if (c / 64 >= words.size()) words.resize(c / 64 + 1, 0);
    if (has(c)) return false;
    words[c / 64] |= std::uint64_t{1} << (c % 64);
    return true;
  }
  std::size_t first_free() const {
    for (std::size_t w = 0; w < words.size(); ++w)
      if (~words[w]) return w * 64 + static_cast<std::size_t>(std::countr_one(words[w]));
    return words.size() * 64;
  }
};

}  // namespace

std::vector<std::vector<std::size_t>> clique_cover(const CompatibilityGraph& g, ColoringStrategy strategy) {
  const std::size_t n = g.size();
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> color(n, none);
  // Degrees in the complement graph.
  std::vector<std::size_t> cdeg(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!g.adjacent(i, j)) {
        ++cdeg[i];
        ++cdeg[j];
      }
  std::vector<ColorSet> used(n);
  auto assign = [&](std::size_t v) {
    color[v] = used[v].first_free();
    return color[v];
  };
  std::size_t n_colors = 0;
  if (strategy == ColoringStrategy::largest_first) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cdeg[a] > cdeg[b]; });
    for (std::size_t v : order) {
      std::size_t c = assign(v);
      n_colors = std::max(n_colors, c + 1);
      for (std::size_t u = 0; u < n; ++u)
        if (u != v && color[u] == none && !g.adjacent(u, v)) used[u].insert(c);
    }
  } else {
    std::vector<std::size_t> sat(n, 0);
    for (std::size_t step = 0; step < n; ++step) {
      std::size_t best = none;
      for (std::size_t v = 0; v < n; ++v) {
        if (color[v] != none) continue;
        if (best == none || sat[v] > sat[best] || (sat[v] == sat[best] && cdeg[v] > cdeg[best])) best = v;
      }
      std::size_t c = assign(best);
      n_colors = std::max(n_colors, c + 1);
      for (std::size_t u = 0; u < n; ++u)
        if (u != best && color[u] == none && !g.adjacent(u, best) && used[u].insert(c)) ++sat[u];
    }
  }
  std::vector<std::vector<std::size_t>> cliques(n_colors);
  for (std::size_t v = 0; v < n; ++v) cliques[color[v]].push_back(v);
  return cliques;
}

PauliSum UnitaryGroup::unitary(int n_qubits) const {
  PauliSum u(n_qubits);
  for (const auto& m : members) {
    PauliTerm t = m;
    t.coeff /= normalizer;
    u.terms.push_back(t);
  }
  return u;
}

PauliSum PartitionedOperator::flatten() const {
  PauliSum s(n_qubits);
  for (const auto& g : groups)
    for (const auto& m : g.members) s.terms.push_back(m);
  return collect(s, 0.0);
}

PartitionedOperator partition(const PauliSum& s, ColoringStrategy strategy) {
  PauliSum c = collect(s);
  PartitionedOperator out;
  out.n_qubits = s.n_qubits;
  out.source_term_count = c.size();
  CompatibilityGraph g = build_compatibility_graph(c);
  for (const auto& clique : clique_cover(g, strategy)) {
    UnitaryGroup grp;
    double norm2 = 0.0;
    for (std::size_t v : clique) {
      grp.members.push_back(g.nodes[v]);
      norm2 += std::norm(g.nodes[v].coeff);
    }
    grp.normalizer = std::sqrt(norm2);
    out.groups.push_back(std::move(grp));
  }
  return out;
}

PartitionedOperator partition_product_one_shot(const PauliSum& a, const PauliSum& b, ColoringStrategy strategy) {
  return partition(multiply(a, b), strategy);
}

FactoredPartition partition_product_factored(const PauliSum& a, const PauliSum& b, ColoringStrategy strategy) {
  if (a.n_qubits != b.n_qubits) throw DimensionError("factor qubit counts differ");
  return {partition(a, strategy), partition(b, strategy)};
}

double unitarity_error_dense(const UnitaryGroup& g, int n_qubits, int cap) {
  if (n_qubits > cap) throw ResourceError("dense unitarity check above qubit cap");
  Eigen::MatrixXcd u = to_dense_matrix(g.unitary(n_qubits), cap);
  Eigen::MatrixXcd d = u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  return d.cwiseAbs().maxCoeff();
}

double unitarity_error_algebraic(const UnitaryGroup& g, int n_qubits) {
  PauliSum u = g.unitary(n_qubits);
  PauliSum p = add(multiply(adjoint(u), u, 0.0), PauliSum::identity(n_qubits, -1.0), 0.0);
  double worst = 0.0;
  for (const auto& t : p.terms) worst = std::max(worst, std::abs(t.coeff));
  return worst;
}

double reconstruction_error(const PartitionedOperator& p, const PauliSum& s) {
  PauliSum d = add(p.flatten(), scale(s, -1.0), 0.0);
  double worst = 0.0;
  for (const auto& t : d.terms) worst = std::max(worst, std::abs(t.coeff));
  return worst;
}

bool cover_valid(const PartitionedOperator& p, double tol) {
  for (const auto& g : p.groups)
    for (std::size_t i = 0; i < g.members.size(); ++i)
      for (std::size_t j = i + 1; j < g.members.size(); ++j)
        if (!groupable(g.members[i], g.members[j], tol)) return false;
  return true;
}

std::string partition_report_header() { return "system,n_qubits,n_paulis,n_unitaries,ratio,strategy,seed"; }

std::string partition_report_line(const PartitionReportRow& r) {
  char buf[128];
  std::snprintf(buf, sizeof buf, ",%d,%zu,%zu,%.10g,", r.n_qubits, r.n_paulis, r.n_unitaries, r.ratio());
  return r.system + buf + r.strategy + "," + std::to_string(r.seed);
}

}  // namespace ccpart
