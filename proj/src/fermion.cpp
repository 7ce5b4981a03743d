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

#include "ccpart/fermion.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "ccpart/errors.hpp"

namespace ccpart {

namespace {

// Position in normal order: creates (descending mode) then annihilates (descending mode).
bool before(const Ladder& a, const Ladder& b) {
  if (a.create != b.create) return a.create;
  return a.mode > b.mode;
}

using TermMap = std::map<std::vector<Ladder>, cplx>;

void normal_order_into(cplx coeff, std::vector<Ladder> f, TermMap& out) {
  // Bubble toward normal order; a_p a_p^+ contractions branch.
  for (;;) {
    bool swapped = false;
    for (std::size_t j = 0; j + 1 < f.size(); ++j) {
      const Ladder a = f[j], b = f[j + 1];
      if (a.create == b.create && a.mode == b.mode) return;  // a_p a_p = 0
      if (before(a, b)) continue;
      if (!a.create && b.create && a.mode == b.mode) {
        std::vector<Ladder> contracted;
        contracted.reserve(f.size() - 2);
        contracted.insert(contracted.end(), f.begin(), f.begin() + static_cast<long>(j));
        contracted.insert(contracted.end(), f.begin() + static_cast<long>(j) + 2, f.end());
        normal_order_into(coeff, std::move(contracted), out);
      }
      std::swap(f[j], f[j + 1]);
      coeff = -coeff;
      swapped = true;
    }
    if (!swapped) break;
  }
  out[f] += coeff;
}

FermionOperator from_map(int n_modes, const TermMap& m, double tol) {
  FermionOperator op(n_modes);
  for (const auto& [f, c] : m)
    if (std::abs(c) >= tol && std::abs(c) > 0.0) op.terms.push_back({c, f});
  return op;
}

void check_modes(int n_modes, const std::vector<Ladder>& f) {
  for (const auto& l : f)
    if (l.mode < 0 || l.mode >= n_modes) throw DimensionError("ladder mode out of range");
}

int sign_below(Mask det, int p) { return (popcount(det & low_bits(p)) & 1) ? -1 : 1; }

}  // namespace

Mask FermionTerm::create_mask() const {
  Mask m = 0;
  for (const auto& l : factors)
    if (l.create) m |= Mask{1} << l.mode;
  return m;
}

Mask FermionTerm::annihilate_mask() const {
  Mask m = 0;
  for (const auto& l : factors)
    if (!l.create) m |= Mask{1} << l.mode;
  return m;
}

FermionOperator FermionOperator::scalar(int n_modes, cplx c) {
  FermionOperator op(n_modes);
  op.terms.push_back({c, {}});
  return op;
}

FermionOperator FermionOperator::single(int n_modes, cplx c, std::vector<Ladder> factors) {
  FermionOperator op(n_modes);
  op.add(c, std::move(factors));
  return op;
}

void FermionOperator::add(cplx c, std::vector<Ladder> factors) {
  check_modes(n_modes, factors);
  terms.push_back({c, std::move(factors)});
}

int FermionOperator::max_degree() const {
  int d = 0;
  for (const auto& t : terms) d = std::max(d, static_cast<int>(t.factors.size()));
  return d;
}

bool is_normal_ordered(const FermionTerm& t) {
  for (std::size_t j = 0; j + 1 < t.factors.size(); ++j)
    if (!before(t.factors[j], t.factors[j + 1])) return false;
  return true;
}

bool is_normal_ordered(const FermionOperator& op) {
  return std::all_of(op.terms.begin(), op.terms.end(),
                     [](const FermionTerm& t) { return is_normal_ordered(t); });
}

FermionOperator normal_order(const FermionOperator& op, double tol) {
  TermMap m;
  for (const auto& t : op.terms) normal_order_into(t.coeff, t.factors, m);
  return from_map(op.n_modes, m, tol);
}

FermionOperator collect(const FermionOperator& op, double tol) {
  TermMap m;
  for (const auto& t : op.terms) m[t.factors] += t.coeff;
  return from_map(op.n_modes, m, tol);
}

FermionOperator adjoint(const FermionOperator& op) {
  FermionOperator out(op.n_modes);
  out.terms.reserve(op.terms.size());
  for (const auto& t : op.terms) {
    FermionTerm a{std::conj(t.coeff), {}};
    a.factors.reserve(t.factors.size());
    for (auto it = t.factors.rbegin(); it != t.factors.rend(); ++it)
      a.factors.push_back({it->mode, !it->create});
    out.terms.push_back(std::move(a));
  }
  return out;
}

FermionOperator add(const FermionOperator& a, const FermionOperator& b) {
  if (a.n_modes != b.n_modes) throw DimensionError("fermion operator mode-count mismatch");
  FermionOperator out = a;
  out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
  return out;
}

FermionOperator scale(const FermionOperator& a, cplx c) {
  FermionOperator out = a;
  for (auto& t : out.terms) t.coeff *= c;
  return out;
}

FermionOperator multiply(const FermionOperator& a, const FermionOperator& b, double tol) {
  if (a.n_modes != b.n_modes) throw DimensionError("fermion operator mode-count mismatch");
  TermMap m;
  std::vector<Ladder> f;
  for (const auto& ta : a.terms)
    for (const auto& tb : b.terms) {
      f.assign(ta.factors.begin(), ta.factors.end());
      f.insert(f.end(), tb.factors.begin(), tb.factors.end());
      normal_order_into(ta.coeff * tb.coeff, f, m);
    }
  return from_map(a.n_modes, m, tol);
}

DetImage apply_factors(const std::vector<Ladder>& factors, Mask det) {
  int sign = 1;
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
    const Mask bit = Mask{1} << it->mode;
    const bool occ = (det & bit) != 0;
    if (occ == it->create) return {0, 0};
    sign *= sign_below(det, it->mode);
    det ^= bit;
  }
  return {sign, det};
}

namespace {

// Pure excitation string creating `c`, annihilating `a`, in normal order.
std::vector<Ladder> pure_string(Mask c, Mask a) {
  std::vector<Ladder> f;
  for (int p = 63; p >= 0; --p)
    if (has_bit(c, p)) f.push_back(cre(p));
  for (int p = 63; p >= 0; --p)
    if (has_bit(a, p)) f.push_back(ann(p));
  return f;
}

FermionOperator reduce_ket(const FermionOperator& op, const ReferenceDeterminant& ref,
                           double tol) {
  TermMap m;
  for (const auto& t : op.terms) {
    if (!is_normal_ordered(t))
      throw ContractViolation("reduce_on_reference requires normal-ordered input");
    const Mask c = t.create_mask(), a = t.annihilate_mask();
    if ((a & ~ref.occupation) != 0) continue;
    if ((c & ref.occupation & ~a) != 0) continue;
    auto img = apply_factors(t.factors, ref.occupation);
    if (img.sign == 0) continue;
    auto f = pure_string(c & ~a, a & ~c);
    auto img2 = apply_factors(f, ref.occupation);
    if (img2.sign == 0 || img2.det != img.det)
      throw ContractViolation("internal: reduced string does not reproduce the image");
    m[f] += t.coeff * static_cast<double>(img.sign * img2.sign);
  }
  return from_map(op.n_modes, m, tol);
}

}  // namespace

FermionOperator reduce_on_reference(const FermionOperator& op, const ReferenceDeterminant& ref,
                                    Side side, double tol) {
  if (op.n_modes != ref.n_modes) throw DimensionError("reference mode-count mismatch");
  if (side == Side::ket) return reduce_ket(op, ref, tol);
  if (!is_normal_ordered(op))
    throw ContractViolation("reduce_on_reference requires normal-ordered input");
  // <ref| op = (op^dagger |ref>)^dagger
  auto k = reduce_ket(normal_order(adjoint(op), 0.0), ref, tol);
  return normal_order(adjoint(k), tol);
}

PauliSum standard_jw(const FermionOperator& op, double tol) {
  const int n = op.n_modes;
  PauliSum out(n);
  for (const auto& t : op.terms) {
    PauliSum acc = PauliSum::identity(n, t.coeff);
    for (const auto& l : t.factors) {
      // a^+ = (Z_<p)(X - iY)/2, a = (Z_<p)(X + iY)/2
      const Mask zs = low_bits(l.mode), b = Mask{1} << l.mode;
      PauliTerm xp{0.5, b, zs, n};
      PauliTerm yp = multiply(PauliTerm{1.0, 0, zs, n}, PauliTerm{cplx(0.0, l.create ? -0.5 : 0.5), b, b, n});
      PauliSum img(n, {xp, yp});
      PauliSum next(n);
      next.terms.reserve(acc.size() * 2);
      for (const auto& pa : acc.terms)
        for (const auto& pb : img.terms) next.terms.push_back(multiply(pa, pb));
      acc = collect(next, 0.0);
    }
    out.terms.insert(out.terms.end(), acc.terms.begin(), acc.terms.end());
  }
  return collect(out, tol);
}

namespace {

PauliTerm sr_excitation_string(const FermionTerm& t, const ReferenceDeterminant& ref,
                               const SrJwOptions& opts) {
  const int n = ref.n_modes;
  const Mask c = t.create_mask(), a = t.annihilate_mask(), touched = c | a;
  PauliTerm p{1.0, touched, 0, n};
  for (int m = 0; m < n; ++m) {
    const Mask bit = Mask{1} << m;
    if (touched & bit) {
      const Branch br = (c & bit) ? opts.create : opts.annihilate;
      if (br == Branch::Y) p.z |= bit;
    } else if (popcount(touched & ~low_bits(m + 1)) & 1) {
      p.z |= bit;
    }
  }
  // Fix the phase so that P|ref> reproduces the Slater-Condon image.
  auto img = apply_factors(t.factors, ref.occupation);
  auto pimg = apply_to_basis(p, ref.occupation);
  if (img.sign == 0 || pimg.state != img.det)
    throw ContractViolation("internal: SR string does not reach the excited determinant");
  p.coeff = t.coeff * static_cast<double>(img.sign) * std::conj(pimg.phase);
  return p;
}

}  // namespace

PauliSum sr_jw(const FermionOperator& op, const ReferenceDeterminant& ref, const SrJwOptions& opts,
               double tol) {
  if (op.n_modes != ref.n_modes) throw DimensionError("reference mode-count mismatch");
  PauliSum out(op.n_modes);
  for (const auto& t : op.terms) {
    if (t.is_scalar()) {
      out.terms.push_back(PauliTerm::identity(op.n_modes, t.coeff));
      continue;
    }
    const Mask c = t.create_mask(), a = t.annihilate_mask();
    const bool once = (c & a) == 0 && popcount(c) + popcount(a) == static_cast<int>(t.factors.size());
    if (!once) throw ContractViolation("sr_jw: term touches a mode more than once");
    const Mask occ = ref.occupation;
    if ((c & occ) == 0 && (a & ~occ) == 0) {
      out.terms.push_back(sr_excitation_string(t, ref, opts));
    } else if ((c & ~occ) == 0 && (a & occ) == 0) {
      // <ref| d = (d^dagger |ref>)^dagger
      FermionOperator single(op.n_modes);
      single.terms.push_back(t);
      FermionOperator adj = adjoint(single);
      out.terms.push_back(adjoint(sr_excitation_string(adj.terms[0], ref, opts)));
    } else {
      throw ContractViolation("sr_jw: term is not a pure excitation or de-excitation string");
    }
  }
  // Each term maps to a distinct string; collect only prunes and orders.
  return collect(out, tol);
}

std::vector<int> Excitation::occ_modes() const {
  std::vector<int> v;
  for (int p = 0; p < 64; ++p)
    if (has_bit(occ, p)) v.push_back(p);
  return v;
}

std::vector<int> Excitation::virt_modes() const {
  std::vector<int> v;
  for (int p = 0; p < 64; ++p)
    if (has_bit(virt, p)) v.push_back(p);
  return v;
}

std::vector<Ladder> Excitation::factors() const {
  std::vector<Ladder> f;
  for (int p : virt_modes()) f.push_back(cre(p));
  auto o = occ_modes();
  for (auto it = o.rbegin(); it != o.rend(); ++it) f.push_back(ann(*it));
  return f;
}

DetImage apply_excitation(const Excitation& e, Mask det) {
  if ((det & e.occ) != e.occ || (det & e.virt) != 0) return {0, 0};
  int sign = 1;
  // a_{i1} acts first, then a_{i2}, ...; then a+_{ak}, ..., a+_{a1}.
  for (Mask m = e.occ; m; m &= m - 1) {
    int p = std::countr_zero(m);
    sign *= sign_below(det, p);
    det ^= Mask{1} << p;
  }
  for (Mask m = e.virt; m;) {
    int p = 63 - std::countl_zero(m);
    sign *= sign_below(det, p);
    det |= Mask{1} << p;
    m ^= Mask{1} << p;
  }
  return {sign, det};
}

DetImage apply_deexcitation(const Excitation& e, Mask det) {
  // tau^dagger = a+_{i1} .. a+_{ik} a_{ak} .. a_{a1}
  if ((det & e.virt) != e.virt || (det & e.occ) != 0) return {0, 0};
  Mask target = (det & ~e.virt) | e.occ;
  auto img = apply_excitation(e, target);
  return {img.sign, target};
}

std::vector<Excitation> excitation_manifold(const ReferenceDeterminant& ref, int max_rank) {
  constexpr Mask kEven = 0x5555555555555555ULL;
  const Mask all = low_bits(ref.n_modes);
  const Mask occ_a = ref.occupation & kEven, occ_b = ref.occupation & ~kEven;
  const Mask vir_a = all & ~ref.occupation & kEven, vir_b = all & ~ref.occupation & ~kEven;
  auto subsets = [](Mask set, int k) {
    std::vector<Mask> out;
    std::function<void(Mask, Mask, int)> rec = [&](Mask rest, Mask cur, int left) {
      if (left == 0) {
        out.push_back(cur);
        return;
      }
      for (Mask m = rest; m; m &= m - 1) {
        Mask bit = m & (~m + 1);
        rec(m & ~bit & ~(bit - 1), cur | bit, left - 1);
      }
    };
    rec(set, 0, k);
    return out;
  };
  std::vector<Excitation> out;
  for (int k = 1; k <= max_rank; ++k)
    for (int ka = 0; ka <= k; ++ka) {
      const int kb = k - ka;
      auto oa = subsets(occ_a, ka), va = subsets(vir_a, ka);
      auto ob = subsets(occ_b, kb), vb = subsets(vir_b, kb);
      for (Mask x1 : oa)
        for (Mask x2 : ob)
          for (Mask y1 : va)
            for (Mask y2 : vb) out.push_back({x1 | x2, y1 | y2});
    }
  std::sort(out.begin(), out.end(), [](const Excitation& a, const Excitation& b) {
    return a.rank() != b.rank() ? a.rank() < b.rank() : a < b;
  });
  return out;
}

double ClusterOperator::get(const Excitation& e) const {
  auto it = amplitudes.find(e);
  return it == amplitudes.end() ? 0.0 : it->second;
}

void ClusterOperator::set(const Excitation& e, double value) {
  if (e.rank() < 1 || e.rank() > max_rank || popcount(e.virt) != e.rank())
    throw ContractViolation("cluster amplitude rank outside 1..max_rank");
  if ((e.occ & ~ref.occupation) != 0 || (e.virt & ref.occupation) != 0 ||
      ((e.occ | e.virt) & ~low_bits(n_modes)) != 0)
    throw ContractViolation("cluster amplitude indices inconsistent with the reference");
  amplitudes[e] = value;
}

void ClusterOperator::set(const std::vector<int>& occ, const std::vector<int>& virt, double value) {
  Excitation e;
  for (int i : occ) e.occ |= Mask{1} << i;
  for (int a : virt) e.virt |= Mask{1} << a;
  if (popcount(e.occ) != static_cast<int>(occ.size()) || popcount(e.virt) != static_cast<int>(virt.size()))
    throw ContractViolation("repeated index in cluster amplitude");
  set(e, value);
}

ClusterOperator ClusterOperator::rank_part(int k) const { return ranks(k, k); }

ClusterOperator ClusterOperator::ranks(int lo, int hi) const {
  ClusterOperator out = *this;
  out.amplitudes.clear();
  for (const auto& [e, v] : amplitudes)
    if (e.rank() >= lo && e.rank() <= hi) out.amplitudes.emplace(e, v);
  return out;
}

ClusterOperator ClusterOperator::scaled(double c) const {
  ClusterOperator out = *this;
  for (auto& [e, v] : out.amplitudes) v *= c;
  return out;
}

ClusterOperator ClusterOperator::dagger() const {
  ClusterOperator out = *this;
  out.deexcitation = !deexcitation;
  return out;
}

ClusterOperator ClusterOperator::pruned(double tol) const {
  ClusterOperator out = *this;
  std::erase_if(out.amplitudes, [tol](const auto& kv) { return std::abs(kv.second) < tol; });
  return out;
}

int ClusterOperator::highest_rank() const {
  int r = 0;
  for (const auto& [e, v] : amplitudes) r = std::max(r, e.rank());
  return r;
}

FermionOperator ClusterOperator::to_fermion() const {
  FermionOperator op(n_modes);
  for (const auto& [e, v] : amplitudes) op.add(v, e.factors());
  return deexcitation ? adjoint(op) : op;
}

void ClusterOperator::validate() const {
  if (ref.n_modes != n_modes) throw ContractViolation("cluster operator reference size mismatch");
  ClusterOperator probe(ref, max_rank, deexcitation);
  for (const auto& [e, v] : amplitudes) probe.set(e, v);
}

ClusterOperator merge(const ClusterOperator& a, const ClusterOperator& b) {
  if (a.ref != b.ref || a.deexcitation != b.deexcitation)
    throw ContractViolation("merge: incompatible cluster operators");
  ClusterOperator out = a;
  out.max_rank = std::max(a.max_rank, b.max_rank);
  for (const auto& [e, v] : b.amplitudes) out.amplitudes[e] += v;
  return out;
}

namespace {

FermionOperator power_step(const FermionOperator& x, const FermionOperator& t) {
  return multiply(x, t, 0.0);
}

}  // namespace

FermionOperator expand_exponential(const ClusterOperator& t, const ExpansionOptions& opts) {
  if (t.deexcitation) throw ContractViolation("expand_exponential expects an excitation operator");
  const int n = t.n_modes;
  const auto I = FermionOperator::identity(n);
  FermionOperator poly;

  if (opts.scheme == ExpansionScheme::nilpotent_exact) {
    const FermionOperator T = normal_order(scale(t.to_fermion(), static_cast<double>(opts.sign)), 0.0);
    poly = I;
    FermionOperator power = I;
    double fact = 1.0;
    for (int k = 1; k <= opts.max_power; ++k) {
      power = power_step(power, T);
      if (reduce_on_reference(power, t.ref, Side::ket, 0.0).empty()) break;
      fact *= k;
      poly = add(poly, scale(power, 1.0 / fact));
    }
  } else {
    if (t.highest_rank() > 2)
      throw ContractViolation("ccsd bra/ket expansions take at most doubles in T");
    const FermionOperator T1 = normal_order(t.rank_part(1).to_fermion(), 0.0);
    const FermionOperator T2 = normal_order(t.rank_part(2).to_fermion(), 0.0);
    const FermionOperator T11 = multiply(T1, T1, 0.0);
    if (opts.scheme == ExpansionScheme::ccsd_bra) {
      poly = add(add(I, scale(T1, -1.0)), add(scale(T2, -1.0), scale(T11, 0.5)));
    } else {
      const FermionOperator T111 = multiply(T11, T1, 0.0);
      poly = add(add(I, T1), add(T2, scale(T11, 0.5)));
      poly = add(poly, multiply(T1, T2, 0.0));
      poly = add(poly, scale(T111, 1.0 / 6.0));
      poly = add(poly, scale(multiply(T2, T2, 0.0), 0.5));
      poly = add(poly, scale(multiply(T111, T1, 0.0), 1.0 / 24.0));
    }
  }
  poly = normal_order(poly);
  if (opts.lambda != nullptr) {
    if (!opts.lambda->deexcitation) throw ContractViolation("lambda prefactor must be a de-excitation operator");
    FermionOperator pre = add(I, normal_order(opts.lambda->to_fermion(), 0.0));
    poly = multiply(pre, poly);
  }
  return poly;
}

std::string format_amplitudes(const ClusterOperator& t) {
  std::ostringstream out;
  out << "n_modes " << t.n_modes << "\n";
  out << "reference " << t.ref.bitstring() << "\n";
  out << "max_rank " << t.max_rank << "\n";
  out << "kind " << (t.deexcitation ? "deexcitation" : "excitation") << "\n";
  char buf[64];
  for (const auto& [e, v] : t.amplitudes) {
    out << e.rank();
    for (int i : e.occ_modes()) out << ' ' << i;
    for (int a : e.virt_modes()) out << ' ' << a;
    std::snprintf(buf, sizeof buf, " %.17g\n", v);
    out << buf;
  }
  return out.str();
}

ClusterOperator parse_amplitudes(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0, n_modes = -1, max_rank = -1;
  bool deex = false;
  std::string refbits;
  struct Rec {
    std::vector<int> occ, virt;
    double value;
    int line;
  };
  std::vector<Rec> recs;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    if (std::isalpha(static_cast<unsigned char>(line[first]))) {
      std::string key, value;
      ls >> key >> value;
      if (!recs.empty()) throw ParseError("header key after amplitude records", lineno);
      try {
        if (key == "n_modes") n_modes = std::stoi(value);
        else if (key == "reference") refbits = value;
        else if (key == "max_rank") max_rank = std::stoi(value);
        else if (key == "kind") {
          if (value != "excitation" && value != "deexcitation") throw ParseError("bad kind", lineno);
          deex = value == "deexcitation";
        } else {
          throw ParseError("unknown header key '" + key + "'", lineno);
        }
      } catch (const std::logic_error&) {
        throw ParseError("bad value for '" + key + "'", lineno);
      }
      continue;
    }
    int rank = 0;
    if (!(ls >> rank) || rank < 1) throw ParseError("expected rank", lineno);
    Rec r{{}, {}, 0.0, lineno};
    r.occ.resize(static_cast<std::size_t>(rank));
    r.virt.resize(static_cast<std::size_t>(rank));
    for (auto& i : r.occ)
      if (!(ls >> i)) throw ParseError("expected occupied index", lineno);
    for (auto& a : r.virt)
      if (!(ls >> a)) throw ParseError("expected virtual index", lineno);
    if (!(ls >> r.value)) throw ParseError("expected amplitude value", lineno);
    std::string extra;
    if (ls >> extra) throw ParseError("trailing tokens", lineno);
    recs.push_back(std::move(r));
  }
  if (n_modes <= 0 || refbits.empty()) throw ParseError("missing n_modes or reference header");
  auto ref = ReferenceDeterminant::from_bitstring(refbits);
  if (ref.n_modes != n_modes) throw ParseError("reference length differs from n_modes");
  if (max_rank < 0)
    for (const auto& r : recs) max_rank = std::max(max_rank, static_cast<int>(r.occ.size()));
  ClusterOperator t(ref, std::max(max_rank, 0), deex);
  for (const auto& r : recs) {
    for (std::size_t k = 1; k < r.occ.size(); ++k)
      if (r.occ[k] <= r.occ[k - 1] || r.virt[k] <= r.virt[k - 1])
        throw ParseError("index tuples must be strictly increasing", r.line);
    try {
      t.set(r.occ, r.virt, r.value);
    } catch (const std::logic_error& e) {
      throw ParseError(e.what(), r.line);
    }
  }
  return t;
}

void write_amplitudes(const std::string& path, const ClusterOperator& t) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << format_amplitudes(t);
}

ClusterOperator read_amplitudes(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  try {
    return parse_amplitudes(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace ccpart
