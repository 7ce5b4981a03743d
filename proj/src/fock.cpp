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

#include "ccpart/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "ccpart/errors.hpp"

namespace ccpart {

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

// Subsets of {0..n-1} with k elements, ascending.
std::vector<Mask> combinations(int n, int k) {
  std::vector<Mask> out;
  if (k == 0) {
    out.push_back(0);
    return out;
  }
  Mask c = low_bits(k);
  const Mask limit = Mask{1} << n;
  while (c < limit) {
    out.push_back(c);
    Mask u = c & (~c + 1);
    Mask v = c + u;
    if (v == 0) break;
    c = v + (((v ^ c) / u) >> 2);
  }
  return out;
}

Mask spread(Mask spatial, int offset, int n_modes) {
  Mask m = 0;
  for (int p = 0; 2 * p + offset < n_modes; ++p)
    if (has_bit(spatial, p)) m |= Mask{1} << (2 * p + offset);
  return m;
}

}  // namespace

SectorBasis::SectorBasis(int n_modes, int n_alpha, int n_beta, std::size_t cap)
    : n_modes_(n_modes), n_alpha_(n_alpha), n_beta_(n_beta) {
  if (n_modes < 0 || n_modes > kMaxModes) throw DimensionError("mode count out of range");
  const int n_even = (n_modes + 1) / 2, n_odd = n_modes / 2;
  if (n_alpha < 0 || n_beta < 0 || n_alpha > n_even || n_beta > n_odd)
    throw DimensionError("infeasible sector (" + std::to_string(n_modes) + "," + std::to_string(n_alpha) + "," +
                         std::to_string(n_beta) + ")");
  const double dim = binomial(n_even, n_alpha) * binomial(n_odd, n_beta);
  if (dim > static_cast<double>(cap))
    throw ResourceError("sector dimension " + std::to_string(static_cast<long long>(dim)) + " exceeds cap " +
                        std::to_string(cap));
  auto ca = combinations(n_even, n_alpha), cb = combinations(n_odd, n_beta);
  dets_.reserve(static_cast<std::size_t>(dim));
  for (Mask a : ca) {
    Mask sa = spread(a, 0, n_modes);
    for (Mask b : cb) dets_.push_back(sa | spread(b, 1, n_modes));
  }
  std::sort(dets_.begin(), dets_.end());
  index_.reserve(dets_.size());
  for (std::size_t i = 0; i < dets_.size(); ++i) index_.emplace(dets_[i], i);
}

long SectorBasis::find(Mask det) const {
  auto it = index_.find(det);
  return it == index_.end() ? -1 : static_cast<long>(it->second);
}

bool SectorBasis::same_sector(const SectorBasis& o) const {
  return n_modes_ == o.n_modes_ && n_alpha_ == o.n_alpha_ && n_beta_ == o.n_beta_;
}

BasisPtr sector_basis(int n_modes, int n_alpha, int n_beta, std::size_t cap) {
  return std::make_shared<const SectorBasis>(n_modes, n_alpha, n_beta, cap);
}

BasisPtr sector_basis_for(const ReferenceDeterminant& ref, std::size_t cap) {
  return sector_basis(ref.n_modes, ref.n_alpha(), ref.n_beta(), cap);
}

StateVector::StateVector(BasisPtr b) : basis(std::move(b)) {
  amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->size()));
}

StateVector::StateVector(BasisPtr b, Eigen::VectorXcd a) : basis(std::move(b)), amps(std::move(a)) {
  if (amps.size() != static_cast<Eigen::Index>(basis->size())) throw DimensionError("amplitude length mismatch");
}

StateVector StateVector::basis_state(BasisPtr b, Mask det, cplx c) {
  StateVector v(b);
  long i = b->find(det);
  if (i < 0) throw DimensionError("determinant " + mask_to_bitstring(det, b->n_modes()) + " not in sector");
  v.amps(i) = c;
  return v;
}

cplx StateVector::at(Mask det) const {
  long i = basis->find(det);
  return i < 0 ? cplx{} : amps(i);
}

static void check_same(const StateVector& a, const StateVector& b) {
  if (!a.basis || !b.basis) throw DimensionError("state without basis");
  if (a.basis != b.basis && !a.basis->same_sector(*b.basis)) throw DimensionError("states live in different sectors");
}

StateVector operator+(const StateVector& a, const StateVector& b) {
  check_same(a, b);
  return StateVector(a.basis, a.amps + b.amps);
}

StateVector operator-(const StateVector& a, const StateVector& b) {
  check_same(a, b);
  return StateVector(a.basis, a.amps - b.amps);
}

StateVector operator*(cplx c, const StateVector& a) { return StateVector(a.basis, c * a.amps); }

namespace {

using Triplet = Eigen::Triplet<cplx>;

SectorMatrix from_triplets(const SectorBasis& basis, std::vector<Triplet>& trip) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  SectorMatrix m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());
  m.makeCompressed();
  return m;
}

[[noreturn]] void leave_sector(const SectorBasis& basis, Mask from, Mask to) {
  throw ContractViolation("operator maps " + mask_to_bitstring(from, basis.n_modes()) + " outside the sector (to " +
                          mask_to_bitstring(to, basis.n_modes()) + ")");
}

}  // namespace

SectorMatrix sector_matrix(const FermionOperator& op, const SectorBasis& basis) {
  if (op.n_modes != basis.n_modes()) throw DimensionError("operator and sector mode counts differ");
  std::vector<Triplet> trip;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const Mask d = basis.det(j);
    for (const auto& t : op.terms) {
      if (t.coeff == cplx{}) continue;
      auto img = apply_factors(t.factors, d);
      if (img.sign == 0) continue;
      long i = basis.find(img.det);
      if (i < 0) leave_sector(basis, d, img.det);
      trip.emplace_back(i, static_cast<Eigen::Index>(j), static_cast<double>(img.sign) * t.coeff);
    }
  }
  return from_triplets(basis, trip);
}

SectorMatrix sector_matrix(const PauliSum& s, const SectorBasis& basis) {
  if (s.n_qubits != basis.n_modes()) throw DimensionError("Pauli sum and sector qubit counts differ");
  std::vector<Triplet> trip;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const Mask d = basis.det(j);
    // Single strings may leave the sector while their sum does not.
    std::map<Mask, cplx> outside;
    double scale = 0.0;
    for (const auto& t : s.terms) {
      if (t.coeff == cplx{}) continue;
      auto img = apply_to_basis(t, d);
      scale = std::max(scale, std::abs(img.phase));
      long i = basis.find(img.state);
      if (i < 0) {
        outside[img.state] += img.phase;
        continue;
      }
      trip.emplace_back(i, static_cast<Eigen::Index>(j), img.phase);
    }
    for (const auto& [m, c] : outside)
      if (std::abs(c) > 1e-12 * std::max(scale, 1.0)) leave_sector(basis, d, m);
  }
  return from_triplets(basis, trip);
}

SectorMatrix sector_matrix(const ClusterOperator& t, const SectorBasis& basis) {
  if (t.n_modes != basis.n_modes()) throw DimensionError("cluster operator and sector mode counts differ");
  std::vector<Triplet> trip;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const Mask d = basis.det(j);
    for (const auto& [e, amp] : t.amplitudes) {
      if (amp == 0.0) continue;
      auto img = t.deexcitation ? apply_deexcitation(e, d) : apply_excitation(e, d);
      if (img.sign == 0) continue;
      long i = basis.find(img.det);
      if (i < 0) leave_sector(basis, d, img.det);
      trip.emplace_back(i, static_cast<Eigen::Index>(j), cplx(img.sign * amp));
    }
  }
  return from_triplets(basis, trip);
}

StateVector apply_matrix(const SectorMatrix& m, const StateVector& v) {
  if (m.cols() != v.amps.size()) throw DimensionError("matrix and state sizes differ");
  return StateVector(v.basis, m * v.amps);
}

StateVector apply_fermion(const FermionOperator& op, const StateVector& v) {
  return ccpart::apply_matrix(sector_matrix(op, *v.basis), v);
}

// Only the support of v matters: reference-guided strings are valid on the
// reference and would leave the sector from other determinants.
StateVector apply_pauli(const PauliSum& s, const StateVector& v) {
  const SectorBasis& basis = *v.basis;
  if (s.n_qubits != basis.n_modes()) throw DimensionError("Pauli sum and sector qubit counts differ");
  StateVector out(v.basis);
  std::map<Mask, cplx> outside;
  double scale = 0.0;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const cplx a = v.amps(static_cast<Eigen::Index>(j));
    if (a == cplx{}) continue;
    const Mask d = basis.det(j);
    for (const auto& t : s.terms) {
      if (t.coeff == cplx{}) continue;
      auto img = apply_to_basis(t, d);
      scale = std::max(scale, std::abs(img.phase * a));
      long i = basis.find(img.state);
      if (i < 0)
        outside[img.state] += img.phase * a;
      else
        out.amps(i) += img.phase * a;
    }
  }
  for (const auto& [m, c] : outside)
    if (std::abs(c) > 1e-12 * std::max(scale, 1.0))
      throw ContractViolation("operator maps the state outside the sector (to " + mask_to_bitstring(m, basis.n_modes()) +
                              ")");
  return out;
}

StateVector apply_cluster(const ClusterOperator& t, const StateVector& v) { return ccpart::apply_matrix(sector_matrix(t, *v.basis), v); }

StateVector apply_exponential(const SectorMatrix& m, const StateVector& v, int sign, int max_terms) {
  Eigen::VectorXcd term = v.amps, out = v.amps;
  const double s = sign >= 0 ? 1.0 : -1.0;
  for (int k = 1; k <= max_terms; ++k) {
    term = (s / k) * (m * term);
    if ((term.array() == cplx{}).all()) break;
    out += term;
    if (term.norm() <= 1e-17 * out.norm()) break;
  }
  return StateVector(v.basis, std::move(out));
}

StateVector apply_cluster_exponential(const ClusterOperator& t, const StateVector& v, int sign) {
  return apply_exponential(sector_matrix(t, *v.basis), v, sign);
}

namespace {

void fix_phase(Eigen::VectorXcd& x) {
  Eigen::Index best = 0;
  double mag = -1.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double a = std::abs(x(i));
    if (a > mag + 1e-12) {
      mag = a;
      best = i;
    }
  }
  if (mag > 0) x *= std::conj(x(best)) / std::abs(x(best));
}

void check_hermitian(const SectorMatrix& h) {
  SectorMatrix ha = h.adjoint();
  SectorMatrix d = h - ha;
  double worst = 0.0, scale = 1.0;
  for (int k = 0; k < d.outerSize(); ++k)
    for (SectorMatrix::InnerIterator it(d, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  for (int k = 0; k < h.outerSize(); ++k)
    for (SectorMatrix::InnerIterator it(h, k); it; ++it) scale = std::max(scale, std::abs(it.value()));
  if (worst > 1e-10 * scale) throw ContractViolation("Hamiltonian is not Hermitian in the sector");
}

}  // namespace

GroundState exact_ground_state(const FermionOperator& h, BasisPtr basis, const EigenOptions& opts) {
  return exact_ground_state(sector_matrix(h, *basis), basis, opts);
}

GroundState exact_ground_state(const SectorMatrix& h, BasisPtr basis, const EigenOptions& opts) {
  check_hermitian(h);
  const Eigen::Index n = h.rows();
  if (n == 0) throw DimensionError("empty sector");
  GroundState gs;
  if (n <= opts.dense_cap) {
    Eigen::MatrixXcd dense = Eigen::MatrixXcd(h);
    Eigen::VectorXcd x;
    if ((dense.imag().array() == 0.0).all()) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense.real());
      gs.energy = es.eigenvalues()(0);
      x = es.eigenvectors().col(0).cast<cplx>();
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense);
      gs.energy = es.eigenvalues()(0);
      x = es.eigenvectors().col(0);
    }
    fix_phase(x);
    gs.residual = (h * x - gs.energy * x).norm();
    gs.state = StateVector(basis, std::move(x));
    return gs;
  }

  // Davidson with diagonal preconditioner.
  gs.dense = false;
  Eigen::VectorXd diag(n);
  for (Eigen::Index i = 0; i < n; ++i) diag(i) = h.coeff(i, i).real();
  Eigen::Index start;
  diag.minCoeff(&start);
  std::vector<Eigen::VectorXcd> V, W;
  Eigen::VectorXcd v0 = Eigen::VectorXcd::Zero(n);
  v0(start) = 1.0;
  V.push_back(v0);
  W.push_back(h * v0);
  Eigen::VectorXcd x;
  double theta = 0.0, rnorm = 0.0;
  for (int it = 1; it <= opts.max_iter; ++it) {
    const int k = static_cast<int>(V.size());
    Eigen::MatrixXcd T(k, k);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) T(a, b) = V[a].dot(W[b]);
    T = 0.5 * (T + T.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(T);
    theta = es.eigenvalues()(0);
    Eigen::VectorXcd s = es.eigenvectors().col(0);
    x = Eigen::VectorXcd::Zero(n);
    Eigen::VectorXcd hx = Eigen::VectorXcd::Zero(n);
    for (int a = 0; a < k; ++a) {
      x += s(a) * V[a];
      hx += s(a) * W[a];
    }
    Eigen::VectorXcd r = hx - theta * x;
    rnorm = r.norm();
    gs.iterations = it;
    if (rnorm < opts.tol) break;
    if (k >= opts.max_subspace) {
      x.normalize();
      V.assign(1, x);
      W.assign(1, h * x);
      continue;
    }
    Eigen::VectorXcd t(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      double d = theta - diag(i);
      if (std::abs(d) < 1e-8) d = d < 0 ? -1e-8 : 1e-8;
      t(i) = r(i) / d;
    }
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : V) t -= q.dot(t) * q;
    double tn = t.norm();
    if (tn < 1e-14) {
      // Preconditioned direction collapsed; fall back to the raw residual.
      t = r;
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : V) t -= q.dot(t) * q;
      tn = t.norm();
      if (tn < 1e-14) break;
    }
    t /= tn;
    V.push_back(t);
    W.push_back(h * t);
  }
  if (rnorm >= opts.tol) throw ConvergenceError("Davidson did not converge", rnorm);
  x.normalize();
  fix_phase(x);
  gs.energy = theta;
  gs.residual = rnorm;
  gs.state = StateVector(basis, std::move(x));
  return gs;
}

int excitation_rank(Mask det, const ReferenceDeterminant& ref) { return popcount(ref.occupation & ~det); }

StateVector project(const StateVector& v, const ReferenceDeterminant& ref, Manifold m, int max_rank) {
  if (ref.n_modes != v.basis->n_modes()) throw DimensionError("reference and sector mode counts differ");
  StateVector out(v.basis, v.amps);
  for (std::size_t i = 0; i < v.basis->size(); ++i) {
    const int r = excitation_rank(v.basis->det(i), ref);
    bool keep = false;
    switch (m) {
      case Manifold::P: keep = r == 0; break;
      case Manifold::QA: keep = r >= 1 && r <= max_rank; break;
      case Manifold::QR: keep = r > max_rank; break;
      case Manifold::rank: keep = r == max_rank; break;
    }
    if (!keep) out.amps(static_cast<Eigen::Index>(i)) = 0.0;
  }
  return out;
}

cplx overlap(const StateVector& a, const StateVector& b) {
  check_same(a, b);
  return a.amps.dot(b.amps);
}

std::string format_state(const StateVector& v, double tol) {
  std::ostringstream out;
  char buf[96];
  for (std::size_t i = 0; i < v.basis->size(); ++i) {
    cplx a = v.amps(static_cast<Eigen::Index>(i));
    if (tol > 0 && std::abs(a) <= tol) continue;
    std::snprintf(buf, sizeof buf, " %.17g %.17g\n", a.real(), a.imag());
    out << mask_to_bitstring(v.basis->det(i), v.basis->n_modes()) << buf;
  }
  return out.str();
}

StateVector parse_state(const std::string& text, BasisPtr basis) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::vector<std::pair<Mask, cplx>> rows;
  int n_modes = -1, na = 0, nb = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string bits, re, im, extra;
    if (!(ls >> bits)) continue;
    if (!(ls >> re >> im) || (ls >> extra)) throw ParseError("expected 'bitstring re im'", lineno);
    if (bits.find_first_not_of("01") != std::string::npos) throw ParseError("bad bitstring '" + bits + "'", lineno);
    const int n = static_cast<int>(bits.size());
    if (n > kMaxModes) throw ParseError("bitstring longer than 64 modes", lineno);
    int a = 0, b = 0;
    for (int p = 0; p < n; ++p)
      if (bits[static_cast<std::size_t>(p)] == '1') (p % 2 ? b : a)++;
    if (n_modes < 0) {
      n_modes = n;
      na = a;
      nb = b;
    } else if (n != n_modes || a != na || b != nb) {
      throw ParseError("determinant outside the sector of the first line", lineno);
    }
    double vr, vi;
    try {
      vr = std::stod(re);
      vi = std::stod(im);
    } catch (const std::exception&) {
      throw ParseError("bad amplitude", lineno);
    }
    rows.emplace_back(bitstring_to_mask(bits), cplx(vr, vi));
  }
  if (n_modes < 0 && !basis) throw ParseError("empty state file");
  if (!basis) basis = sector_basis(n_modes, na, nb);
  StateVector v(basis);
  for (const auto& [d, c] : rows) {
    long i = basis->find(d);
    if (i < 0) throw ParseError("determinant " + mask_to_bitstring(d, basis->n_modes()) + " not in sector");
    v.amps(i) += c;
  }
  return v;
}

void write_state(const std::string& path, const StateVector& v) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << format_state(v);
}

StateVector read_state(const std::string& path, BasisPtr basis) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_state(ss.str(), std::move(basis));
}

}  // namespace ccpart
