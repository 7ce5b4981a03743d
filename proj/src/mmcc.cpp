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

#include "ccpart/mmcc.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "ccpart/errors.hpp"

namespace ccpart {

std::string kind_name(StateKind k) {
  switch (k) {
    case StateKind::omega: return "omega";
    case StateKind::gamma: return "gamma";
    case StateKind::theta: return "theta";
  }
  return "?";
}

std::size_t PartitionedState::circuit_count() const {
  std::size_t n = 1;
  for (const auto& f : factors) n *= f.group_count();
  return n;
}

PauliSum ket_generator(const FermionOperator& op, const ReferenceDeterminant& ref, const SrJwOptions& o) {
  return sr_jw(reduce_on_reference(normal_order(op), ref, Side::ket), ref, o);
}

PauliSum bra_generator(const FermionOperator& op, const ReferenceDeterminant& ref, const SrJwOptions& o) {
  return adjoint(sr_jw(reduce_on_reference(normal_order(op), ref, Side::bra), ref, o));
}

FermionOperator state_generator(const StateVector& v, const ReferenceDeterminant& ref, double tol) {
  FermionOperator op(ref.n_modes);
  for (std::size_t i = 0; i < v.basis->size(); ++i) {
    const cplx a = v.amps(static_cast<Eigen::Index>(i));
    if (a == cplx{} || std::abs(a) <= tol) continue;
    const Mask det = v.basis->det(i);
    if (det == ref.occupation) {
      op.add(a, {});
      continue;
    }
    Excitation e{ref.occupation & ~det, det & ~ref.occupation};
    auto img = apply_excitation(e, ref.occupation);
    if (img.sign == 0 || img.det != det) throw ContractViolation("state is not reachable from the reference");
    op.add(a * static_cast<double>(img.sign), e.factors());
  }
  return op;
}

PartitionedState assemble_omega(const ClusterOperator& t, const PipelineConfig& cfg) {
  ExpansionOptions eo;
  eo.scheme = cfg.ket_scheme;
  PartitionedState s;
  s.ref = t.ref;
  s.label = StateKind::omega;
  s.factors.push_back(partition(ket_generator(expand_exponential(t, eo), t.ref, cfg.srjw), cfg.strategy));
  return s;
}

PartitionedState assemble_gamma(const FermionOperator& h, const ClusterOperator& t, const PipelineConfig& cfg) {
  if (h.n_modes != t.n_modes) throw DimensionError("Hamiltonian and amplitudes disagree on mode count");
  ExpansionOptions eo;
  eo.scheme = cfg.ket_scheme;
  PauliSum g = ket_generator(expand_exponential(t, eo), t.ref, cfg.srjw);
  PauliSum hp = standard_jw(h);
  PartitionedState s;
  s.ref = t.ref;
  s.label = StateKind::gamma;
  if (cfg.one_shot) {
    s.factors.push_back(partition_product_one_shot(hp, g, cfg.strategy));
  } else {
    auto fp = partition_product_factored(hp, g, cfg.strategy);
    s.factors.push_back(std::move(fp.right));
    s.factors.push_back(std::move(fp.left));
  }
  return s;
}

PartitionedState assemble_theta(const ClusterOperator& t, const ClusterOperator* lam, const PipelineConfig& cfg) {
  ExpansionOptions eo;
  eo.scheme = cfg.bra_scheme;
  eo.sign = -1;
  eo.lambda = lam;
  PartitionedState s;
  s.ref = t.ref;
  s.label = StateKind::theta;
  s.factors.push_back(partition(bra_generator(expand_exponential(t, eo), t.ref, cfg.srjw), cfg.strategy));
  return s;
}

PartitionedState assemble_theta_ket(const FermionOperator& op, const ReferenceDeterminant& ref,
                                    const PipelineConfig& cfg) {
  PartitionedState s;
  s.ref = ref;
  s.label = StateKind::theta;
  s.factors.push_back(partition(ket_generator(op, ref, cfg.srjw), cfg.strategy));
  return s;
}

PartitionedState assemble_theta_state(const StateVector& trial, const ReferenceDeterminant& ref,
                                      const PipelineConfig& cfg) {
  return assemble_theta_ket(state_generator(trial, ref), ref, cfg);
}

std::vector<const PartitionedOperator*> all_parts(const PartitionedState& s) {
  std::vector<const PartitionedOperator*> out;
  for (const auto& f : s.factors) out.push_back(&f);
  return out;
}

namespace {

struct Circuit {
  double weight;
  SparseState state;
};

std::vector<Circuit> circuits(const PartitionedState& s) {
  std::vector<Circuit> cur{{1.0, SparseState{{s.ref.occupation, cplx(1.0)}}}};
  for (const auto& f : s.factors) {
    std::vector<PauliSum> us;
    for (const auto& g : f.groups) us.push_back(g.unitary(s.n_qubits()));
    std::vector<Circuit> next;
    next.reserve(cur.size() * us.size());
    for (const auto& c : cur)
      for (std::size_t l = 0; l < us.size(); ++l)
        next.push_back({c.weight * f.groups[l].normalizer, ccpart::apply(us[l], c.state)});
    cur = std::move(next);
  }
  return cur;
}

double binomial_estimate(std::mt19937_64& gen, double v, std::uint64_t shots) {
  const double p = std::clamp((1.0 + v) / 2.0, 0.0, 1.0);
  std::binomial_distribution<std::uint64_t> d(shots, p);
  return 2.0 * static_cast<double>(d(gen)) / static_cast<double>(shots) - 1.0;
}

}  // namespace

OverlapEstimate estimate_overlap(const PartitionedState& a, const PartitionedState& b, std::uint64_t shots,
                                 std::uint64_t seed, std::uint64_t stream) {
  if (!(a.ref == b.ref)) throw ContractViolation("overlap between states on different references");
  const auto ca = circuits(a), cb = circuits(b);
  OverlapEstimate est;
  est.shots_per_term = shots;
  est.seed = seed;
  est.circuits = ca.size() * cb.size();
  cplx total = 0.0;
  double var = 0.0;
  for (std::size_t m = 0; m < ca.size(); ++m)
    for (std::size_t l = 0; l < cb.size(); ++l) {
      const double w = ca[m].weight * cb[l].weight;
      const cplx v = inner(ca[m].state, cb[l].state);
      if (shots == 0) {
        total += w * v;
        continue;
      }
      auto lo = [](std::uint64_t x) { return static_cast<std::uint32_t>(x & 0xffffffffu); };
      auto hi = [](std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); };
      std::seed_seq sq{lo(seed), hi(seed), lo(stream), hi(stream), lo(m), hi(m), lo(l), hi(l)};
      std::mt19937_64 gen(sq);
      const double re = binomial_estimate(gen, v.real(), shots);
      const double im = binomial_estimate(gen, v.imag(), shots);
      total += w * cplx(re, im);
      var += w * w * ((1.0 - re * re) + (1.0 - im * im)) / static_cast<double>(shots);
    }
  est.value = total;
  est.std_error = std::sqrt(var);
  return est;
}

EnergyEstimate e_mmcc(const PartitionedState& theta, const PartitionedState& gamma, const PartitionedState& omega,
                      std::uint64_t shots, std::uint64_t seed, double floor) {
  auto num = estimate_overlap(theta, gamma, shots, seed, 0);
  auto den = estimate_overlap(theta, omega, shots, seed, 1);
  if (std::abs(den.value) < floor) throw DenominatorError("MMCC denominator below floor");
  EnergyEstimate e;
  e.numerator = num.value;
  e.denominator = den.value;
  const cplx r = num.value / den.value;
  e.energy = r.real();
  e.imag_residue = r.imag();
  e.std_error = std::sqrt(num.std_error * num.std_error + std::norm(r) * den.std_error * den.std_error) /
                std::abs(den.value);
  return e;
}

double e_mmcc_statevector(const CcProblem& p, const StateVector& theta, const ClusterOperator& t, double floor) {
  StateVector psi = p.exp_t(t, p.reference_state());
  const cplx den = overlap(theta, psi);
  if (std::abs(den) < floor) throw DenominatorError("MMCC denominator below floor");
  return (overlap(theta, ccpart::apply_matrix(p.h_matrix(), psi)) / den).real();
}

StateVector theta_state(const CcProblem& p, const ClusterOperator& t, const ClusterOperator* lam,
                        ExpansionScheme bra_scheme) {
  StateVector phi = p.reference_state();
  StateVector ell = phi;
  if (lam && !lam->empty()) ell = phi + apply_cluster(lam->dagger(), phi);
  if (t.empty()) return ell;
  if (bra_scheme == ExpansionScheme::nilpotent_exact) {
    SectorMatrix td = SectorMatrix(sector_matrix(t, *p.basis()).adjoint());
    return apply_exponential(td, ell, -1);
  }
  if (bra_scheme != ExpansionScheme::ccsd_bra) throw ContractViolation("bra scheme must be ccsd_bra or nilpotent_exact");
  if (t.highest_rank() > 2) throw ContractViolation("ccsd bra expansion takes at most doubles in T");
  SectorMatrix t1d = SectorMatrix(sector_matrix(t.rank_part(1), *p.basis()).adjoint());
  SectorMatrix t2d = SectorMatrix(sector_matrix(t.rank_part(2), *p.basis()).adjoint());
  // (1 - T1 - T2 + T1^2/2)^dagger
  StateVector a = ccpart::apply_matrix(t1d, ell);
  return ell - a - ccpart::apply_matrix(t2d, ell) + 0.5 * ccpart::apply_matrix(t1d, a);
}

double e_lambda_functional(const CcProblem& p, const ClusterOperator& lam, const ClusterOperator& t) {
  StateVector phi = p.reference_state();
  StateVector ell = lam.empty() ? phi : phi + apply_cluster(lam.dagger(), phi);
  return overlap(ell, p.hbar_ref(t)).real();
}

double e_lambda_functional_pipeline(const FermionOperator& h, const ClusterOperator& lam, const ClusterOperator& t,
                                    const PipelineConfig& cfg) {
  PipelineConfig c = cfg;
  c.bra_scheme = ExpansionScheme::nilpotent_exact;
  auto theta = assemble_theta(t, &lam, c);
  auto gamma = assemble_gamma(h, t, c);
  return estimate_overlap(theta, gamma).value.real();
}

double e_ccsd_lambda3_indirect(double e_ccsd, double num, double den, double floor) {
  if (std::abs(1.0 + den) < floor) throw DenominatorError("1 + den below floor");
  return (e_ccsd + num) / (1.0 + den);
}

double mmcc_full_correction(const CcProblem& p, const StateVector& psi, const ClusterOperator& t, double floor) {
  StateVector m = project(p.hbar_ref(t), p.ref(), Manifold::QR, t.max_rank);
  StateVector chi = psi;
  if (!t.empty()) chi = apply_exponential(SectorMatrix(sector_matrix(t, *p.basis()).adjoint()), psi, +1);
  const cplx den = overlap(chi, p.reference_state());
  if (std::abs(den) < floor) throw DenominatorError("trial overlap below floor");
  return (overlap(chi, m) / den).real();
}

SectorMatrix anti_hermitian_generator(const ClusterOperator& t, const SectorBasis& basis) {
  SectorMatrix a = sector_matrix(t, basis);
  return SectorMatrix(a - SectorMatrix(a.adjoint()));
}

SectorMatrix rotation_generator(const StateVector& from, const StateVector& to) {
  if (from.basis->size() != to.basis->size()) throw DimensionError("states live in different sectors");
  Eigen::VectorXcd f = from.amps.normalized(), g = to.amps.normalized();
  cplx c = f.dot(g);
  if (std::abs(c) > 0) g *= std::conj(c) / std::abs(c);
  const double cr = std::clamp(f.dot(g).real(), -1.0, 1.0);
  const double theta = std::acos(cr);
  const auto n = f.size();
  SectorMatrix s(n, n);
  Eigen::VectorXcd perp = g - cr * f;
  if (perp.norm() < 1e-15) return s;
  perp.normalize();
  Eigen::MatrixXcd d = theta * (perp * f.adjoint() - f * perp.adjoint());
  s = d.sparseView(0.0, 0.0);
  return s;
}

StateVector apply_unitary_exponential(const SectorMatrix& sigma, const StateVector& v, int cap) {
  if (sigma.rows() > cap) throw ResourceError("sector above the dense exponential cap");
  Eigen::MatrixXcd s = Eigen::MatrixXcd(sigma);
  if ((s + s.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, s.cwiseAbs().maxCoeff()))
    throw ContractViolation("generator is not anti-Hermitian");
  // sigma = -i A with A = i sigma Hermitian, so e^{sigma} = V e^{-i lambda} V^dagger
  Eigen::MatrixXcd a = cplx(0.0, 1.0) * s;
  a = 0.5 * (a + a.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
  Eigen::VectorXcd ph = (cplx(0.0, -1.0) * es.eigenvalues().cast<cplx>()).array().exp();
  Eigen::VectorXcd w = es.eigenvectors().adjoint() * v.amps;
  return StateVector(v.basis, es.eigenvectors() * ph.cwiseProduct(w));
}

double ucc_energy(const CcProblem& p, const ClusterOperator& t) {
  return ucc_energy(p, anti_hermitian_generator(t, *p.basis()));
}

double ucc_energy(const CcProblem& p, const SectorMatrix& sigma) {
  StateVector psi = apply_unitary_exponential(sigma, p.reference_state());
  return overlap(psi, ccpart::apply_matrix(p.h_matrix(), psi)).real();
}

double ucc_mmcc_energy(const CcProblem& p, const SectorMatrix& sigma_s, const SectorMatrix& sigma_a, double floor) {
  // Equal generators: the overlap is 1 by unitarity, so this is the UCC energy itself.
  if (sigma_s.rows() == sigma_a.rows() && SectorMatrix(sigma_s - sigma_a).squaredNorm() == 0.0)
    return ucc_energy(p, sigma_a);
  StateVector ps = apply_unitary_exponential(sigma_s, p.reference_state());
  StateVector pa = apply_unitary_exponential(sigma_a, p.reference_state());
  const cplx den = overlap(ps, pa);
  if (std::abs(den) < floor) throw DenominatorError("UCC-MMCC denominator below floor");
  return (overlap(ps, ccpart::apply_matrix(p.h_matrix(), pa)) / den).real();
}

double ucc_mmcc_energy(const CcProblem& p, const ClusterOperator& t_s, const ClusterOperator& t_a, double floor) {
  return ucc_mmcc_energy(p, anti_hermitian_generator(t_s, *p.basis()), anti_hermitian_generator(t_a, *p.basis()),
                         floor);
}

UccDecomposition ucc_mmcc_decomposition(const CcProblem& p, const SectorMatrix& sigma_s, const SectorMatrix& sigma_a,
                                        double floor) {
  const SectorMatrix minus_a = SectorMatrix(-sigma_a);
  StateVector phi = p.reference_state();
  StateVector pa = apply_unitary_exponential(sigma_a, phi);
  StateVector m = apply_unitary_exponential(minus_a, ccpart::apply_matrix(p.h_matrix(), pa));
  StateVector chi = apply_unitary_exponential(minus_a, apply_unitary_exponential(sigma_s, phi));
  const cplx den = overlap(chi, phi);
  if (std::abs(den) < floor) throw DenominatorError("UCC-MMCC denominator below floor");
  UccDecomposition d;
  d.e_ucc = overlap(phi, m).real();
  StateVector q = m - project(m, p.ref(), Manifold::P);
  d.moment_term = (overlap(chi, q) / den).real();
  return d;
}

std::string energy_csv_header() { return "system,method,mode,shots,seed,energy,std_error"; }

std::string energy_csv_line(const EnergyRow& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, ",%llu,%llu,%.12f,%.6g", static_cast<unsigned long long>(r.shots),
                static_cast<unsigned long long>(r.seed), r.energy, r.std_error);
  return r.system + "," + r.method + "," + r.mode + buf;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return fnv1a64(ss.str());
}

std::string hex64(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ccpart
