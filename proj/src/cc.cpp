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

#include "ccpart/cc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "ccpart/errors.hpp"

namespace ccpart {

double denominator(const Excitation& e, const FockSpectrum& spectrum) {
  double d = 0.0;
  for (int i : e.occ_modes()) d += spectrum.eps[static_cast<std::size_t>(i)];
  for (int a : e.virt_modes()) d -= spectrum.eps[static_cast<std::size_t>(a)];
  return d;
}

CcProblem::CcProblem(const FermionOperator& h, const ReferenceDeterminant& ref, int max_rank, std::size_t sector_cap)
    : h_(h), ref_(ref), max_rank_(max_rank) {
  if (h.n_modes != ref.n_modes) throw DimensionError("Hamiltonian and reference mode counts differ");
  if (max_rank < 0) throw DimensionError("max_rank must be non-negative");
  basis_ = sector_basis_for(ref, sector_cap);
  hm_ = sector_matrix(h, *basis_);
  spectrum_ = fock_spectrum(h, ref);
  manifold_ = excitation_manifold(ref, max_rank);
  for (const auto& e : manifold_) {
    auto img = apply_excitation(e, ref.occupation);
    signs_.push_back(img.sign);
    rows_.push_back(basis_->find(img.det));
    denoms_.push_back(ccpart::denominator(e, spectrum_));
  }
  e_ref_ = hm_.coeff(basis_->find(ref.occupation), basis_->find(ref.occupation)).real();
}

StateVector CcProblem::reference_state() const { return StateVector::basis_state(basis_, ref_.occupation); }

Eigen::VectorXd CcProblem::pack(const ClusterOperator& t) const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(manifold_.size()));
  for (std::size_t mu = 0; mu < manifold_.size(); ++mu) v(static_cast<Eigen::Index>(mu)) = t.get(manifold_[mu]);
  return v;
}

ClusterOperator CcProblem::unpack(const Eigen::VectorXd& v, bool deexcitation) const {
  ClusterOperator t(ref_, max_rank_, deexcitation);
  for (std::size_t mu = 0; mu < manifold_.size(); ++mu) {
    double x = v(static_cast<Eigen::Index>(mu));
    if (x != 0.0) t.amplitudes[manifold_[mu]] = x;
  }
  return t;
}

Eigen::VectorXcd CcProblem::components(const StateVector& v) const {
  Eigen::VectorXcd c(static_cast<Eigen::Index>(manifold_.size()));
  for (std::size_t mu = 0; mu < manifold_.size(); ++mu)
    c(static_cast<Eigen::Index>(mu)) = static_cast<double>(signs_[mu]) * v.amps(rows_[mu]);
  return c;
}

StateVector CcProblem::excited_state(const Eigen::VectorXcd& c) const {
  StateVector v(basis_);
  for (std::size_t mu = 0; mu < manifold_.size(); ++mu)
    v.amps(rows_[mu]) += static_cast<double>(signs_[mu]) * c(static_cast<Eigen::Index>(mu));
  return v;
}

StateVector CcProblem::exp_t(const ClusterOperator& t, const StateVector& v, int sign) const {
  if (t.empty()) return v;
  return apply_exponential(sector_matrix(t, *basis_), v, sign);
}

StateVector CcProblem::hbar(const ClusterOperator& t, const StateVector& v) const {
  if (t.empty()) return ccpart::apply_matrix(hm_, v);
  SectorMatrix tm = sector_matrix(t, *basis_);
  StateVector w = apply_exponential(tm, v, +1);
  w = ccpart::apply_matrix(hm_, w);
  return apply_exponential(tm, w, -1);
}

Eigen::VectorXd cc_residual_vector(const CcProblem& p, const ClusterOperator& t) {
  return p.components(p.hbar_ref(t)).real();
}

std::map<Excitation, double> cc_residuals(const CcProblem& p, const ClusterOperator& t) {
  Eigen::VectorXd r = cc_residual_vector(p, t);
  std::map<Excitation, double> out;
  for (std::size_t mu = 0; mu < p.n_amplitudes(); ++mu) out[p.manifold()[mu]] = r(static_cast<Eigen::Index>(mu));
  return out;
}

std::map<Excitation, double> cc_residuals(const FermionOperator& h, const ClusterOperator& t,
                                          const ReferenceDeterminant& ref, int max_rank) {
  return cc_residuals(CcProblem(h, ref, max_rank), t);
}

double cc_energy(const CcProblem& p, const ClusterOperator& t) {
  StateVector psi = p.exp_t(t, p.reference_state());
  const long r = p.basis()->find(p.ref().occupation);
  return (p.h_matrix().row(r) * psi.amps)(0).real();
}

namespace {

struct Diis {
  int depth;
  std::vector<Eigen::VectorXd> xs, es;

  Eigen::VectorXd push(const Eigen::VectorXd& x, const Eigen::VectorXd& e) {
    if (depth < 2) return x;
    xs.push_back(x);
    es.push_back(e);
    if (static_cast<int>(xs.size()) > depth) {
      xs.erase(xs.begin());
      es.erase(es.begin());
    }
    const int k = static_cast<int>(xs.size());
    if (k < 2) return x;
    Eigen::MatrixXd B = Eigen::MatrixXd::Constant(k + 1, k + 1, -1.0);
    B(k, k) = 0.0;
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) B(a, b) = es[static_cast<std::size_t>(a)].dot(es[static_cast<std::size_t>(b)]);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
    rhs(k) = -1.0;
    Eigen::VectorXd c = B.completeOrthogonalDecomposition().solve(rhs);
    if (!c.allFinite()) return x;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(x.size());
    for (int a = 0; a < k; ++a) out += c(a) * xs[static_cast<std::size_t>(a)];
    return out;
  }
};

Eigen::VectorXd shifted_denominators(const CcProblem& p, const SolverOptions& opts, int& shifts) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(p.n_amplitudes()));
  shifts = 0;
  for (std::size_t mu = 0; mu < p.n_amplitudes(); ++mu) {
    double x = p.denominator(mu);
    if (std::abs(x) < opts.shift_threshold) {
      x -= opts.level_shift;
      ++shifts;
    }
    d(static_cast<Eigen::Index>(mu)) = x;
  }
  return d;
}

// tau_nu applied to every determinant of v.
StateVector apply_tau(const Excitation& e, const StateVector& v) {
  StateVector out(v.basis);
  for (std::size_t i = 0; i < v.basis->size(); ++i) {
    cplx a = v.amps(static_cast<Eigen::Index>(i));
    if (a == cplx{}) continue;
    auto img = apply_excitation(e, v.basis->det(i));
    if (img.sign == 0) continue;
    out.amps(v.basis->find(img.det)) += static_cast<double>(img.sign) * a;
  }
  return out;
}

Eigen::MatrixXd cc_jacobian(const CcProblem& p, const ClusterOperator& t) {
  const auto n = static_cast<Eigen::Index>(p.n_amplitudes());
  Eigen::MatrixXd J(n, n);
  SectorMatrix tm = sector_matrix(t, *p.basis());
  StateVector hphi = p.hbar_ref(t);
  for (Eigen::Index nu = 0; nu < n; ++nu) {
    const auto& e = p.manifold()[static_cast<std::size_t>(nu)];
    StateVector tphi = apply_tau(e, p.reference_state());
    StateVector a = apply_exponential(tm, ccpart::apply_matrix(p.h_matrix(), apply_exponential(tm, tphi, +1)), -1);
    J.col(nu) = p.components(a - apply_tau(e, hphi)).real();
  }
  return J;
}

void record(std::vector<IterationRecord>& h, int it, double e, double r) { h.push_back({it, e, r}); }

}  // namespace

ClusterOperator cluster_decomposition(const CcProblem& p, const StateVector& c) {
  const long r0 = p.basis()->find(p.ref().occupation);
  const cplx c0 = c.amps(r0);
  if (std::abs(c0) < 1e-12) throw DenominatorError("state has no reference component");
  StateVector cn = (1.0 / c0) * c;
  ClusterOperator t(p.ref(), p.max_rank());
  for (int k = 1; k <= p.max_rank(); ++k) {
    StateVector psi = p.exp_t(t, p.reference_state());
    for (std::size_t mu = 0; mu < p.n_amplitudes(); ++mu) {
      if (p.manifold()[mu].rank() != k) continue;
      const long row = p.det_index(mu);
      double v = p.sign(static_cast<std::size_t>(mu)) * (cn.amps(row) - psi.amps(row)).real();
      if (v != 0.0) t.amplitudes[p.manifold()[mu]] = v;
    }
  }
  return t;
}

ClusterOperator ci_cluster_guess(const CcProblem& p) {
  std::vector<Eigen::Index> keep;
  for (std::size_t i = 0; i < p.basis()->size(); ++i)
    if (excitation_rank(p.basis()->det(i), p.ref()) <= p.max_rank()) keep.push_back(static_cast<Eigen::Index>(i));
  const auto m = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXcd dense = Eigen::MatrixXcd(p.h_matrix());
  Eigen::MatrixXcd sub(m, m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b) sub(a, b) = dense(keep[static_cast<std::size_t>(a)], keep[static_cast<std::size_t>(b)]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sub);
  StateVector c(p.basis());
  for (Eigen::Index a = 0; a < m; ++a) c.amps(keep[static_cast<std::size_t>(a)]) = es.eigenvectors()(a, 0);
  return cluster_decomposition(p, c);
}

CcSolution solve_cc(const FermionOperator& h, const ReferenceDeterminant& ref, int max_rank,
                    const SolverOptions& opts) {
  return solve_cc(CcProblem(h, ref, max_rank), opts);
}

CcSolution solve_cc(const CcProblem& p, const SolverOptions& opts) {
  CcSolution sol;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p.n_amplitudes()));
  if (opts.guess == SolverOptions::Guess::ci) {
    x = p.pack(ci_cluster_guess(p));
  } else if (opts.guess == SolverOptions::Guess::given) {
    if (!opts.initial) throw ContractViolation("guess=given needs initial amplitudes");
    x = p.pack(*opts.initial);
  }
  Eigen::VectorXd d = shifted_denominators(p, opts, sol.level_shifts);
  Diis diis{opts.diis_depth, {}, {}};
  double rnorm = 0.0, energy = 0.0;
  int it = 0;
  for (it = 0; it <= opts.max_iter; ++it) {
    ClusterOperator t = p.unpack(x);
    Eigen::VectorXd r = cc_residual_vector(p, t);
    energy = cc_energy(p, t);
    rnorm = r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
    record(sol.history, it, energy, rnorm);
    if (rnorm < opts.tol) break;
    if (it == opts.max_iter) break;
    if (opts.method == SolverOptions::Method::newton) {
      Eigen::MatrixXd J = cc_jacobian(p, t);
      Eigen::VectorXd dx = J.fullPivLu().solve(-r);
      // Backtrack when the full step makes the residual worse.
      double step = 1.0;
      for (int k = 0; k < 12; ++k) {
        Eigen::VectorXd xn = x + step * dx;
        double rn = cc_residual_vector(p, p.unpack(xn)).cwiseAbs().maxCoeff();
        if (rn < rnorm || k == 11) {
          x = xn;
          break;
        }
        step *= 0.5;
      }
    } else {
      Eigen::VectorXd step = (r.array() / d.array()).matrix();
      x = diis.push(x + step, step);
    }
  }
  sol.t = p.unpack(x);
  sol.energy = energy;
  sol.residual_norm = rnorm;
  sol.iterations = it;
  if (!opts.log_path.empty()) write_iteration_log(opts.log_path, sol.history);
  if (!(rnorm < opts.tol)) throw ConvergenceError("CC amplitude equations did not converge", rnorm);
  return sol;
}

Eigen::VectorXd lambda_residual_vector(const CcProblem& p, const ClusterOperator& t, const ClusterOperator& lam,
                                       double energy) {
  Eigen::VectorXd l = p.pack(lam);
  StateVector ell = p.reference_state() + p.excited_state(l.cast<cplx>());
  // Hbar^dagger = e^{T^dagger} H e^{-T^dagger}
  StateVector w = ell;
  if (!t.empty()) {
    SectorMatrix td = SectorMatrix(sector_matrix(t, *p.basis()).adjoint());
    w = apply_exponential(td, ccpart::apply_matrix(p.h_matrix(), apply_exponential(td, ell, -1)), +1);
  } else {
    w = ccpart::apply_matrix(p.h_matrix(), ell);
  }
  Eigen::VectorXcd c = p.components(w);
  return c.conjugate().real() - energy * l;
}

LambdaSolution solve_lambda(const CcProblem& p, const ClusterOperator& t, const SolverOptions& opts) {
  LambdaSolution sol;
  const double energy = cc_energy(p, t);
  const auto n = static_cast<Eigen::Index>(p.n_amplitudes());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  if (opts.guess == SolverOptions::Guess::given && opts.initial) x = p.pack(*opts.initial);
  auto rho = [&](const Eigen::VectorXd& v) { return lambda_residual_vector(p, t, p.unpack(v, true), energy); };
  double rnorm = 0.0;
  int it = 0;
  if (opts.method == SolverOptions::Method::direct || opts.method == SolverOptions::Method::newton) {
    // rho is affine in lambda: rho = b + A lambda
    Eigen::VectorXd b = rho(Eigen::VectorXd::Zero(n));
    Eigen::MatrixXd A(n, n);
    for (Eigen::Index nu = 0; nu < n; ++nu) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
      e(nu) = 1.0;
      A.col(nu) = rho(e) - b;
    }
    x = A.fullPivLu().solve(-b);
    Eigen::VectorXd r = rho(x);
    rnorm = n ? r.cwiseAbs().maxCoeff() : 0.0;
    record(sol.history, 0, energy, rnorm);
    it = 1;
  } else {
    Eigen::VectorXd d = shifted_denominators(p, opts, sol.level_shifts);
    Diis diis{opts.diis_depth, {}, {}};
    for (it = 0; it <= opts.max_iter; ++it) {
      Eigen::VectorXd r = rho(x);
      rnorm = n ? r.cwiseAbs().maxCoeff() : 0.0;
      record(sol.history, it, energy, rnorm);
      if (rnorm < opts.tol || it == opts.max_iter) break;
      Eigen::VectorXd step = (r.array() / d.array()).matrix();
      x = diis.push(x + step, step);
    }
  }
  sol.lam = p.unpack(x, true);
  sol.residual_norm = rnorm;
  sol.iterations = it;
  if (!opts.log_path.empty()) write_iteration_log(opts.log_path, sol.history);
  if (!(rnorm < opts.tol)) throw ConvergenceError("Lambda equations did not converge", rnorm);
  return sol;
}

FermionOperator fock_operator(const FermionOperator& h, const ReferenceDeterminant& ref) {
  SpinOrbitalTensors ts = extract_tensors(h);
  const int n = ts.n;
  std::vector<int> occ;
  for (int p = 0; p < n; ++p)
    if (ref.occupied(p)) occ.push_back(p);
  FermionOperator f(n);
  cplx trace = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      cplx v = ts.h(p, q);
      for (int i : occ) v += ts.G(p, i, q, i);
      if (p == q && ref.occupied(p)) trace += v;
      if (v != cplx{}) f.add(v, {cre(p), ann(q)});
    }
  if (trace != cplx{}) f.add(-trace, {});
  return normal_order(f, 0.0);
}

FermionOperator fluctuation_potential(const FermionOperator& h, const ReferenceDeterminant& ref) {
  const double e0 = diagonal_energy(h, ref.occupation);
  FermionOperator v = add(h, scale(fock_operator(h, ref), -1.0));
  v.add(-e0, {});
  return normal_order(v);
}

namespace {

StateVector rank3_moment(const FermionOperator& vn, const ClusterOperator& tk, const ReferenceDeterminant& ref,
                         BasisPtr basis, bool check_connected) {
  StateVector phi = StateVector::basis_state(basis, ref.occupation);
  if (tk.empty()) return StateVector(basis);
  SectorMatrix vm = sector_matrix(vn, *basis);
  SectorMatrix tm = sector_matrix(tk, *basis);
  StateVector m = project(ccpart::apply_matrix(vm, ccpart::apply_matrix(tm, phi)), ref, Manifold::rank, 3);
  if (!check_connected) return m;
  // The disconnected piece T2 (V_N Phi) must not reach the triples space.
  StateVector disc = project(ccpart::apply_matrix(tm, ccpart::apply_matrix(vm, phi)), ref, Manifold::rank, 3);
  if (disc.norm() > 1e-10 * (1.0 + m.norm()))
    throw ContractViolation("disconnected V_N T contribution reaches the triples space");
  return m;
}

}  // namespace

StateVector triples_moment(const FermionOperator& h, const ClusterOperator& t2, const ReferenceDeterminant& ref,
                           BasisPtr basis) {
  if (!basis) basis = sector_basis_for(ref);
  return rank3_moment(fluctuation_potential(h, ref), t2.rank_part(2), ref, basis, true);
}

StateVector triples_singles_moment(const FermionOperator& h, const ClusterOperator& t1,
                                   const ReferenceDeterminant& ref, BasisPtr basis) {
  if (!basis) basis = sector_basis_for(ref);
  return rank3_moment(fluctuation_potential(h, ref), t1.rank_part(1), ref, basis, false);
}

StateVector triples_resolvent(const StateVector& v, const ReferenceDeterminant& ref, const FockSpectrum& spectrum,
                              const TriplesOptions& opts) {
  StateVector out(v.basis);
  for (std::size_t i = 0; i < v.basis->size(); ++i) {
    const Mask det = v.basis->det(i);
    if (excitation_rank(det, ref) != 3) continue;
    cplx a = v.amps(static_cast<Eigen::Index>(i));
    if (a == cplx{}) continue;
    double d = denominator(Excitation{ref.occupation & ~det, det & ~ref.occupation}, spectrum);
    if (std::abs(d) < opts.shift_threshold) {
      std::fprintf(stderr, "warning: triples denominator %.3g level-shifted\n", d);
      d -= opts.level_shift;
    }
    out.amps(static_cast<Eigen::Index>(i)) = a / d;
  }
  return out;
}

ClusterOperator perturbative_l3(const FermionOperator& h, const ClusterOperator& t, const FockSpectrum& spectrum,
                                const TriplesOptions& opts) {
  const ReferenceDeterminant& ref = t.ref;
  BasisPtr basis = sector_basis_for(ref);
  StateVector m3 = triples_moment(h, t, ref, basis);
  if (opts.include_t1) m3 = m3 + triples_singles_moment(h, t, ref, basis);
  StateVector x = triples_resolvent(m3, ref, spectrum, opts);
  ClusterOperator l3(ref, 3, true);
  for (std::size_t i = 0; i < basis->size(); ++i) {
    cplx a = x.amps(static_cast<Eigen::Index>(i));
    if (a == cplx{}) continue;
    const Mask det = basis->det(i);
    Excitation e{ref.occupation & ~det, det & ~ref.occupation};
    auto img = apply_excitation(e, ref.occupation);
    // l = conj(M3_mu)/D with M3_mu = sign <det|M3>
    l3.amplitudes[e] = (static_cast<double>(img.sign) * std::conj(a)).real();
  }
  return l3;
}

StateVector triples_trial_state(TriplesTrial kind, const CcProblem& p, const ClusterOperator& t,
                                const TriplesOptions& opts) {
  StateVector phi = p.reference_state();
  StateVector base = phi + apply_cluster(t.ranks(1, 2), phi);
  StateVector m = triples_moment(p.hamiltonian(), t, p.ref(), p.basis());
  if (kind == TriplesTrial::paren || opts.include_t1) m = m + triples_singles_moment(p.hamiltonian(), t, p.ref(), p.basis());
  return base + triples_resolvent(m, p.ref(), p.spectrum(), opts);
}

double delta_t_correction(TriplesTrial kind, bool renormalized, const CcProblem& p, const ClusterOperator& t,
                          const TriplesOptions& opts) {
  return delta_t_correction(kind, renormalized, p, t, triples_moment(p.hamiltonian(), t, p.ref(), p.basis()), opts);
}

double delta_t_correction(TriplesTrial kind, bool renormalized, const CcProblem& p, const ClusterOperator& t,
                          const StateVector& m3, const TriplesOptions& opts) {
  StateVector trial = triples_trial_state(kind, p, t, opts);
  cplx de = overlap(trial, m3);
  if (renormalized) {
    cplx s = overlap(trial, p.exp_t(t, p.reference_state()));
    if (std::abs(s) < 1e-8) throw DenominatorError("trial-state overlap underflow");
    de /= s;
  }
  return de.real();
}

void write_iteration_log(const std::string& path, const std::vector<IterationRecord>& history) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "iteration,energy,residual\n";
  char buf[96];
  for (const auto& r : history) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", r.iteration, r.energy, r.residual);
    f << buf;
  }
}

}  // namespace ccpart
