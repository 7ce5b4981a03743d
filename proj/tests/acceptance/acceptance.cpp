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


// Acceptance suite: one PASS/FAIL line per criterion, numbered as in the
// project requirements. Exit status is nonzero when any criterion fails.
#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "ccpart/errors.hpp"
#include "ccpart/mmcc.hpp"
#include "oracle.hpp"

using namespace ccpart;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void info(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
void info(const char* fmt, ...) {
  va_list ap;
  va_start(ap, fmt);
  std::printf("    ");
  std::vprintf(fmt, ap);
  std::printf("\n");
  va_end(ap);
}

struct Check {
  bool ok = true;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      info("violated: %s", what.c_str());
    }
  }
};

const double kGrid[] = {0.0, 0.3, 0.6, 0.9, 1.2, 1.5};
const double kExact[] = {-5.15891987, -5.43719790, -6.04851697, -7.46340418, -10.79981136, -18.24713845};
const double kCcsd[] = {-5.15881517, -5.43674925, -6.04647846, -7.45178382, -10.78419849, -18.20429450};
const double kLambda3[] = {-5.15891923, -5.43719446, -6.04849319, -7.46307880, -10.79953788, -18.24533312};
const double kCcsdt[] = {-5.15891987, -5.43719792, -6.04851725, -7.46340952, -10.79986846, -18.24730462};

SolverOptions siam_solver() {
  SolverOptions o;
  o.method = SolverOptions::Method::newton;
  o.guess = SolverOptions::Guess::ci;
  o.tol = 1e-11;
  return o;
}

SolverOptions direct_lambda() {
  SolverOptions o;
  o.method = SolverOptions::Method::direct;
  o.tol = 1e-11;
  return o;
}

// Everything computed once per SIAM grid point.
struct SiamPoint {
  double x = 0.0;
  MolecularHamiltonian h;
  std::unique_ptr<CcProblem> p2, p3;
  CcSolution s2, s3;
  ClusterOperator lam;  // Lambda1 + Lambda2 (CCSD) + Lambda3 (CCSDT)
  GroundState exact;
};

std::vector<SiamPoint>& siam_points() {
  static std::vector<SiamPoint> pts = [] {
    std::vector<SiamPoint> v;
    for (double x : kGrid) {
      SiamPoint s;
      s.x = x;
      s.h = build_siam(SiamParams::symmetric(std::pow(10.0, x)));
      s.p2 = std::make_unique<CcProblem>(s.h.op, s.h.ref, 2);
      s.p3 = std::make_unique<CcProblem>(s.h.op, s.h.ref, 3);
      s.s2 = solve_cc(*s.p2, siam_solver());
      s.s3 = solve_cc(*s.p3, siam_solver());
      auto l2 = solve_lambda(*s.p2, s.s2.t, direct_lambda());
      auto l3 = solve_lambda(*s.p3, s.s3.t, direct_lambda());
      s.lam = merge(l2.lam, l3.lam.rank_part(3));
      s.exact = exact_ground_state(s.h.op, s.p2->basis());
      v.push_back(std::move(s));
    }
    return v;
  }();
  return pts;
}

MolecularHamiltonian molecule(const std::string& name) {
  return to_fermion_operator(read_fcidump(oracle::fixture(name)));
}

bool criterion1() {
  Check c;
  auto t0 = Clock::now();
  double worst = 0.0;
  for (int k = 0; k < 6; ++k) {
    auto h = build_siam(SiamParams::symmetric(std::pow(10.0, kGrid[k])));
    const double e = exact_ground_state(h.op, sector_basis_for(h.ref)).energy;
    worst = std::max(worst, std::abs(e - kExact[k]));
    info("log10(U/V)=%.1f  E_exact=%.8f  table=%.8f", kGrid[k], e, kExact[k]);
  }
  const double dt = seconds_since(t0);
  info("max |dE| = %.2e, runtime %.3f s", worst, dt);
  c.require(worst < 1e-6, "|dE| < 1e-6");
  c.require(dt < 1.0, "runtime < 1 s");
  return c.ok;
}

bool criterion2() {
  Check c;
  for (std::size_t k = 0; k < 6; ++k) {
    const auto& s = siam_points()[k];
    const double l3 = e_mmcc_statevector(*s.p2, theta_state(*s.p2, s.s2.t, &s.lam), s.s2.t);
    const double ex = s.exact.energy;
    info("log10(U/V)=%.1f  CCSD %.8f (d %.1e)  CCSDT %.8f (d %.1e)  errors CCSD/L3/CCSDT %.2e %.2e %.2e", s.x,
         s.s2.energy, s.s2.energy - kCcsd[k], s.s3.energy, s.s3.energy - kCcsdt[k], std::abs(s.s2.energy - ex),
         std::abs(l3 - ex), std::abs(s.s3.energy - ex));
    c.require(std::abs(s.s2.energy - kCcsd[k]) < 5e-5, "CCSD column within 5e-5");
    c.require(std::abs(s.s3.energy - kCcsdt[k]) < 5e-5, "CCSDT column within 5e-5");
    c.require(std::abs(s.s2.energy - ex) >= std::abs(l3 - ex) && std::abs(l3 - ex) >= std::abs(s.s3.energy - ex),
              "error ordering CCSD >= CCSD-L3 >= CCSDT");
  }
  return c.ok;
}

struct IndirectParts {
  double num, den;
};

IndirectParts indirect_components(const SiamPoint& s) {
  auto l3 = s.lam.rank_part(3);
  auto phi = s.p2->reference_state();
  auto psi = s.p2->exp_t(s.s2.t, phi);
  auto hpsi = apply_matrix(s.p2->h_matrix(), psi);
  auto d3 = theta_state(*s.p2, s.s2.t, &l3) - theta_state(*s.p2, s.s2.t, nullptr);
  return {overlap(d3, hpsi).real(), overlap(d3, psi).real()};
}

bool criterion3() {
  Check c;
  const auto& s = siam_points()[0];
  const double direct = e_mmcc_statevector(*s.p2, theta_state(*s.p2, s.s2.t, &s.lam), s.s2.t);
  info("direct CCSD-L3 at U=1: %.8f (table -5.15891923, d %.1e)", direct, direct + 5.15891923);
  c.require(std::abs(direct + 5.15891923) < 5e-5, "direct value within 5e-5");
  for (std::size_t k = 0; k < 6; ++k) {
    const auto& q = siam_points()[k];
    const double d = e_mmcc_statevector(*q.p2, theta_state(*q.p2, q.s2.t, &q.lam), q.s2.t);
    auto parts = indirect_components(q);
    const double ind = e_ccsd_lambda3_indirect(q.s2.energy, parts.num, parts.den);
    info("log10(U/V)=%.1f  num %.8f den %.8f  indirect-direct %.1e", q.x, parts.num, parts.den, ind - d);
    c.require(std::abs(ind - d) < 1e-10, "exact-mode indirect equals direct to 1e-10");
  }
  // The printed components carry 8 decimals; their rounding bounds how well
  // they can reproduce the printed direct value.
  const double tab = e_ccsd_lambda3_indirect(-5.15881517, -0.03111908, 0.00601192);
  const double bound = 5e-9 * (1.0 + std::abs(tab)) + 5e-9 / 1.006 + 5e-9;
  info("tabulated components -> %.10f, |d| = %.2e vs rounding bound %.2e", tab, std::abs(tab + 5.15891923), bound);
  c.require(std::abs(tab + 5.15891923) <= bound, "tabulated components within their rounding bound");
  return c.ok;
}

bool criterion4() {
  Check c;
  double worst = 0.0;
  for (const auto& s : siam_points()) {
    const CcProblem& p = *s.p2;
    auto gamma = assemble_gamma(s.h.op, s.s2.t);
    auto omega = assemble_omega(s.s2.t);
    auto pipe = [&](const PartitionedState& th) { return e_mmcc(th, gamma, omega); };
    struct Row {
      std::string name;
      double pipeline, statevector;
    };
    std::vector<Row> rows;
    rows.push_back({"ccsd", pipe(assemble_theta(s.s2.t, nullptr)).energy, s.s2.energy});
    rows.push_back({"ccsd_lambda3", pipe(assemble_theta(s.s2.t, &s.lam)).energy,
                    e_mmcc_statevector(p, theta_state(p, s.s2.t, &s.lam), s.s2.t)});
    rows.push_back({"lambda_functional", e_lambda_functional_pipeline(s.h.op, s.lam, s.s2.t),
                    e_lambda_functional(p, s.lam, s.s2.t)});
    rows.push_back({"exact_trial", pipe(assemble_theta_state(s.exact.state, s.h.ref)).energy,
                    e_mmcc_statevector(p, s.exact.state, s.s2.t)});
    for (auto kind : {TriplesTrial::bracket, TriplesTrial::paren}) {
      auto trial = triples_trial_state(kind, p, s.s2.t);
      rows.push_back({kind == TriplesTrial::bracket ? "ccsd[t]_trial" : "ccsd(t)_trial",
                      pipe(assemble_theta_state(trial, s.h.ref)).energy, e_mmcc_statevector(p, trial, s.s2.t)});
    }
    std::string line;
    for (const auto& r : rows) {
      const double d = std::abs(r.pipeline - r.statevector);
      worst = std::max(worst, d);
      char buf[96];
      std::snprintf(buf, sizeof buf, " %s %.1e", r.name.c_str(), d);
      line += buf;
      c.require(d < 1e-9, r.name + " pipeline equals statevector");
    }
    info("log10(U/V)=%.1f%s", s.x, line.c_str());
  }
  info("max |pipeline - statevector| = %.2e", worst);
  return c.ok;
}

bool criterion5() {
  Check c;
  std::mt19937_64 rng(20260);
  std::normal_distribution<double> g(0.0, 0.3);
  double worst = 0.0;
  int count = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const int n = 4 + 2 * (trial % 5);  // 4..12 modes
    std::vector<int> modes(n);
    std::iota(modes.begin(), modes.end(), 0);
    std::shuffle(modes.begin(), modes.end(), rng);
    const int ne = 2 + trial % (n / 2);
    Mask occ = 0;
    for (int k = 0; k < ne; ++k) occ |= Mask{1} << modes[k];
    ReferenceDeterminant ref{occ, n};
    const int rank = 1 + trial % 3;
    auto man = excitation_manifold(ref, rank);
    std::shuffle(man.begin(), man.end(), rng);
    ClusterOperator t(ref, rank);
    for (std::size_t k = 0; k < man.size() && k < 8; ++k) t.set(man[k], g(rng));
    ExpansionOptions o;
    o.scheme = (rank <= 2 && trial % 2) ? ExpansionScheme::ccsd_ket : ExpansionScheme::nilpotent_exact;
    auto w = expand_exponential(t, o);
    SparseState phi{{occ, 1.0}};
    auto a = ccpart::apply(standard_jw(w), phi);
    auto b = ccpart::apply(sr_jw(reduce_on_reference(normal_order(w), ref, Side::ket), ref), phi);
    for (const auto& [k, v] : a) {
      auto it = b.find(k);
      worst = std::max(worst, std::abs(v - (it == b.end() ? cplx(0) : it->second)));
    }
    for (const auto& [k, v] : b)
      if (!a.count(k)) worst = std::max(worst, std::abs(v));
    ++count;
  }
  info("%d random cluster polynomials on 4..12 modes, max |diff| = %.2e", count, worst);
  c.require(count >= 100, ">= 100 operators");
  c.require(worst < 1e-12, "max abs difference < 1e-12");
  return c.ok;
}

bool criterion6() {
  Check c;
  auto check = [&](const std::string& name, const PartitionedOperator& p, const PauliSum& src) {
    double rec = reconstruction_error(p, src), uni = 0.0;
    for (const auto& g : p.groups)
      uni = std::max(uni, p.n_qubits <= 8 ? unitarity_error_dense(g, p.n_qubits) : unitarity_error_algebraic(g, p.n_qubits));
    const bool valid = cover_valid(p);
    info("%-22s %5zu -> %4zu  recon %.1e  unitarity %.1e  groupable %s", name.c_str(), p.source_term_count,
         p.group_count(), rec, uni, valid ? "yes" : "no");
    c.require(rec < 1e-12, name + " reconstruction");
    c.require(uni < 1e-12, name + " unitarity");
    c.require(valid, name + " pairwise groupable");
  };
  const auto& s = siam_points()[0];
  PipelineConfig cfg;
  auto hp = standard_jw(s.h.op);
  check("siam H", partition(hp), hp);
  auto ket = ket_generator(expand_exponential(s.s2.t, {}), s.h.ref);
  check("siam omega", partition(ket), ket);
  check("siam gamma one-shot", partition_product_one_shot(hp, ket), collect(multiply(hp, ket)));
  ExpansionOptions bo;
  bo.scheme = ExpansionScheme::ccsd_bra;
  bo.sign = -1;
  bo.lambda = &s.lam;
  auto bra = bra_generator(expand_exponential(s.s2.t, bo), s.h.ref);
  check("siam theta (L3)", partition(bra), bra);
  for (const char* f : {"h2_sto3g.fcidump", "h4_chain_sto3g.fcidump"}) {
    auto m = molecule(f);
    auto mp = standard_jw(m.op);
    auto part = partition(mp);
    check(std::string(f).substr(0, 8) + " H", part, mp);
    auto sol = solve_cc(m.op, m.ref, 2);
    ExpansionOptions ko;
    ko.scheme = ExpansionScheme::ccsd_ket;
    auto k2 = ket_generator(expand_exponential(sol.t, ko), m.ref);
    check(std::string(f).substr(0, 8) + " ket", partition(k2), k2);
    auto lam = solve_lambda(CcProblem(m.op, m.ref, 2), sol.t).lam;
    ExpansionOptions bb = bo;
    bb.lambda = &lam;
    auto b2 = bra_generator(expand_exponential(sol.t, bb), m.ref);
    check(std::string(f).substr(0, 8) + " bra", partition(b2), b2);
    if (std::string(f) == "h2_sto3g.fcidump") {
      c.require(part.source_term_count == 15, "H2 N_paulis = 15");
      c.require(part.group_count() <= 11, "H2 N_unitaries <= 11");
    }
  }
  return c.ok;
}

bool criterion7() {
  Check c;
  {
    auto h = molecule("h2_sto3g.fcidump");
    auto sol = solve_cc(h.op, h.ref, 2);
    const double fci = exact_ground_state(h.op, sector_basis_for(h.ref)).energy;
    info("H2: CCSD - FCI = %.1e", sol.energy - fci);
    c.require(std::abs(sol.energy - fci) < 1e-9, "H2 CCSD = FCI");
  }
  {
    auto h = build_siam(SiamParams::symmetric(2.0, 1.0, 1));
    auto sol = solve_cc(h.op, h.ref, 2, siam_solver());
    const double fci = exact_ground_state(h.op, sector_basis_for(h.ref)).energy;
    info("2-electron SIAM: CCSD - FCI = %.1e", sol.energy - fci);
    c.require(std::abs(sol.energy - fci) < 1e-9, "2-electron SIAM CCSD = FCI");
  }
  double worst = 0.0;
  auto exact_trial = [&](const std::string& name, const FermionOperator& op, const ReferenceDeterminant& ref,
                         const SolverOptions& so, bool pipeline) {
    CcProblem p(op, ref, 2);
    auto sol = solve_cc(p, so);
    auto gs = exact_ground_state(op, p.basis());
    double e = e_mmcc_statevector(p, gs.state, sol.t);
    if (pipeline)
      e = e_mmcc(assemble_theta_state(gs.state, ref), assemble_gamma(op, sol.t), assemble_omega(sol.t)).energy;
    worst = std::max(worst, std::abs(e - gs.energy));
    info("%-22s E_MMCC[exact trial] - E_exact = %.1e (%s)", name.c_str(), e - gs.energy,
         pipeline ? "pipeline" : "statevector");
    c.require(std::abs(e - gs.energy) < 1e-10, name + " exactness");
  };
  for (const auto& s : siam_points()) {
    char name[32];
    std::snprintf(name, sizeof name, "siam %.1f", s.x);
    exact_trial(name, s.h.op, s.h.ref, siam_solver(), true);
  }
  exact_trial("siam 2-electron", build_siam(SiamParams::symmetric(2.0, 1.0, 1)).op,
              build_siam(SiamParams::symmetric(2.0, 1.0, 1)).ref, siam_solver(), true);
  for (const char* f : {"h2_sto3g.fcidump", "h4_chain_sto3g.fcidump", "h6_chain_sto3g.fcidump",
                        "h8_chain_sto3g.fcidump", "hf_pes/hf_dz_100.fcidump", "hf_pes/hf_dz_300.fcidump"}) {
    auto m = molecule(f);
    exact_trial(f, m.op, m.ref, {}, std::string(f) == "h2_sto3g.fcidump");
  }
  return c.ok;
}

struct PesRow {
  double r;
  const char* tag;
  double hf, ccsdtq, ccsd, l3, rpt, rbt, pt, bt;
};

const PesRow kPes[] = {
    {0.6, "060", -99.72732749, -99.74924268, -99.74898034, -99.74915658, -99.74915496, -99.74917596, -99.74915627, -99.74917744},
    {0.7, "070", -99.92096796, -99.95795651, -99.95745811, -99.95789116, -99.95789623, -99.95797043, -99.95790176, -99.95797690},
    {0.8, "080", -99.99948359, -100.0394432, -100.0388268, -100.0393763, -100.0393888, -100.0395000, -100.0393966, -100.0395093},
    {0.9, "090", -100.0215114, -100.0658488, -100.0650373, -100.0657766, -100.0658018, -100.0659798, -100.0658142, -100.0659950},
    {1.0, "100", -100.0157879, -100.0576983, -100.0572387, -100.0574741, -100.0574754, -100.0575473, -100.0574800, -100.0575533},
    {1.5, "150", -99.89198356, -99.96622946, -99.96502878, -99.96553766, -99.96557304, -99.96590984, -99.96562518, -99.96599418},
    {2.0, "200", -99.78357371, -99.90110675, -99.89933579, -99.90038410, -99.90071607, -99.90174961, -99.90123664, -99.90265966},
    {2.5, "250", -99.71145146, -99.88559991, -99.88407156, -99.88574201, -99.88688445, -99.88858604, -99.88938554, -99.89260031},
    {3.0, "300", -99.66583950, -99.88181130, -99.88094675, -99.88229220, -99.88486955, -99.88707153, -99.89001862, -99.89511433},
    {3.5, "350", -99.63767250, -99.88037159, -99.88005052, -99.88062028, -99.88446597, -99.88695172, -99.89119194, -99.89747101},
    {4.0, "400", -99.62040722, -99.88030227, -99.88021870, -99.88037685, -99.88473591, -99.88728617, -99.89190712, -99.89851428},
    {4.5, "450", -99.60941181, -99.88063715, -99.88063127, -99.88066272, -99.88506557, -99.88757507, -99.89210310, -99.89860372},
    {5.0, "500", -99.60179863, -99.88097821, -99.88098817, -99.88098807, -99.88949143, -99.89433798, -99.90282578, -99.91530392},
};

bool criterion8() {
  Check c;
  int triples_hits = 0, triples_total = 0;
  for (const auto& row : kPes) {
    auto h = molecule(std::string("hf_pes/hf_dz_") + row.tag + ".fcidump");
    CcProblem p(h.op, h.ref, 2);
    SolverOptions so;
    auto sol = solve_cc(p, so);
    auto lam = solve_lambda(p, sol.t).lam;
    const double fci = exact_ground_state(h.op, p.basis()).energy;
    auto l3 = merge(lam, perturbative_l3(h.op, sol.t, p.spectrum()));
    const double e_l3 = e_mmcc_statevector(p, theta_state(p, sol.t, &l3), sol.t);
    auto m3 = triples_moment(h.op, sol.t, h.ref, p.basis());
    const double bt = sol.energy + delta_t_correction(TriplesTrial::bracket, false, p, sol.t, m3);
    const double pt = sol.energy + delta_t_correction(TriplesTrial::paren, false, p, sol.t, m3);
    const double rbt = sol.energy + delta_t_correction(TriplesTrial::bracket, true, p, sol.t, m3);
    const double rpt = sol.energy + delta_t_correction(TriplesTrial::paren, true, p, sol.t, m3);
    const double e_hf = p.reference_energy();
    info("R=%.1f HF %.8f CCSD %.8f FCI %.8f | l3 %.8f [T] %.8f (T) %.8f R[T] %.8f R(T) %.8f", row.r, e_hf,
         sol.energy, fci, e_l3, bt, pt, rbt, rpt);
    // Golden columns that characterise the fixture itself.
    c.require(std::abs(e_hf - row.hf) < 1e-4, "HF golden at R=" + std::to_string(row.r));
    c.require(std::abs(sol.energy - row.ccsd) < 1e-4, "CCSD golden at R=" + std::to_string(row.r));
    c.require(std::abs(fci - row.ccsdtq) < 1e-4, "FCI vs CCSDTQ golden at R=" + std::to_string(row.r));
    const double got[] = {e_l3, bt, pt, rbt, rpt}, want[] = {row.l3, row.bt, row.pt, row.rbt, row.rpt};
    std::string dev;
    for (int k = 0; k < 5; ++k) {
      ++triples_total;
      triples_hits += std::abs(got[k] - want[k]) < 1e-4;
      char buf[24];
      std::snprintf(buf, sizeof buf, " %+.1e", got[k] - want[k]);
      dev += buf;
    }
    info("      golden deviations l3/[T]/(T)/R[T]/R(T):%s", dev.c_str());
    if (row.r >= 3.0 - 1e-9) {
      c.require(std::abs(rbt - fci) <= std::abs(bt - fci), "R-CCSD[T] error <= CCSD[T] error at R=" + std::to_string(row.r));
      c.require(std::abs(rpt - fci) <= std::abs(pt - fci), "R-CCSD(T) error <= CCSD(T) error at R=" + std::to_string(row.r));
    }
    if (std::abs(row.r - 0.9) < 1e-9) {
      for (double e : {sol.energy, e_l3, bt, pt, rbt, rpt}) c.require(std::abs(e - fci) < 2e-3, "within 2 mH of FCI at 0.9");
    }
  }
  info("golden l3/triples columns within 1e-4: %d of %d (informational; see README)", triples_hits, triples_total);
  return c.ok;
}

bool criterion9() {
  Check c;
  const auto& s = siam_points()[0];
  auto theta = assemble_theta(s.s2.t, nullptr);
  auto gamma = assemble_gamma(s.h.op, s.s2.t);
  auto omega = assemble_omega(s.s2.t);
  const double exact = e_mmcc(theta, gamma, omega).energy;
  std::vector<double> spread;
  for (std::uint64_t shots : {1000ull, 10000ull, 100000ull}) {
    const int reps = 100;
    double sum = 0.0, sum2 = 0.0;
    for (int k = 0; k < reps; ++k) {
      const double e = e_mmcc(theta, gamma, omega, shots, 1 + k).energy;
      sum += e;
      sum2 += e * e;
    }
    const double mean = sum / reps;
    const double sd = std::sqrt((sum2 - reps * mean * mean) / (reps - 1));
    const double sem = sd / std::sqrt(double(reps));
    spread.push_back(sd);
    info("shots %6llu: mean %.8f (exact %.8f, %.2f sem), empirical std %.3e", static_cast<unsigned long long>(shots),
         mean, exact, std::abs(mean - exact) / sem, sd);
    c.require(std::abs(mean - exact) <= 3.0 * sem, "unbiased within 3 std errors");
  }
  for (int k = 0; k + 1 < 3; ++k) {
    const double ratio = spread[k] / spread[k + 1] / std::sqrt(10.0);
    info("std ratio / sqrt(10) = %.3f", ratio);
    c.require(ratio > 0.5 && ratio < 2.0, "std scales as shots^-1/2 within factor 2");
  }
  return c.ok;
}

bool criterion10() {
  Check c;
  std::vector<double> ratios;
  for (const char* f : {"h4_chain_sto3g.fcidump", "h6_chain_sto3g.fcidump", "h8_chain_sto3g.fcidump"}) {
    auto m = molecule(f);
    auto sol = solve_cc(m.op, m.ref, 2);
    ExpansionOptions ko;
    ko.scheme = ExpansionScheme::ccsd_ket;
    auto ket = ket_generator(expand_exponential(sol.t, ko), m.ref);
    auto p = partition(ket);
    const double r = double(p.group_count()) / double(p.source_term_count);
    auto lf = partition(ket, ColoringStrategy::largest_first);
    info("%-24s %2d qubits  ket %5zu -> %4zu (ratio %.4f); largest_first %zu", f, m.ref.n_modes,
         p.source_term_count, p.group_count(), r, lf.group_count());
    ratios.push_back(r);
  }
  for (std::size_t k = 1; k < ratios.size(); ++k) c.require(ratios[k] < ratios[k - 1], "ratio decreases with qubits");
  return c.ok;
}

bool criterion11() {
  Check c;
  auto run = [&](const std::string& name, const FermionOperator& op, const ReferenceDeterminant& ref,
                 const SolverOptions& so) {
    CcProblem p(op, ref, 2);
    auto sol = solve_cc(p, so);
    auto sa = anti_hermitian_generator(sol.t, *p.basis());
    const double same = ucc_mmcc_energy(p, sa, sa), ucc = ucc_energy(p, sa);
    auto gs = exact_ground_state(op, p.basis());
    auto ss = rotation_generator(p.reference_state(), gs.state);
    const double e = ucc_mmcc_energy(p, ss, sa);
    auto dec = ucc_mmcc_decomposition(p, ss, sa);
    auto dec2 = ucc_mmcc_decomposition(p, sa, sa);
    const double id = std::max(std::abs(dec.total() - e), std::abs(dec2.total() - same));
    info("%-24s sigmaS=sigmaA diff %.1e  exact-trial err %.1e  decomposition %.1e", name.c_str(), same - ucc,
         e - gs.energy, id);
    c.require(same == ucc, name + " sigmaS = sigmaA reduces to UCC energy");
    c.require(std::abs(e - gs.energy) < 1e-8, name + " exact trial");
    c.require(id < 1e-10, name + " two-path decomposition");
  };
  for (std::size_t k : {0u, 3u, 5u}) {
    const auto& s = siam_points()[k];
    run("siam " + std::to_string(s.x).substr(0, 3), s.h.op, s.h.ref, siam_solver());
  }
  for (const char* f : {"h2_sto3g.fcidump", "h4_chain_sto3g.fcidump", "h6_chain_sto3g.fcidump", "hf_pes/hf_dz_100.fcidump"}) {
    auto m = molecule(f);
    run(f, m.op, m.ref, {});
  }
  return c.ok;
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  const std::vector<std::pair<std::string, std::function<bool()>>> criteria = {
      {"SIAM exact energies", criterion1},
      {"SIAM CCSD/CCSDT columns and error ordering", criterion2},
      {"CCSD-Lambda3 direct value and indirect formula", criterion3},
      {"pipeline equals statevector for every functional", criterion4},
      {"SR-JW statevector equality with standard JW", criterion5},
      {"partition soundness", criterion6},
      {"two-electron exactness and exact-trial MMCC", criterion7},
      {"HF PES golden columns and renormalized triples", criterion8},
      {"shot statistics", criterion9},
      {"ket compression trend on hydrogen chains", criterion10},
      {"UCC-MMCC identities", criterion11},
  };
  int failures = 0, index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    auto t0 = Clock::now();
    bool ok = false;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      info("exception: %s", e.what());
    }
    std::printf("%s criterion %d: %s (%.1f s)\n", ok ? "PASS" : "FAIL", index, name.c_str(), seconds_since(t0));
    failures += !ok;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
