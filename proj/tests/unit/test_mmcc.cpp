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

#include <cmath>
#include <numeric>

#include "ccpart/errors.hpp"
#include "ccpart/mmcc.hpp"
#include "oracle.hpp"

using namespace ccpart;
using oracle::cplx;

namespace {

SolverOptions siam_options() {
  SolverOptions o;
  o.method = SolverOptions::Method::newton;
  o.guess = SolverOptions::Guess::ci;
  o.tol = 1e-11;
  return o;
}

struct Siam {
  MolecularHamiltonian h;
  CcProblem p2, p3;
  CcSolution s2, s3;
  explicit Siam(double U)
      : h(build_siam(SiamParams::symmetric(U))),
        p2(h.op, h.ref, 2),
        p3(h.op, h.ref, 3),
        s2(solve_cc(p2, siam_options())),
        s3(solve_cc(p3, siam_options())) {}
};

const Siam& siam_u1() {
  static const Siam s(1.0);
  return s;
}

ClusterOperator lambda_ccsd_l3(const Siam& s) {
  SolverOptions d;
  d.method = SolverOptions::Method::direct;
  d.tol = 1e-11;
  auto l2 = solve_lambda(s.p2, s.s2.t, d);
  auto l3 = solve_lambda(s.p3, s.s3.t, d);
  return merge(l2.lam, l3.lam.rank_part(3));
}

// Two decoupled copies on disjoint modes.
MolecularHamiltonian direct_sum(const MolecularHamiltonian& a, const MolecularHamiltonian& b) {
  const int shift = a.op.n_modes;
  MolecularHamiltonian out;
  out.op = FermionOperator(shift + b.op.n_modes);
  for (const auto& t : a.op.terms) out.op.add(t);
  for (const auto& t : b.op.terms) {
    auto f = t.factors;
    for (auto& l : f) l.mode += shift;
    out.op.add(t.coeff, f);
  }
  out.op = normal_order(out.op);
  out.ref = {a.ref.occupation | (b.ref.occupation << shift), shift + b.op.n_modes};
  return out;
}

}  // namespace

TEST(Assemble, OmegaForZeroAmplitudes) {
  auto ref = ReferenceDeterminant::from_modes(8, {0, 1, 2, 3});
  ClusterOperator zero(ref, 2);
  auto om = assemble_omega(zero);
  ASSERT_EQ(om.factors.size(), 1u);
  ASSERT_EQ(om.factors[0].group_count(), 1u);
  ASSERT_EQ(om.factors[0].groups[0].members.size(), 1u);
  EXPECT_TRUE(om.factors[0].groups[0].members[0].is_identity());
  EXPECT_NEAR(std::abs(estimate_overlap(om, om).value - 1.0), 0.0, 1e-15);
}

TEST(Assemble, ThetaWithoutLambdaGivesCcEnergy) {
  const auto& s = siam_u1();
  auto th = assemble_theta(s.s2.t, nullptr);
  ASSERT_EQ(th.factors[0].group_count(), 1u);
  EXPECT_TRUE(th.factors[0].groups[0].members[0].is_identity());
  auto e = e_mmcc(th, assemble_gamma(s.h.op, s.s2.t), assemble_omega(s.s2.t));
  EXPECT_NEAR(e.energy, s.s2.energy, 1e-10);
  EXPECT_LT(std::abs(e.imag_residue), 1e-8);
}

TEST(Assemble, GammaOneShotCompresses) {
  const auto& s = siam_u1();
  auto om = assemble_omega(s.s2.t);
  auto g = assemble_gamma(s.h.op, s.s2.t);
  PipelineConfig fac;
  fac.one_shot = false;
  auto gf = assemble_gamma(s.h.op, s.s2.t, fac);
  ASSERT_EQ(gf.factors.size(), 2u);
  const std::size_t nh = collect(standard_jw(s.h.op)).size();
  EXPECT_LT(g.factors[0].group_count(), nh * om.factors[0].group_count());
  for (const auto* part : all_parts(g)) EXPECT_TRUE(cover_valid(*part));
  EXPECT_NEAR(std::abs(estimate_overlap(om, gf).value - estimate_overlap(om, g).value), 0.0, 1e-10);
}

TEST(Overlap, PipelineMatchesStatevector) {
  const auto& s = siam_u1();
  auto lam = lambda_ccsd_l3(s);
  auto th = assemble_theta(s.s2.t, &lam);
  auto g = assemble_gamma(s.h.op, s.s2.t);
  auto om = assemble_omega(s.s2.t);
  auto theta = theta_state(s.p2, s.s2.t, &lam);
  auto psi = s.p2.exp_t(s.s2.t, s.p2.reference_state());
  EXPECT_NEAR(std::abs(estimate_overlap(th, om).value - overlap(theta, psi)), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(estimate_overlap(th, g).value - overlap(theta, apply_matrix(s.p2.h_matrix(), psi))), 0.0,
              1e-9);
  EXPECT_EQ(estimate_overlap(th, g).std_error, 0.0);
}

TEST(Overlap, ReferenceMismatch) {
  auto a = assemble_omega(ClusterOperator(ReferenceDeterminant::from_modes(4, {0, 1}), 2));
  auto b = assemble_omega(ClusterOperator(ReferenceDeterminant::from_modes(4, {0, 3}), 2));
  EXPECT_THROW(estimate_overlap(a, b), ContractViolation);
}

TEST(Overlap, ShotsAreDeterministicAndScale) {
  const auto& s = siam_u1();
  auto th = assemble_theta(s.s2.t, nullptr);
  auto g = assemble_gamma(s.h.op, s.s2.t);
  auto exact = estimate_overlap(th, g).value;
  auto a = estimate_overlap(th, g, 1000, 42), b = estimate_overlap(th, g, 1000, 42);
  EXPECT_EQ(a.value, b.value);
  EXPECT_NE(estimate_overlap(th, g, 1000, 43).value, a.value);
  std::vector<double> spread;
  for (std::uint64_t shots : {1000u, 100000u}) {
    double acc = 0.0, acc2 = 0.0;
    const int reps = 40;
    for (int k = 0; k < reps; ++k) {
      double v = estimate_overlap(th, g, shots, 1000 + k).value.real();
      acc += v;
      acc2 += v * v;
    }
    const double mean = acc / reps;
    spread.push_back(std::sqrt(std::max(0.0, acc2 / reps - mean * mean)));
    const double se = estimate_overlap(th, g, shots, 7).std_error;
    EXPECT_LT(std::abs(mean - exact.real()), 4.0 * se / std::sqrt(double(reps)) + 1e-12);
  }
  EXPECT_NEAR(spread[0] / spread[1], 10.0, 5.0);
}

TEST(EMmcc, ExactTrialGivesExactEnergy) {
  const auto& s = siam_u1();
  auto gs = exact_ground_state(s.h.op, s.p2.basis());
  auto th = assemble_theta_state(gs.state, s.h.ref);
  auto e = e_mmcc(th, assemble_gamma(s.h.op, s.s2.t), assemble_omega(s.s2.t));
  EXPECT_NEAR(e.energy, gs.energy, 1e-10);
  EXPECT_NEAR(e_mmcc_statevector(s.p2, gs.state, s.s2.t), gs.energy, 1e-10);
}

TEST(EMmcc, CcsdLambda3Tabulated) {
  const auto& s = siam_u1();
  auto lam = lambda_ccsd_l3(s);
  auto th = assemble_theta(s.s2.t, &lam);
  auto e = e_mmcc(th, assemble_gamma(s.h.op, s.s2.t), assemble_omega(s.s2.t));
  EXPECT_NEAR(e.energy, -5.15891923, 5e-5);
  EXPECT_NEAR(e.energy, e_mmcc_statevector(s.p2, theta_state(s.p2, s.s2.t, &lam), s.s2.t), 1e-9);
}

TEST(EMmcc, DenominatorFloor) {
  const auto& s = siam_u1();
  auto gs = exact_ground_state(s.h.op, s.p2.basis());
  // A trial orthogonal to e^T Phi.
  auto psi = s.p2.exp_t(s.s2.t, s.p2.reference_state());
  StateVector orth = gs.state - (overlap(psi, gs.state) / overlap(psi, psi)) * psi;
  EXPECT_THROW(e_mmcc_statevector(s.p2, orth, s.s2.t), DenominatorError);
}

TEST(LambdaFunctional, Identities) {
  const auto& s = siam_u1();
  ClusterOperator none(s.h.ref, 2, true);
  EXPECT_NEAR(e_lambda_functional(s.p2, none, s.s2.t), s.s2.energy, 1e-12);
  SolverOptions d;
  d.method = SolverOptions::Method::direct;
  auto l2 = solve_lambda(s.p2, s.s2.t, d);
  EXPECT_NEAR(e_lambda_functional(s.p2, l2.lam, s.s2.t), s.s2.energy, 1e-10);
  auto lam = lambda_ccsd_l3(s);
  const double f = e_lambda_functional(s.p2, lam, s.s2.t);
  const double ratio =
      e_mmcc_statevector(s.p2, theta_state(s.p2, s.s2.t, &lam, ExpansionScheme::nilpotent_exact), s.s2.t);
  EXPECT_NEAR(f, ratio, 1e-9);
  EXPECT_NEAR(e_lambda_functional_pipeline(s.h.op, lam, s.s2.t), f, 1e-9);
}

TEST(Indirect, Formula) {
  EXPECT_EQ(e_ccsd_lambda3_indirect(-5.0, 0.0, 0.0), -5.0);
  EXPECT_NEAR(e_ccsd_lambda3_indirect(-5.15881517, -0.03111908, 0.00601192), -5.15891923, 3e-8);
  EXPECT_THROW(e_ccsd_lambda3_indirect(-5.0, 0.0, -1.0), DenominatorError);
}

TEST(Indirect, OwnComponentsMatchDirect) {
  const auto& s = siam_u1();
  auto lam = lambda_ccsd_l3(s);
  auto l3 = lam.rank_part(3);
  auto direct = e_mmcc_statevector(s.p2, theta_state(s.p2, s.s2.t, &lam), s.s2.t);
  auto phi = s.p2.reference_state();
  auto psi = s.p2.exp_t(s.s2.t, phi);
  auto hpsi = apply_matrix(s.p2.h_matrix(), psi);
  // Only the Lambda3 part of the bra: theta(L3) - theta(1).
  auto d3 = theta_state(s.p2, s.s2.t, &l3) - theta_state(s.p2, s.s2.t, nullptr);
  const double num = overlap(d3, hpsi).real(), den = overlap(d3, psi).real();
  // The Lambda1+Lambda2 part contributes nothing: those equations are solved.
  EXPECT_NEAR(e_ccsd_lambda3_indirect(s.s2.energy, num, den), direct, 1e-10);
}

TEST(FullCorrection, Exactness) {
  const auto& s = siam_u1();
  auto gs = exact_ground_state(s.h.op, s.p2.basis());
  EXPECT_NEAR(s.s2.energy + mmcc_full_correction(s.p2, gs.state, s.s2.t), gs.energy, 1e-10);
  EXPECT_NEAR(mmcc_full_correction(s.p2, s.p2.reference_state(), s.s2.t), 0.0, 1e-14);
  const double self = mmcc_full_correction(s.p2, s.p2.exp_t(s.s2.t, s.p2.reference_state()), s.s2.t);
  EXPECT_TRUE(std::isfinite(self));
  EXPECT_NE(self, 0.0);
}

TEST(Ucc, Basics) {
  const auto& s = siam_u1();
  ClusterOperator zero(s.h.ref, 2);
  auto phi = s.p2.reference_state();
  EXPECT_NEAR(ucc_energy(s.p2, zero), overlap(phi, apply_matrix(s.p2.h_matrix(), phi)).real(), 1e-12);
  auto sigma = anti_hermitian_generator(s.s2.t, *s.p2.basis());
  Eigen::MatrixXcd dense = Eigen::MatrixXcd(sigma);
  EXPECT_LT((dense + dense.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
  auto v = apply_unitary_exponential(sigma, phi);
  EXPECT_NEAR(v.norm(), 1.0, 1e-12);
  cplx e = overlap(v, apply_matrix(s.p2.h_matrix(), v));
  EXPECT_LT(std::abs(e.imag()), 1e-12);
  EXPECT_NEAR(ucc_energy(s.p2, s.s2.t), e.real(), 1e-12);
}

TEST(Ucc, TwoElectronH2) {
  auto h = to_fermion_operator(read_fcidump(oracle::fixture("h2_sto3g.fcidump")));
  CcProblem p(h.op, h.ref, 2);
  auto sol = solve_cc(p);
  const double fci = exact_ground_state(h.op, p.basis()).energy;
  EXPECT_NEAR(ucc_energy(p, sol.t), fci, 1e-6);
}

TEST(Ucc, MmccIdentities) {
  const auto& s = siam_u1();
  auto sa = anti_hermitian_generator(s.s2.t, *s.p2.basis());
  EXPECT_EQ(ucc_mmcc_energy(s.p2, sa, sa), ucc_energy(s.p2, sa));
  EXPECT_EQ(ucc_mmcc_energy(s.p2, s.s2.t, s.s2.t), ucc_energy(s.p2, s.s2.t));
  auto gs = exact_ground_state(s.h.op, s.p2.basis());
  auto ss = rotation_generator(s.p2.reference_state(), gs.state);
  auto rotated = apply_unitary_exponential(ss, s.p2.reference_state());
  EXPECT_NEAR(std::abs(overlap(rotated, gs.state)), 1.0, 1e-12);
  EXPECT_NEAR(ucc_mmcc_energy(s.p2, ss, sa), gs.energy, 1e-8);
  auto dec = ucc_mmcc_decomposition(s.p2, ss, sa);
  EXPECT_NEAR(dec.total(), ucc_mmcc_energy(s.p2, ss, sa), 1e-10);
  EXPECT_NEAR(dec.e_ucc, ucc_energy(s.p2, sa), 1e-12);
}

TEST(SizeExtensivity, DecoupledSiamCopies) {
  auto a = build_siam(SiamParams::symmetric(1.0, 1.0, 3, SiamBasis::meanfield));
  auto b = build_siam(SiamParams::symmetric(2.0, 1.0, 3, SiamBasis::meanfield));
  auto ab = direct_sum(a, b);
  CcProblem pa(a.op, a.ref, 2), pb(b.op, b.ref, 2), pab(ab.op, ab.ref, 2);
  auto sa = solve_cc(pa), sb = solve_cc(pb), sab = solve_cc(pab);
  EXPECT_NEAR(sab.energy, sa.energy + sb.energy, 1e-8);
  auto corr = [](const CcProblem& p, const CcSolution& s) {
    auto lam = solve_lambda(p, s.t);
    auto l3 = perturbative_l3(p.hamiltonian(), s.t, p.spectrum());
    auto full = merge(lam.lam, l3);
    return e_lambda_functional(p, full, s.t) - s.energy;
  };
  EXPECT_NEAR(corr(pab, sab), corr(pa, sa) + corr(pb, sb), 1e-8);
}
