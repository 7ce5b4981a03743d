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


#include "commands.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ccpart/errors.hpp"
#include "ccpart/mmcc.hpp"

namespace ccpart::cli {

namespace fs = std::filesystem;

namespace {

const std::set<std::string> kEnergyMethods = {"ccsd",          "ccsd_lambda3",  "ccsd_l3",      "lambda_functional",
                                              "exact_trial",   "ccsd[t]_trial", "ccsd(t)_trial"};
const std::vector<std::string> kPesMethods = {"hf",       "ccsd",       "ccsd_l3",    "ccsd[t]",
                                              "ccsd(t)",  "r-ccsd[t]",  "r-ccsd(t)",  "fci"};

std::string num(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10f", v);
  return buf;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string stem(const std::string& path) { return fs::path(path).stem().string(); }

std::string siam_name(double u) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "siam_u%.6g", u);
  return buf;
}

SiamParams siam_params(const RunConfig& c, double u) {
  return SiamParams::symmetric(u, 1.0, c.n_bath, c.siam_basis == "meanfield" ? SiamBasis::meanfield : SiamBasis::site);
}

struct System {
  std::string name;
  MolecularHamiltonian h;
  bool siam = false;
};

std::vector<System> load_systems(const RunConfig& c) {
  std::vector<System> out;
  for (const auto& f : c.inputs) out.push_back({stem(f), to_fermion_operator(read_fcidump(f)), false});
  for (double u : c.siam_u) out.push_back({siam_name(u), build_siam(siam_params(c, u)), true});
  return out;
}

SolverOptions solver_for(const RunConfig& c, bool siam) {
  SolverOptions o;
  o.tol = c.tol;
  const bool newton = c.solver == "newton" || (c.solver == "auto" && siam);
  const bool ci = c.guess == "ci" || (c.guess == "auto" && siam);
  o.method = newton ? SolverOptions::Method::newton : SolverOptions::Method::jacobi;
  o.guess = ci ? SolverOptions::Guess::ci : SolverOptions::Guess::zero;
  return o;
}

// The site-basis SIAM left equations need the direct solve; Jacobi stalls there.
SolverOptions lambda_for(const RunConfig& c, bool siam) {
  SolverOptions o;
  o.tol = c.tol;
  if (siam) o.method = SolverOptions::Method::direct;
  return o;
}

ColoringStrategy strategy_of(const RunConfig& c) { return parse_strategy(c.strategies.front()); }

PipelineConfig pipeline_of(const RunConfig& c) {
  PipelineConfig p;
  p.strategy = strategy_of(c);
  p.one_shot = c.one_shot;
  return p;
}

void write_header(const RunConfig& c, std::ostream& os, const std::string& columns) {
  os << "# manifest: " << c.manifest_json() << "\n" << columns << "\n";
}

// Largest qubit index touched, plus one.
int inferred_qubits(const PauliSum& s) {
  Mask used = 0;
  for (const auto& t : s.terms) used |= t.x | t.z;
  return used ? 64 - std::countl_zero(used) : 0;
}

void check_partition(const PartitionedOperator& p, const PauliSum& src, const std::string& what) {
  if (!cover_valid(p)) throw ContractViolation(what + ": partition groups are not pairwise groupable");
  if (reconstruction_error(p, src) > 1e-10) throw ContractViolation(what + ": partition does not reconstruct the operator");
}

double bra_lambda_energy(const CcProblem& p, const ClusterOperator& t, const ClusterOperator& lam) {
  return e_mmcc_statevector(p, theta_state(p, t, &lam), t);
}

// 1 + Lambda1 + Lambda2 from CCSD plus Lambda3 from Lambda-CCSDT.
ClusterOperator lambda3_trial(const System& s, const CcProblem& p2, const CcSolution& s2, const RunConfig& c) {
  CcProblem p3(s.h.op, s.h.ref, 3);
  auto s3 = solve_cc(p3, solver_for(c, s.siam));
  SolverOptions direct;
  direct.method = SolverOptions::Method::direct;
  auto l2 = solve_lambda(p2, s2.t, direct).lam;
  auto l3 = solve_lambda(p3, s3.t, direct).lam;
  return merge(l2, l3.rank_part(3));
}

}  // namespace

void RunConfig::validate() const {
  static const std::set<std::string> modes = {"exact", "shots"}, ops = {"hamiltonian", "ket", "bra"},
                                     solvers = {"auto", "jacobi", "newton"}, guesses = {"auto", "zero", "ci"},
                                     bases = {"site", "meanfield"};
  if (!modes.count(mode)) throw std::invalid_argument("--mode must be exact or shots");
  if (!ops.count(operator_kind)) throw std::invalid_argument("--operator must be hamiltonian, ket or bra");
  if (!solvers.count(solver)) throw std::invalid_argument("--solver must be auto, jacobi or newton");
  if (!guesses.count(guess)) throw std::invalid_argument("--guess must be auto, zero or ci");
  if (!bases.count(siam_basis)) throw std::invalid_argument("--siam-basis must be site or meanfield");
  if (strategies.empty()) throw std::invalid_argument("--strategy needs at least one value");
  for (const auto& s : strategies) parse_strategy(s);
  if (mode == "shots" && shots == 0) throw std::invalid_argument("--shots must be positive in shot mode");
  if (rank < 1 || rank > 4) throw std::invalid_argument("--rank must be in 1..4");
  if (!(tol > 0)) throw std::invalid_argument("--tol must be positive");
  if (n_bath < 1) throw std::invalid_argument("--n-bath must be positive");
  for (double u : siam_u)
    if (u < 0) throw std::invalid_argument("--siam U must be non-negative");
  for (const auto& m : methods) {
    if (command == "energy" && !kEnergyMethods.count(m)) throw std::invalid_argument("unknown energy method " + m);
    if (command == "pes-scan" && std::find(kPesMethods.begin(), kPesMethods.end(), m) == kPesMethods.end())
      throw std::invalid_argument("unknown pes-scan method " + m);
  }
  if ((!amplitudes_out.empty() || !log_path.empty()) && inputs.size() + siam_u.size() != 1)
    throw std::invalid_argument("--amplitudes-out and --log need exactly one system");
}

std::string RunConfig::manifest_json() const {
  nlohmann::ordered_json j;
  j["tool"] = "ccpart";
  j["command"] = command;
  nlohmann::ordered_json cfg;
  cfg["mode"] = mode;
  cfg["shots"] = mode == "shots" ? shots : 0;
  cfg["seed"] = seed;
  cfg["strategies"] = strategies;
  cfg["tol"] = tol;
  cfg["rank"] = rank;
  cfg["solver"] = solver;
  cfg["guess"] = guess;
  cfg["operator"] = operator_kind;
  cfg["methods"] = methods;
  cfg["siam_u"] = siam_u;
  cfg["grid"] = grid;
  cfg["n_bath"] = n_bath;
  cfg["siam_basis"] = siam_basis;
  cfg["one_shot"] = one_shot;
  j["config"] = cfg;
  auto inputs_json = nlohmann::ordered_json::array();
  auto add = [&](const std::string& role, const std::string& path) {
    nlohmann::ordered_json e;
    e["role"] = role;
    e["path"] = path;
    std::error_code ec;
    e["fnv1a64"] = fs::is_regular_file(path, ec) ? hex64(fnv1a64_file(path)) : "";
    inputs_json.push_back(e);
  };
  for (const auto& f : inputs) {
    std::error_code ec;
    if (fs::is_directory(f, ec)) {
      std::vector<std::string> files;
      for (const auto& d : fs::directory_iterator(f))
        if (d.path().extension() == ".fcidump") files.push_back(d.path().string());
      std::sort(files.begin(), files.end());
      for (const auto& g : files) add("fcidump", g);
    } else {
      add("fcidump", f);
    }
  }
  for (const auto& a : amplitudes) add("amplitudes", a);
  if (!pauli.empty()) add("pauli", pauli);
  j["inputs"] = inputs_json;
  return j.dump();
}

int cmd_partition(const RunConfig& c, std::ostream& os) {
  struct Item {
    std::string name;
    PauliSum op;
  };
  std::vector<Item> items;
  if (!c.pauli.empty()) {
    auto s = parse_pauli_sum(slurp(c.pauli), 64);
    s.n_qubits = inferred_qubits(s);
    for (auto& t : s.terms) t.n_qubits = s.n_qubits;
    items.push_back({stem(c.pauli), s});
  }
  for (const auto& a : c.amplitudes) {
    auto t = parse_amplitudes(slurp(a));
    ExpansionOptions o;
    o.scheme = t.highest_rank() <= 2 ? ExpansionScheme::ccsd_ket : ExpansionScheme::nilpotent_exact;
    items.push_back({stem(a), ket_generator(expand_exponential(t, o), t.ref)});
  }
  for (auto& s : load_systems(c)) {
    if (c.operator_kind == "hamiltonian") {
      items.push_back({s.name, standard_jw(s.h.op)});
      continue;
    }
    CcProblem p(s.h.op, s.h.ref, 2);
    auto sol = solve_cc(p, solver_for(c, s.siam));
    ExpansionOptions o;
    if (c.operator_kind == "ket") {
      o.scheme = ExpansionScheme::ccsd_ket;
      items.push_back({s.name + "_ket", ket_generator(expand_exponential(sol.t, o), s.h.ref)});
    } else {
      auto lam = solve_lambda(p, sol.t, lambda_for(c, s.siam)).lam;
      o.scheme = ExpansionScheme::ccsd_bra;
      o.lambda = &lam;
      items.push_back({s.name + "_bra", bra_generator(expand_exponential(sol.t, o), s.h.ref)});
    }
  }
  write_header(c, os, partition_report_header());
  for (const auto& it : items) {
    for (const auto& name : c.strategies) {
      auto strategy = parse_strategy(name);
      auto p = partition(it.op, strategy);
      check_partition(p, it.op, it.name);
      os << partition_report_line({it.name, it.op.n_qubits, p.source_term_count, p.group_count(),
                                   strategy_name(strategy), c.seed})
         << "\n";
    }
  }
  return kOk;
}

int cmd_siam_scan(const RunConfig& c, std::ostream& os) {
  std::vector<std::pair<double, double>> points;  // (log10 U/V, U)
  if (!c.siam_u.empty()) {
    for (double u : c.siam_u) points.push_back({u > 0 ? std::log10(u) : -INFINITY, u});
  } else {
    for (double x : c.grid) points.push_back({x, std::pow(10.0, x)});
  }
  const bool shots = c.mode == "shots";
  std::string cols = "log10_u,u,e_exact,e_ccsd,e_ccsd_lambda3_direct,e_ccsd_lambda3_indirect,e_ccsdt,num_lambda3,den_lambda3";
  if (shots) cols += ",e_ccsd_shots,std_error";
  write_header(c, os, cols + ",status");
  bool failed = false;
  for (auto [x, u] : points) {
    std::string row;
    char head[64];
    std::snprintf(head, sizeof head, "%.4f,%.10g", x, u);
    try {
      System s{siam_name(u), build_siam(siam_params(c, u)), true};
      CcProblem p2(s.h.op, s.h.ref, 2), p3(s.h.op, s.h.ref, 3);
      const double exact = exact_ground_state(s.h.op, p2.basis()).energy;
      auto s2 = solve_cc(p2, solver_for(c, true));
      auto s3 = solve_cc(p3, solver_for(c, true));
      auto lam = lambda3_trial(s, p2, s2, c);
      const double direct = bra_lambda_energy(p2, s2.t, lam);
      auto psi = p2.exp_t(s2.t, p2.reference_state());
      auto hpsi = apply_matrix(p2.h_matrix(), psi);
      auto l3 = lam.rank_part(3);
      auto d3 = theta_state(p2, s2.t, &l3) - theta_state(p2, s2.t, nullptr);
      const double n3 = overlap(d3, hpsi).real(), d3v = overlap(d3, psi).real();
      row = std::string(head) + "," + num(exact) + "," + num(s2.energy) + "," + num(direct) + "," +
            num(e_ccsd_lambda3_indirect(s2.energy, n3, d3v)) + "," + num(s3.energy) + "," + num(n3) + "," + num(d3v);
      if (shots) {
        auto e = e_mmcc(assemble_theta(s2.t, nullptr, pipeline_of(c)), assemble_gamma(s.h.op, s2.t, pipeline_of(c)),
                        assemble_omega(s2.t, pipeline_of(c)), c.shots, c.seed);
        row += "," + num(e.energy) + "," + num(e.std_error);
      }
      row += ",ok";
    } catch (const ConvergenceError& e) {
      failed = true;
      row = std::string(head) + ",nan,nan,nan,nan,nan,nan,nan" + (shots ? ",nan,nan" : "") + ",no_convergence";
      std::fprintf(stderr, "siam-scan: U=%g: %s\n", u, e.what());
    }
    os << row << "\n";
  }
  return failed ? kConvergence : kOk;
}

int cmd_pes_scan(const RunConfig& c, std::ostream& os) {
  std::vector<std::string> files;
  for (const auto& f : c.inputs) {
    std::error_code ec;
    if (fs::is_directory(f, ec)) {
      for (const auto& d : fs::directory_iterator(f))
        if (d.path().extension() == ".fcidump") files.push_back(d.path().string());
    } else {
      files.push_back(f);
    }
  }
  std::sort(files.begin(), files.end());
  auto methods = c.methods.empty() ? kPesMethods : c.methods;
  std::string cols = "system";
  for (const auto& m : methods) cols += "," + m;
  write_header(c, os, cols + ",status");
  auto want = [&](const std::string& m) { return std::find(methods.begin(), methods.end(), m) != methods.end(); };
  bool failed = false;
  ClusterOperator previous;
  for (const auto& f : files) {
    auto h = to_fermion_operator(read_fcidump(f));
    CcProblem p(h.op, h.ref, c.rank);
    std::map<std::string, double> e;
    std::string status = "ok";
    e["hf"] = p.reference_energy();
    if (want("fci")) e["fci"] = exact_ground_state(h.op, p.basis()).energy;
    try {
      auto so = solver_for(c, false);
      // Amplitudes from the previous geometry keep stretched points on the same root.
      if (!previous.empty() && previous.n_modes == h.ref.n_modes && previous.ref.occupation == h.ref.occupation) {
        so.guess = SolverOptions::Guess::given;
        so.initial = &previous;
      }
      auto sol = solve_cc(p, so);
      previous = sol.t;
      e["ccsd"] = sol.energy;
      if (want("ccsd_l3")) {
        auto lam = merge(solve_lambda(p, sol.t, lambda_for(c, false)).lam, perturbative_l3(h.op, sol.t, p.spectrum()));
        e["ccsd_l3"] = bra_lambda_energy(p, sol.t, lam);
      }
      if (want("ccsd[t]") || want("ccsd(t)") || want("r-ccsd[t]") || want("r-ccsd(t)")) {
        auto m3 = triples_moment(h.op, sol.t, h.ref, p.basis());
        e["ccsd[t]"] = sol.energy + delta_t_correction(TriplesTrial::bracket, false, p, sol.t, m3);
        e["ccsd(t)"] = sol.energy + delta_t_correction(TriplesTrial::paren, false, p, sol.t, m3);
        e["r-ccsd[t]"] = sol.energy + delta_t_correction(TriplesTrial::bracket, true, p, sol.t, m3);
        e["r-ccsd(t)"] = sol.energy + delta_t_correction(TriplesTrial::paren, true, p, sol.t, m3);
      }
    } catch (const ConvergenceError& err) {
      failed = true;
      status = "no_convergence";
      std::fprintf(stderr, "pes-scan: %s: %s\n", f.c_str(), err.what());
    }
    os << stem(f);
    for (const auto& m : methods) os << "," << (e.count(m) ? num(e[m]) : "nan");
    os << "," << status << "\n";
  }
  return failed ? kConvergence : kOk;
}

int cmd_cc_solve(const RunConfig& c, std::ostream& os) {
  write_header(c, os, energy_csv_header() + ",iterations,residual");
  for (auto& s : load_systems(c)) {
    CcProblem p(s.h.op, s.h.ref, c.rank);
    auto so = solver_for(c, s.siam);
    so.log_path = c.log_path;
    auto sol = solve_cc(p, so);
    if (!c.amplitudes_out.empty()) write_amplitudes(c.amplitudes_out, sol.t);
    static const char* names[] = {"", "ccs", "ccsd", "ccsdt", "ccsdtq"};
    char tail[64];
    std::snprintf(tail, sizeof tail, ",%d,%.3e", sol.iterations, sol.residual_norm);
    os << energy_csv_line({s.name, names[c.rank], "exact", 0, c.seed, sol.energy, 0.0}) << tail << "\n";
  }
  return kOk;
}

int cmd_energy(const RunConfig& c, std::ostream& os) {
  auto systems = load_systems(c);
  if (!c.amplitudes.empty() && c.amplitudes.size() != systems.size())
    throw std::invalid_argument("--amplitudes needs one file per system");
  auto methods = c.methods.empty() ? std::vector<std::string>{"ccsd"} : c.methods;
  const bool shots = c.mode == "shots";
  const auto cfg = pipeline_of(c);
  write_header(c, os, energy_csv_header() + ",imag_residue");
  int status = kOk;
  for (std::size_t k = 0; k < systems.size(); ++k) {
    const auto& s = systems[k];
    CcProblem p(s.h.op, s.h.ref, 2);
    ClusterOperator t;
    if (!c.amplitudes.empty()) {
      t = read_amplitudes(c.amplitudes[k]);
      if (t.n_modes != s.h.ref.n_modes || t.ref.occupation != s.h.ref.occupation)
        throw ModelError(c.amplitudes[k] + ": amplitudes do not match the system reference");
    } else {
      t = solve_cc(p, solver_for(c, s.siam)).t;
    }
    auto gamma = assemble_gamma(s.h.op, t, cfg);
    auto omega = assemble_omega(t, cfg);
    for (const auto& m : methods) {
      PartitionedState theta;
      if (m == "lambda_functional") {
        auto lam = solve_lambda(p, t, lambda_for(c, s.siam)).lam;
        const double e = e_lambda_functional_pipeline(s.h.op, lam, t, cfg);
        os << energy_csv_line({s.name, m, "exact", 0, c.seed, e, 0.0}) << ",0\n";
        continue;
      }
      if (m == "ccsd") {
        theta = assemble_theta(t, nullptr, cfg);
      } else if (m == "ccsd_lambda3") {
        auto lam = lambda3_trial(s, p, {t, 0.0}, c);
        theta = assemble_theta(t, &lam, cfg);
      } else if (m == "ccsd_l3") {
        auto lam = merge(solve_lambda(p, t, lambda_for(c, s.siam)).lam, perturbative_l3(s.h.op, t, p.spectrum()));
        theta = assemble_theta(t, &lam, cfg);
      } else if (m == "exact_trial") {
        theta = assemble_theta_state(exact_ground_state(s.h.op, p.basis()).state, s.h.ref, cfg);
      } else {
        auto kind = m == "ccsd[t]_trial" ? TriplesTrial::bracket : TriplesTrial::paren;
        theta = assemble_theta_state(triples_trial_state(kind, p, t), s.h.ref, cfg);
      }
      auto e = e_mmcc(theta, gamma, omega, shots ? c.shots : 0, c.seed);
      if (!shots && std::abs(e.imag_residue) > 1e-8) status = kInvariant;
      char tail[32];
      std::snprintf(tail, sizeof tail, ",%.3e", e.imag_residue);
      os << energy_csv_line({s.name, m, c.mode, shots ? c.shots : 0, c.seed, e.energy, e.std_error}) << tail << "\n";
    }
  }
  return status;
}

int cmd_verify(const RunConfig& c, std::ostream& os) {
  write_header(c, os, "check,system,status,value");
  bool all = true;
  auto report = [&](const std::string& check, const std::string& system, bool ok, const std::string& value) {
    all = all && ok;
    os << check << "," << system << "," << (ok ? "PASS" : "FAIL") << "," << value << "\n";
  };
  auto sci = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return std::string(buf);
  };
  auto systems = load_systems(c);
  if (systems.empty()) systems.push_back({siam_name(1.0), build_siam(siam_params(c, 1.0)), true});
  const auto cfg = pipeline_of(c);
  for (const auto& s : systems) {
    try {
      CcProblem p(s.h.op, s.h.ref, 2);
      auto sol = solve_cc(p, solver_for(c, s.siam));
      auto lam = solve_lambda(p, sol.t, lambda_for(c, s.siam)).lam;
      auto gs = exact_ground_state(s.h.op, p.basis());
      auto omega = assemble_omega(sol.t, cfg);
      auto gamma = assemble_gamma(s.h.op, sol.t, cfg);
      auto theta = assemble_theta(sol.t, &lam, cfg);
      auto hp = standard_jw(s.h.op);
      auto hpart = partition(hp, cfg.strategy);
      double rec = reconstruction_error(hpart, hp), uni = 0.0;
      bool valid = cover_valid(hpart);
      std::vector<const PartitionedOperator*> parts{&hpart};
      for (const auto* st : {&omega, &gamma, &theta})
        for (const auto* q : all_parts(*st)) parts.push_back(q);
      for (const auto* q : parts) {
        valid = valid && cover_valid(*q);
        for (const auto& g : q->groups)
          uni = std::max(uni, q->n_qubits <= 8 ? unitarity_error_dense(g, q->n_qubits)
                                               : unitarity_error_algebraic(g, q->n_qubits));
      }
      report("reconstruction", s.name, rec < 1e-12, sci(rec));
      report("unitarity", s.name, uni < 1e-12, sci(uni));
      report("groupable", s.name, valid, valid ? "1" : "0");
      const double ccsd_pipe = e_mmcc(assemble_theta(sol.t, nullptr, cfg), gamma, omega).energy;
      report("statevector_ccsd", s.name, std::abs(ccsd_pipe - sol.energy) < 1e-9, sci(std::abs(ccsd_pipe - sol.energy)));
      const double lam_pipe = e_mmcc(theta, gamma, omega).energy, lam_sv = bra_lambda_energy(p, sol.t, lam);
      report("statevector_lambda", s.name, std::abs(lam_pipe - lam_sv) < 1e-9, sci(std::abs(lam_pipe - lam_sv)));
      const double ex = e_mmcc(assemble_theta_state(gs.state, s.h.ref, cfg), gamma, omega).energy;
      report("exact_trial", s.name, std::abs(ex - gs.energy) < 1e-10, sci(std::abs(ex - gs.energy)));
      auto th0 = assemble_theta(sol.t, nullptr, cfg);
      const double a = e_mmcc(th0, gamma, omega, 1000, c.seed).energy, b = e_mmcc(th0, gamma, omega, 1000, c.seed).energy;
      report("shot_determinism", s.name, a == b, a == b ? "1" : "0");
    } catch (const std::exception& e) {
      report("exception", s.name, false, std::string("\"") + e.what() + "\"");
    }
  }
  for (const auto& f : c.amplitudes) {
    try {
      auto t = read_amplitudes(f);
      t.validate();
      ExpansionOptions o;
      o.scheme = ExpansionScheme::nilpotent_exact;
      auto ket = ket_generator(expand_exponential(t, o), t.ref);
      auto part = partition(ket, cfg.strategy);
      const double rec = reconstruction_error(part, ket);
      report("amplitudes", f, rec < 1e-12 && cover_valid(part), sci(rec));
    } catch (const std::exception& e) {
      report("amplitudes", f, false, std::string("\"") + e.what() + "\"");
    }
  }
  return all ? kOk : kInvariant;
}

}  // namespace ccpart::cli
