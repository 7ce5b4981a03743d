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

#include "ccpart/models.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "ccpart/errors.hpp"

namespace ccpart {

MolecularIntegrals::MolecularIntegrals(int n, int n_elec, int ms2_)
    : n_spatial(n),
      n_electrons(n_elec),
      ms2(ms2_),
      one_body(Eigen::MatrixXd::Zero(n, n)),
      two_body(static_cast<std::size_t>(n) * n * n * n, 0.0),
      orbsym(static_cast<std::size_t>(n), 1) {}

void MolecularIntegrals::set_eri(int p, int q, int r, int s, double v) {
  const int n = n_spatial;
  auto at = [&](int a, int b, int c, int d) -> double& {
    return two_body[static_cast<std::size_t>(((a * n + b) * n + c) * n + d)];
  };
  at(p, q, r, s) = v;
  at(q, p, r, s) = v;
  at(p, q, s, r) = v;
  at(q, p, s, r) = v;
  at(r, s, p, q) = v;
  at(s, r, p, q) = v;
  at(r, s, q, p) = v;
  at(s, r, q, p) = v;
}

void MolecularIntegrals::set_h(int p, int q, double v) {
  one_body(p, q) = v;
  one_body(q, p) = v;
}

namespace {

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

double parse_real(std::string tok, int line) {
  for (auto& c : tok)
    if (c == 'D' || c == 'd') c = 'E';
  try {
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad number '" + tok + "'", line);
  }
}

int parse_int(const std::string& tok, int line) {
  try {
    std::size_t used = 0;
    int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad integer '" + tok + "'", line);
  }
}

}  // namespace

MolecularIntegrals parse_fcidump(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;

  // Namelist: everything up to '/' or &END, as KEY=v1,v2,... items.
  std::string nl;
  bool started = false, closed = false;
  int header_line = 0;
  while (!closed && std::getline(in, line)) {
    ++lineno;
    std::string u = upper(line);
    if (!started) {
      auto pos = u.find("&FCI");
      if (pos == std::string::npos) {
        if (u.find_first_not_of(" \t\r") == std::string::npos) continue;
        throw ParseError("expected '&FCI' namelist header", lineno);
      }
      started = true;
      header_line = lineno;
      u = u.substr(pos + 4);
    }
    for (const char* end : {"&END", "$END", "/"}) {
      auto pos = u.find(end);
      if (pos != std::string::npos) {
        u = u.substr(0, pos);
        closed = true;
        break;
      }
    }
    nl += u + ",";
  }
  if (!started) throw ParseError("empty FCIDUMP");
  if (!closed) throw ParseError("unterminated &FCI namelist", header_line);

  std::map<std::string, std::vector<std::string>> keys;
  {
    std::string cur_key;
    std::string tok;
    auto flush = [&](std::string t) {
      t.erase(std::remove_if(t.begin(), t.end(), [](unsigned char c) { return std::isspace(c); }), t.end());
      if (t.empty()) return;
      auto eq = t.find('=');
      if (eq != std::string::npos) {
        cur_key = t.substr(0, eq);
        if (cur_key.empty()) throw ParseError("malformed namelist item", header_line);
        keys[cur_key];
        t = t.substr(eq + 1);
        if (t.empty()) return;
      }
      if (cur_key.empty()) throw ParseError("namelist value without key: " + t, header_line);
      keys[cur_key].push_back(t);
    };
    for (char c : nl) {
      if (c == ',') {
        flush(tok);
        tok.clear();
      } else if (c == '=' && !tok.empty() && tok.find_first_not_of(" \t") != std::string::npos &&
                 tok.find('=') == std::string::npos) {
        // "NORB= 2" style: key token then value
        tok += c;
      } else {
        tok += c;
      }
    }
    flush(tok);
  }
  auto scalar = [&](const std::string& k, bool required, int dflt) {
    auto it = keys.find(k);
    if (it == keys.end()) {
      if (required) throw ParseError("namelist is missing " + k, header_line);
      return dflt;
    }
    if (it->second.size() != 1) throw ParseError("namelist key " + k + " needs one value", header_line);
    return parse_int(it->second[0], header_line);
  };
  const int norb = scalar("NORB", true, 0);
  const int nelec = scalar("NELEC", true, 0);
  const int ms2 = scalar("MS2", false, 0);
  if (norb <= 0) throw ParseError("NORB must be positive", header_line);
  if (nelec < 0 || nelec > 2 * norb) throw ParseError("NELEC out of range", header_line);
  if ((nelec + ms2) % 2 != 0 || std::abs(ms2) > nelec) throw ParseError("MS2 inconsistent with NELEC", header_line);

  MolecularIntegrals m(norb, nelec, ms2);
  m.isym = scalar("ISYM", false, 1);
  if (auto it = keys.find("ORBSYM"); it != keys.end()) {
    if (static_cast<int>(it->second.size()) != norb) throw ParseError("ORBSYM length differs from NORB", header_line);
    for (int p = 0; p < norb; ++p) m.orbsym[static_cast<std::size_t>(p)] = parse_int(it->second[static_cast<std::size_t>(p)], header_line);
  }
  for (const auto& [k, v] : keys) {
    if (k == "NORB" || k == "NELEC" || k == "MS2" || k == "ORBSYM" || k == "ISYM") continue;
    std::string joined;
    for (const auto& x : v) joined += (joined.empty() ? "" : ",") + x;
    m.extra[k] = joined;
  }

  // Records. Track which canonical entries were set explicitly to detect conflicts.
  std::map<std::array<int, 4>, double> seen2;
  std::map<std::pair<int, int>, double> seen1;
  bool core_seen = false;
  auto conflict = [](double a, double b) { return std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a)); };
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string vt;
    if (!(ls >> vt)) continue;
    const double v = parse_real(vt, lineno);
    int idx[4];
    for (int& x : idx) {
      std::string t;
      if (!(ls >> t)) throw ParseError("record needs 'value i j k l'", lineno);
      x = parse_int(t, lineno);
      if (x < 0 || x > norb) throw ParseError("orbital index out of range", lineno);
    }
    std::string extra;
    if (ls >> extra) throw ParseError("trailing tokens in record", lineno);
    const int i = idx[0], j = idx[1], k = idx[2], l = idx[3];
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      if (core_seen && conflict(m.core_energy, v)) throw ParseError("conflicting core energy", lineno);
      m.core_energy = v;
      core_seen = true;
    } else if (i > 0 && j > 0 && k > 0 && l > 0) {
      int a = std::max(i, j), b = std::min(i, j), c = std::max(k, l), d = std::min(k, l);
      std::array<int, 4> key = (a * (a - 1) / 2 + b >= c * (c - 1) / 2 + d) ? std::array<int, 4>{a, b, c, d}
                                                                         : std::array<int, 4>{c, d, a, b};
      auto [it, fresh] = seen2.emplace(key, v);
      if (!fresh && conflict(it->second, v)) throw ParseError("conflicting two-body record", lineno);
      m.set_eri(i - 1, j - 1, k - 1, l - 1, v);
    } else if (i > 0 && j > 0 && k == 0 && l == 0) {
      auto key = std::make_pair(std::max(i, j), std::min(i, j));
      auto [it, fresh] = seen1.emplace(key, v);
      if (!fresh && conflict(it->second, v)) throw ParseError("conflicting one-body record", lineno);
      m.set_h(i - 1, j - 1, v);
    } else if (i > 0 && j == 0 && k == 0 && l == 0) {
      // orbital energy record; not needed
    } else {
      throw ParseError("record index pattern not recognised", lineno);
    }
  }
  return m;
}

MolecularIntegrals read_fcidump(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  try {
    return parse_fcidump(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string serialize_fcidump(const MolecularIntegrals& m) {
  const int n = m.n_spatial;
  std::ostringstream out;
  out << " &FCI NORB=" << n << ",NELEC=" << m.n_electrons << ",MS2=" << m.ms2 << ",\n  ORBSYM=";
  for (int p = 0; p < n; ++p) out << m.orbsym[static_cast<std::size_t>(p)] << ",";
  out << "\n  ISYM=" << m.isym << ",\n &END\n";
  char buf[128];
  auto rec = [&](double v, int i, int j, int k, int l) {
    std::snprintf(buf, sizeof buf, "%.17g %4d %4d %4d %4d\n", v, i, j, k, l);
    out << buf;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l <= k; ++l) {
          if (i * (i + 1) / 2 + j < k * (k + 1) / 2 + l) continue;
          double v = m.eri(i, j, k, l);
          if (v != 0.0) rec(v, i + 1, j + 1, k + 1, l + 1);
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      if (m.one_body(i, j) != 0.0) rec(m.one_body(i, j), i + 1, j + 1, 0, 0);
  rec(m.core_energy, 0, 0, 0, 0);
  return out.str();
}

MolecularIntegrals rotate_orbitals(const MolecularIntegrals& m, const Eigen::MatrixXd& C) {
  const int n = m.n_spatial;
  if (C.rows() != n || C.cols() != n) throw DimensionError("orbital rotation size mismatch");
  MolecularIntegrals out = m;
  out.one_body = C.transpose() * m.one_body * C;
  // Four quarter transformations.
  std::vector<double> a = m.two_body, b(a.size());
  auto I = [n](int p, int q, int r, int s) {
    return static_cast<std::size_t>(((p * n + q) * n + r) * n + s);
  };
  for (int pass = 0; pass < 4; ++pass) {
    std::fill(b.begin(), b.end(), 0.0);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        for (int r = 0; r < n; ++r)
          for (int s = 0; s < n; ++s) {
            double v = a[I(p, q, r, s)];
            if (v == 0.0) continue;
            // transform the first index, then rotate index order (p q r s) -> (q r s k)
            for (int k = 0; k < n; ++k) b[I(q, r, s, k)] += C(p, k) * v;
          }
    std::swap(a, b);
  }
  out.two_body = std::move(a);
  std::fill(out.orbsym.begin(), out.orbsym.end(), 1);
  return out;
}

RhfResult restricted_hartree_fock(const MolecularIntegrals& m, double tol, int max_iter) {
  const int n = m.n_spatial;
  if (m.n_electrons % 2 != 0 || m.ms2 != 0) throw ModelError("RHF needs a closed-shell electron count");
  const int nocc = m.n_electrons / 2;
  RhfResult res;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.one_body);
  Eigen::MatrixXd C = es.eigenvectors();
  auto density = [&](const Eigen::MatrixXd& c) {
    Eigen::MatrixXd co = c.leftCols(nocc);
    return Eigen::MatrixXd(2.0 * co * co.transpose());
  };
  auto fock = [&](const Eigen::MatrixXd& D) {
    Eigen::MatrixXd F = m.one_body;
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        double acc = 0.0;
        for (int r = 0; r < n; ++r)
          for (int s = 0; s < n; ++s) acc += D(r, s) * (m.eri(p, q, r, s) - 0.5 * m.eri(p, r, q, s));
        F(p, q) += acc;
      }
    return F;
  };
  Eigen::MatrixXd D = density(C);
  std::vector<Eigen::MatrixXd> fs, errs;
  double e_old = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::MatrixXd F = fock(D);
    Eigen::MatrixXd err = F * D - D * F;
    double energy = 0.5 * (D.cwiseProduct(m.one_body + F)).sum() + m.core_energy;
    fs.push_back(F);
    errs.push_back(err);
    if (fs.size() > 8) {
      fs.erase(fs.begin());
      errs.erase(errs.begin());
    }
    if (it > 1 && err.cwiseAbs().maxCoeff() < tol && std::abs(energy - e_old) < tol) {
      res.converged = true;
      res.iterations = it;
      res.energy = energy;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> fe(F);
      res.orbital_energies = fe.eigenvalues();
      res.coefficients = fe.eigenvectors();
      return res;
    }
    e_old = energy;
    Eigen::MatrixXd Fx = F;
    const int k = static_cast<int>(fs.size());
    if (k >= 2) {
      Eigen::MatrixXd B = Eigen::MatrixXd::Constant(k + 1, k + 1, -1.0);
      B(k, k) = 0.0;
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) B(a, b) = errs[static_cast<std::size_t>(a)].cwiseProduct(errs[static_cast<std::size_t>(b)]).sum();
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
      rhs(k) = -1.0;
      Eigen::VectorXd c = B.fullPivLu().solve(rhs);
      if (c.allFinite()) {
        Fx.setZero();
        for (int a = 0; a < k; ++a) Fx += c(a) * fs[static_cast<std::size_t>(a)];
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> fe(Fx);
    D = density(fe.eigenvectors());
  }
  res.iterations = max_iter;
  res.energy = e_old;
  return res;
}

MolecularHamiltonian to_fermion_operator(const MolecularIntegrals& m) {
  if (m.n_electrons > 2 * m.n_spatial) throw ModelError("more electrons than spin orbitals");
  std::vector<int> a(static_cast<std::size_t>(m.n_alpha())), b(static_cast<std::size_t>(m.n_beta()));
  std::iota(a.begin(), a.end(), 0);
  std::iota(b.begin(), b.end(), 0);
  return to_fermion_operator(m, a, b);
}

MolecularHamiltonian to_fermion_operator(const MolecularIntegrals& m, const std::vector<int>& alpha_orbitals,
                                         const std::vector<int>& beta_orbitals) {
  const int n = m.n_spatial, N = 2 * n;
  if (m.n_electrons > N) throw ModelError("more electrons than spin orbitals");
  if (N > kMaxModes) throw ModelError("more than 64 spin orbitals");
  if (static_cast<int>(alpha_orbitals.size() + beta_orbitals.size()) != m.n_electrons)
    throw ModelError("reference occupation does not match the electron count");
  FermionOperator op(N);
  if (m.core_energy != 0.0) op.terms.push_back({m.core_energy, {}});
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      double v = m.one_body(p, q);
      if (v == 0.0) continue;
      for (int s = 0; s < 2; ++s) op.add(v, {cre(2 * p + s), ann(2 * q + s)});
    }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          double v = m.eri(p, q, r, s);
          if (v == 0.0) continue;
          for (int sa = 0; sa < 2; ++sa)
            for (int sb = 0; sb < 2; ++sb)
              op.add(0.5 * v, {cre(2 * p + sa), cre(2 * r + sb), ann(2 * s + sb), ann(2 * q + sa)});
        }
  ReferenceDeterminant ref{0, N};
  for (int p : alpha_orbitals) {
    if (p < 0 || p >= n) throw ModelError("occupied orbital out of range");
    ref.occupation |= Mask{1} << (2 * p);
  }
  for (int p : beta_orbitals) {
    if (p < 0 || p >= n) throw ModelError("occupied orbital out of range");
    ref.occupation |= Mask{1} << (2 * p + 1);
  }
  if (ref.n_particles() != m.n_electrons) throw ModelError("repeated orbital in reference occupation");
  return {normal_order(op), ref};
}

double restricted_reference_energy(const MolecularIntegrals& m, const std::vector<int>& occupied) {
  double e = m.core_energy;
  for (int i : occupied) e += 2.0 * m.one_body(i, i);
  for (int i : occupied)
    for (int j : occupied) e += 2.0 * m.eri(i, i, j, j) - m.eri(i, j, j, i);
  return e;
}

SiamParams SiamParams::symmetric(double U, double V, int n_bath, SiamBasis basis) {
  SiamParams p;
  p.U = U;
  p.V = V;
  p.eps_c = -U / 2.0;
  p.n_bath = n_bath;
  p.bath_levels.clear();
  for (int i = 0; i < n_bath; ++i)
    p.bath_levels.push_back(n_bath == 1 ? 0.0 : -1.0 + 2.0 * i / (n_bath - 1));
  p.basis = basis;
  return p;
}

void SiamParams::validate() const {
  if (n_bath < 0 || static_cast<int>(bath_levels.size()) != n_bath)
    throw ModelError("n_bath must equal the number of bath levels");
  if ((1 + n_bath) % 2 != 0) throw ModelError("half filling needs an even number of sites");
  if (2 * (1 + n_bath) > kMaxModes) throw ModelError("too many SIAM sites");
}

MolecularIntegrals siam_integrals(const SiamParams& p) {
  p.validate();
  const int n = 1 + p.n_bath;
  MolecularIntegrals m(n, n, 0);
  m.set_h(0, 0, p.eps_c);
  for (int i = 0; i < p.n_bath; ++i) {
    m.set_h(i + 1, i + 1, p.bath_levels[static_cast<std::size_t>(i)]);
    m.set_h(0, i + 1, p.V);
  }
  m.set_eri(0, 0, 0, 0, p.U);
  return m;
}

MolecularHamiltonian build_siam(const SiamParams& p) {
  MolecularIntegrals m = siam_integrals(p);
  const int n = m.n_spatial, nocc = n / 2;
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  if (p.basis == SiamBasis::meanfield) {
    RhfResult rhf = restricted_hartree_fock(m);
    if (!rhf.converged) throw ModelError("SIAM mean-field iterations did not converge");
    m = rotate_orbitals(m, rhf.coefficients);
  } else {
    // aufbau on the site one-body diagonal
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return m.one_body(a, a) < m.one_body(b, b); });
  }
  std::vector<int> occ(order.begin(), order.begin() + nocc);
  std::sort(occ.begin(), occ.end());
  return to_fermion_operator(m, occ, occ);
}

double diagonal_energy(const FermionOperator& h, Mask det) {
  double e = 0.0;
  for (const auto& t : h.terms) {
    if (t.create_mask() != t.annihilate_mask()) continue;
    auto img = apply_factors(t.factors, det);
    if (img.sign != 0 && img.det == det) e += img.sign * t.coeff.real();
  }
  return e;
}

FockSpectrum fock_spectrum(const FermionOperator& h, const ReferenceDeterminant& ref) {
  if (h.n_modes != ref.n_modes) throw DimensionError("reference mode-count mismatch");
  for (const auto& t : h.terms)
    if (t.factors.size() > 4) throw ContractViolation("fock_spectrum needs an at most two-body operator");
  FockSpectrum fs;
  const double e0 = diagonal_energy(h, ref.occupation);
  for (int p = 0; p < h.n_modes; ++p) {
    const Mask bit = Mask{1} << p;
    if (ref.occupation & bit)
      fs.eps.push_back(e0 - diagonal_energy(h, ref.occupation & ~bit));
    else
      fs.eps.push_back(diagonal_energy(h, ref.occupation | bit) - e0);
  }
  return fs;
}

SpinOrbitalTensors extract_tensors(const FermionOperator& h) {
  SpinOrbitalTensors t;
  const int n = h.n_modes;
  t.n = n;
  t.h = Eigen::MatrixXcd::Zero(n, n);
  t.g.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
  for (const auto& term : normal_order(h, 0.0).terms) {
    const auto& f = term.factors;
    if (f.empty()) {
      t.constant += term.coeff;
    } else if (f.size() == 2 && f[0].create && !f[1].create) {
      t.h(f[0].mode, f[1].mode) += term.coeff;
    } else if (f.size() == 4 && f[0].create && f[1].create && !f[2].create && !f[3].create) {
      // c a+p a+q a_s a_r  ->  <pq||rs> = c with antisymmetric images
      const int p = f[0].mode, q = f[1].mode, s = f[2].mode, r = f[3].mode;
      const cplx c = term.coeff;
      t.G(p, q, r, s) += c;
      t.G(q, p, r, s) -= c;
      t.G(p, q, s, r) -= c;
      t.G(q, p, s, r) += c;
    } else {
      throw ContractViolation("operator is not a number-conserving one- plus two-body Hamiltonian");
    }
  }
  return t;
}

}  // namespace ccpart
