#!/usr/bin/env python3
# Copyright 2026 The ccpart Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the FCIDUMP fixtures under tests/fixtures with PySCF.

Usage: python3 tools/fixtures/make_fixtures.py [outdir]
"""
import os
import sys

import numpy as np
from pyscf import ao2mo, gto, mcscf, scf
from pyscf.tools import fcidump


def write_full(path, mol, mf):
    fcidump.from_scf(mf, path, tol=1e-14)


def h_chain(n, spacing):
    return [("H", (0.0, 0.0, i * spacing)) for i in range(n)]


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(__file__), "..", "..", "tests", "fixtures")
    os.makedirs(os.path.join(out, "hf_pes"), exist_ok=True)

    # H2 / STO-3G at 0.741 Angstrom.
    mol = gto.M(atom=h_chain(2, 0.741), basis="sto-3g", verbose=0)
    mf = scf.RHF(mol).run(conv_tol=1e-12)
    write_full(os.path.join(out, "h2_sto3g.fcidump"), mol, mf)

    # Linear hydrogen chains, 1.5 Angstrom spacing.
    for n in (4, 6, 8):
        mol = gto.M(atom=h_chain(n, 1.5), basis="sto-3g", verbose=0)
        mf = scf.RHF(mol).run(conv_tol=1e-12)
        write_full(os.path.join(out, "h%d_chain_sto3g.fcidump" % n), mol, mf)

    # HF molecule, DZ basis, (6o,6e) active space. Densities are carried
    # along the bond-stretching path to stay on the ground RHF branch.
    grid = [0.6, 0.7, 0.8, 0.9, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0]
    dm = None
    for r in grid:
        mol = gto.M(atom="H 0 0 0; F 0 0 %.4f" % r, basis="dz", verbose=0)
        mf = scf.RHF(mol)
        mf.conv_tol = 1e-12
        mf.kernel(dm0=dm)
        mo1, _, stable, _ = mf.stability(return_status=True)
        while not stable:
            mf.kernel(dm0=mf.make_rdm1(mo1, mf.mo_occ))
            mo1, _, stable, _ = mf.stability(return_status=True)
        dm = mf.make_rdm1()
        mc = mcscf.CASCI(mf, 6, 6)
        h1, ecore = mc.get_h1eff()
        h2 = ao2mo.restore(8, mc.get_h2eff(), 6)
        path = os.path.join(out, "hf_pes", "hf_dz_%03d.fcidump" % round(r * 100))
        fcidump.from_integrals(path, h1, h2, 6, 6, nuc=ecore, ms=0, tol=1e-14)
        print("R=%.2f  E_RHF=%.8f  E_CASCI=%.8f" % (r, mf.e_tot, mc.kernel()[0]))


if __name__ == "__main__":
    main()
