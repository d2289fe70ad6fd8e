#!/usr/bin/env python3
"""Regenerate the FCIDUMP fixtures and FCI reference spectra with PySCF.

Run from this directory: `python3 generate.py`. Output is deterministic for a
given PySCF version (2.14.0 was used for the committed files).
"""
import os
import numpy as np
from pyscf import gto, scf, ao2mo, fci, mcscf
from pyscf.tools import fcidump

HERE = os.path.dirname(os.path.abspath(__file__))
NROOTS = 8


def write_ref(path, energies):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w") as f:
        f.write("root_index,energy_hartree\n")
        for i, e in enumerate(energies):
            f.write(f"{i},{e:.12f}\n")


def run(atoms, basis, name, dm0=None, cas=None):
    mol = gto.M(atom=atoms, basis=basis, unit="Angstrom", verbose=0, symmetry=False)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.max_cycle = 200
    mf.kernel(dm0=dm0)
    if not mf.converged:
        mf = scf.newton(mf)
        mf.kernel(mf.make_rdm1())
    n = mol.nao
    c = mf.mo_coeff
    h = c.T @ mf.get_hcore() @ c
    g = ao2mo.restore(1, ao2mo.kernel(mol, c), n)
    out = os.path.join(HERE, name + ".fcidump")
    os.makedirs(os.path.dirname(out), exist_ok=True)
    fcidump.from_integrals(out, h, g, n, mol.nelectron, mol.energy_nuc(), 0, tol=1e-14)
    nel = (mol.nelectron // 2, mol.nelectron // 2)
    if n <= 8:
        nroots = NROOTS
        e, _ = fci.direct_spin1.kernel(h, g, n, nel, ecore=mol.energy_nuc(), nroots=nroots,
                                       conv_tol=1e-12, max_space=60, max_cycle=400)
        write_ref(os.path.join(HERE, "reference", name + ".csv"), np.atleast_1d(e))
    if cas is not None:
        ncas, nelecas, tag = cas
        mc = mcscf.CASCI(mf, ncas, nelecas)
        mc.fcisolver = fci.direct_spin1.FCI()
        mc.fcisolver.nroots = min(NROOTS, 4 if ncas == 2 else NROOTS)
        mc.fcisolver.conv_tol = 1e-12
        mc.verbose = 0
        mc.kernel()
        write_ref(os.path.join(HERE, "reference", name + "_" + tag + ".csv"), np.atleast_1d(mc.e_tot))
    return mf.make_rdm1()


def h_chain(n, r):
    return [("H", (0.0, 0.0, i * r)) for i in range(n)]


def nh3(r_stretch):
    # Pyramidal NH3; the first two N-H bonds are stretched, the third stays at equilibrium.
    r_eq = 1.012
    theta = np.deg2rad(106.7)
    # Unit vectors with equal pairwise angle theta about the C3 axis (z).
    cos_t = np.cos(theta)
    # polar angle alpha from the z axis: cos(theta) = 1.5 sin^2(alpha) * (-1) ... solve numerically
    alpha = np.arccos(-np.sqrt((1 + 2 * cos_t) / 3.0))
    dirs = []
    for k in range(3):
        phi = 2 * np.pi * k / 3
        dirs.append(np.array([np.sin(alpha) * np.cos(phi), np.sin(alpha) * np.sin(phi), np.cos(alpha)]))
    lengths = [r_stretch, r_stretch, r_eq]
    atoms = [("N", (0.0, 0.0, 0.0))]
    for d, l in zip(dirs, lengths):
        atoms.append(("H", tuple(l * d)))
    return atoms


def h2o(r):
    half = np.deg2rad(104.5) / 2
    return [("O", (0.0, 0.0, 0.0)),
            ("H", (r * np.sin(half), 0.0, r * np.cos(half))),
            ("H", (-r * np.sin(half), 0.0, r * np.cos(half)))]


def grid(lo, hi, step):
    return [round(lo + i * step, 3) for i in range(int(round((hi - lo) / step)) + 1)]


if __name__ == "__main__":
    # H2 / STO-3G: equilibrium plus a bond-length scan.
    run(h_chain(2, 0.74), "sto-3g", "h2/h2_sto3g_0.740")
    dm = None
    for r in grid(0.5, 2.5, 0.1):
        dm = run(h_chain(2, r), "sto-3g", f"h2/scan/h2_sto3g_{r:.3f}", dm0=dm)

    # Linear hydrogen chains at 1.5 Angstrom spacing (STO-3G).
    for n in range(2, 13, 2):
        run(h_chain(n, 1.5), "sto-3g", f"hchain/h{n}_sto3g_1.500")

    # Strongly correlated H4 (STO-6G, 3.0 Angstrom spacing).
    run(h_chain(4, 3.0), "sto-6g", "h4/h4_sto6g_3.000")

    # NH3 with two N-H bonds stretched simultaneously (STO-3G, full 8 orbitals).
    dm = None
    for r in grid(0.8, 2.6, 0.2):
        dm = run(nh3(r), "sto-3g", f"nh3/nh3_sto3g_{r:.3f}", dm0=dm, cas=(6, 6, "cas6e6o"))

    # H2O with both O-H bonds stretched (STO-3G, 10 electrons in 7 orbitals).
    dm = None
    for r in grid(0.8, 2.6, 0.2):
        dm = run(h2o(r), "sto-3g", f"h2o/h2o_sto3g_{r:.3f}", dm0=dm)
    run(h2o(0.94), "sto-3g", "h2o/h2o_sto3g_0.940", cas=(2, 2, "cas2e2o"))
