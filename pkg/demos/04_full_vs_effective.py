"""Where the effective Kerr picture breaks down.

Propagates coherent states under the full four-level/two-mode Hamiltonian
and compares against the diagonal cross-Kerr evolution, at the operating
point and at a deliberately non-adiabatic one.
"""

import numpy as np

from kerrcircuit import (
    NSchemeParams,
    Truncation,
    adiabatic_check,
    compare_full_vs_effective,
    susceptibilities,
)

times = np.linspace(0.0, 200.0, 9)

for label, p in (
    ("operating point", NSchemeParams()),
    ("strong coupling (non-adiabatic)", NSchemeParams(g1=0.8, g2=0.8)),
):
    rep = adiabatic_check(p)
    chi3 = susceptibilities(p, require_adiabatic=False).chi3
    res = compare_full_vs_effective(
        p, chi3, Truncation(3, 3), alpha=0.7, beta=0.7, times=times
    )
    print(f"{label}: r1 = {rep.r1:.3f}, r2 = {rep.r2:.3f}, "
          f"chi3/2pi = {chi3.real * 1e3:.3f} MHz")
    for t, inf in zip(res.times, res.infidelity):
        print(f"  t = {t:6.1f} ns   infidelity = {inf:.2e}")
