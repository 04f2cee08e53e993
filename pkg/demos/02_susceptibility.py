"""Cross-Kerr susceptibility at the operating point, with and without
decoherence, cross-checked against brute-force propagation.
"""

import numpy as np

from kerrcircuit import (
    NSchemeParams,
    chi_closed_forms,
    conditional_phase_oracle,
    susceptibilities,
)

p = NSchemeParams()  # g1 = g2 = 0.3 GHz, Omega_c = Delta = 1.5 GHz
s = susceptibilities(p)
print(f"chi3/2pi = {s.chi3.real * 1e3:.4f} MHz (closed form: "
      f"{chi_closed_forms(p)[1].real * 1e3:.4f} MHz)")

oracle = conditional_phase_oracle(p)
print(f"brute-force oracle: {oracle.chi3.real * 1e3:.4f} MHz "
      f"({abs(oracle.chi3.real - s.chi3.real) / s.chi3.real:.1%} off at n_max = 1)")

# the agreement tightens as the adiabatic ratios shrink
tight = p.with_(omega_c=3.0, big_delta=6.0)
s_t = susceptibilities(tight)
o_t = conditional_phase_oracle(tight)
print(f"tightened ratios: {abs(o_t.chi3.real - s_t.chi3.real) / s_t.chi3.real:.2%} off")

# gamma3 makes chi3 complex; the relative decay is exactly gamma3/Delta
for gamma3 in (1.5e-4, 5e-4, 1.5e-3):
    sd = susceptibilities(p.with_(gamma3=gamma3))
    print(f"gamma3/2pi = {gamma3 * 1e3:.2f} MHz: "
          f"Im(chi3)/Re(chi3) = {sd.relative_decay:.2e} "
          f"(= gamma3/Delta = {gamma3 / 1.5:.2e})")

# gamma5 switches on the linear susceptibility; both stay small relative
# to the Kerr term
sg = susceptibilities(p.with_(gamma4=5e-4, gamma3=5e-4))
print(f"gamma5/2pi = 0.5 MHz: chi1'/chi3' = {sg.dispersion_factor:.2e}, "
      f"chi1''/chi3' = {sg.linear_absorption_factor:.2e}")
