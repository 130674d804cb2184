"""Peripheral spectrum of ergodic channels with a faithful fixed state.

The peripheral eigenvalues form a cyclic group of roots of unity, each one
carried by a unitary U with M_i U = w U M_i. Powers of a mixing channel stay
ergodic, which gives a finite test for mixing.
"""

import numpy as np

from qergodic import channels as ch
from qergodic import ergodicity as erg
from qergodic.spectral import classify

for c in (ch.flip(), ch.pauli_xy(0.3), ch.shift_multiply(3, 0.5)):
    ps = erg.peripheral_structure(c)
    print(f"{c.label}: group order {ps.group_order}, eigenvalues",
          np.round(ps.eigenvalues, 10))
    for w, u in ps.intertwiners:
        print("   w =", np.round(w, 10), " U =", np.round(u, 6).tolist())
    print("   roots of unity check:", erg.random_unitary_root_check(c))

for c in (ch.flip(), ch.pauli_xyz(0.2, 0.3, 0.5), ch.fourier(3)):
    mixing, k = erg.mixing_via_power_ergodicity(c)
    print(f"{c.label}: mixing via powers = {mixing} (checked up to k = {k}), "
          f"spectral verdict = {classify(c).verdict}")

w = erg.wielandt_check(ch.fourier(3))
print("fourier(3) Wielandt bound", w.bound, "orbits full after", w.steps_needed, "steps")
