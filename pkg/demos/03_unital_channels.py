"""Unital channels: commutants, square moduli and the Fourier counterexample.

For unital channels ergodicity is a statement about the commutant of the
Kraus operators. Ergodicity of the square modulus M^dag o M is enough for
mixing, but the Fourier channel shows it is not necessary.
"""

import numpy as np

from qergodic import channels as ch
from qergodic import ergodicity as erg
from qergodic.operators import PAULI_X, PAULI_Y, PAULI_Z
from qergodic.spectral import classify

print("commutant dim of {X, Y}:", erg.commutant_dimension([PAULI_X, PAULI_Y]))
print("commutant dim of {Z}:   ", erg.commutant_dimension([PAULI_Z]))

for c in (ch.pauli_xy(0.3), ch.pauli_xyz(0.2, 0.3, 0.5), ch.dephasing(2)):
    sq = erg.square_modulus_mixing_test(c)
    print(f"{c.label:28s} unital_ergodic={erg.unital_ergodic(c)!s:5s} "
          f"square_modulus_ergodic={sq.square_modulus_ergodic!s:5s} verdict={classify(c).verdict}")

for d in (2, 3, 4):
    f = ch.fourier(d)
    const = np.outer(np.eye(d).reshape(-1), np.eye(d).reshape(-1)) / d
    gap = np.abs(ch.power(f, 2).superoperator() - const).max()
    sq = erg.square_modulus(f)
    print(f"fourier({d}): verdict={classify(f).verdict}, |M^2 - I/d Tr| = {gap:.1e}, "
          f"fixed dim of M^dag M = {classify(sq).fixed_space_dim}")
