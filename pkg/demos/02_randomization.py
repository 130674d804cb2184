"""Randomizing channels.

Mixing an ergodic channel with any other channel keeps it ergodic, and the
support of the new fixed state contains the old one. Mixing with the identity
kills every peripheral eigenvalue except 1, so ergodic becomes mixing.
"""

import numpy as np

from qergodic import channels as ch
from qergodic import ergodicity as erg
from qergodic.operators import support_contains
from qergodic.spectral import classify

half = ch.convex_combine([(0.5, ch.flip()), (0.5, ch.identity(2))])
print("0.5 flip + 0.5 id:", classify(half).verdict)

erasure = ch.erasure(2)
rho0 = classify(erasure).fixed_state
for seed in range(5):
    other = ch.random_channel(2, 3, seed)
    mix = ch.convex_combine([(0.3, erasure), (0.7, other)])
    rep = classify(mix)
    print(f"seed {seed}: verdict {rep.verdict}, support contains |0><0|:",
          support_contains(rep.fixed_state, rho0))

report = erg.verify_randomization_stability(ch.flip(), ch.erasure(2), 0.7)
print("stability report:", report)
print("f_N(0.5) for N = 1, 5, 20:", [round(erg.f_n(0.5, n), 6) for n in (1, 5, 20)])
print("stays bounded by", 1 / 0.5, "as N grows:", np.isclose(erg.f_n(0.5, 200), 2.0))
