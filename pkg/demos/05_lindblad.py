"""Continuous time: Lindblad generators and their discrete reduction.

A generator L splits as S_L - T_L with T_L invertible. The channel
M_L = S_L o T_L^-1 is ergodic exactly when the semigroup exp(tL) has a unique
stationary state. Convex combinations of ergodic generators need not be
ergodic unless their G operators match.
"""

import numpy as np

from qergodic import channels as ch
from qergodic import lindblad as lb

for gamma in (0.5, 1.0, 2.0):
    l = lb.from_channel(ch.flip(), gamma)
    rep = lb.reduce_to_channel(l)
    print(f"gamma={gamma}: M_L ergodic={rep.ergodic}, cond(I+G)={rep.condition_number:.3g}")
    for t, dist in rep.convergence_samples[:4]:
        print(f"   t={t:8.3f}  |rho(t) - rho_inf|_1 = {dist:.3e}")

l = lb.from_channel(ch.flip(), 1.0)
rho = np.array([[1.0, 0.3], [0.3, 0.0]], dtype=complex)
for t in (0.0, 0.5, 2.0, 20.0):
    print(f"t={t:5.1f}: rho(t) diag =", np.round(np.diag(lb.evolve(l, rho, t)).real, 6))

plus, minus = lb.lindblad_plus_minus(1), lb.lindblad_plus_minus(-1)
print("L+ ergodic:", lb.semigroup_ergodic(plus), " L- ergodic:", lb.semigroup_ergodic(minus))
mix = lb.convex_combine_generators(plus, minus, 0.5)
print("midpoint: matched G =", mix.matched, " ergodic =", mix.ergodic,
      " kernel dim =", lb.null_space_dim(mix.generator))

rep = lb.ergodic_representative(np.diag([1.0, 2.0]) + 0.5j * np.array([[0, 1], [1, 0]]),
                                 np.diag([0.3, 0.7]))
print("ergodic representative with prescribed G: kernel dim =", lb.null_space_dim(rep))
