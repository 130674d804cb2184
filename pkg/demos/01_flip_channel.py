"""The flip channel: ergodic but not mixing.

Swapping the populations of a qubit has a unique fixed state, the maximally
mixed one, but a trajectory started from |0><0| oscillates forever. Its time
average converges, its iterates do not.
"""

import numpy as np

from qergodic import channels as ch
from qergodic.spectral import cesaro_average, classify

flip = ch.flip()
rep = classify(flip)
print("verdict:", rep.verdict)
print("peripheral eigenvalues:", np.round(rep.peripheral, 12))
print("fixed state:\n", np.round(rep.fixed_state.real, 12))

rho = np.diag([1.0, 0.0]).astype(complex)
state = rho
for n in range(4):
    print(f"M^{n}(rho) diagonal:", np.round(np.diag(state).real, 6))
    state = ch.apply(flip, state)

for n in (1, 10, 100, 1000):
    avg = cesaro_average(flip, rho, n)
    print(f"Cesaro average N={n:4d}: diag =", np.round(np.diag(avg).real, 6))

print("flip o flip:", classify(ch.power(flip, 2)).verdict)
