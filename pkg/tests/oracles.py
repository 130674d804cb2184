"""Independent reference computations used to freeze expected values.

Nothing here imports the package's superoperator, spectral or exponential
code; everything is rebuilt from Kraus sums and plain numpy.
"""

import numpy as np


def apply_kraus(kraus, rho):
    return sum(k @ rho @ k.conj().T for k in kraus)


def superop_by_columns(kraus):
    """Matrix of the map in the row-major matrix-unit basis, built column by column."""
    d = kraus[0].shape[0]
    cols = []
    for j in range(d):
        for k in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[j, k] = 1
            cols.append(apply_kraus(kraus, e).reshape(-1))
    return np.array(cols).T


def eig_expm(a):
    """exp(a) through an eigendecomposition; adequate for diagonalizable test inputs."""
    w, v = np.linalg.eig(a)
    return v @ np.diag(np.exp(w)) @ np.linalg.inv(v)


def trace_norm(a):
    return float(np.linalg.svd(a, compute_uv=False).sum())


def sorted_multiset(values):
    values = np.asarray(values, dtype=complex)
    return values[np.lexsort((np.round(values.imag, 8), np.round(values.real, 8)))]


def multiset_distance(a, b):
    b = list(b)
    worst = 0.0
    for z in a:
        j = int(np.argmin([abs(z - w) for w in b]))
        worst = max(worst, abs(z - b[j]))
        b.pop(j)
    return worst


def dephase(rho):
    return np.diag(np.diag(rho))


def flip_semigroup(rho, gamma, t):
    """Closed form of exp(t gamma (M - I)) for the flip channel."""
    flip = np.diag([rho[1, 1], rho[0, 0]])
    a = (1 - np.exp(-gamma * t)) ** 2 / 2
    b = (1 - np.exp(-2 * gamma * t)) / 2
    return a * dephase(rho) + b * flip + np.exp(-gamma * t) * rho


def null_vectors(a, tol=1e-9):
    u, s, vh = np.linalg.svd(a)
    return vh[s < tol].conj().T
