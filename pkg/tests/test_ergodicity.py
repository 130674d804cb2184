import numpy as np
import pytest

from qergodic import channels as ch
from qergodic import ergodicity as erg
from qergodic.errors import (
    BadWitnessError,
    NotErgodicError,
    NotQubitError,
    NotRandomUnitaryError,
    NotUnitalError,
    PreconditionNotMetError,
)
from qergodic.operators import PAULI_X, PAULI_Y, PAULI_Z, clock_operator, fourier_matrix, shift_operator
from qergodic.spectral import Verdict, classify

import oracles


def ket(n, d):
    v = np.zeros(d, dtype=complex)
    v[n] = 1
    return v


# ---------------------------------------------------------------- orbit span

def test_orbit_span_examples():
    orb = erg.orbit_span(ch.shift_multiply(3, 0.5), ket(0, 3), 20)
    assert orb.reached_full
    orb = erg.orbit_span(ch.Channel((np.diag([1, -1]),)), ket(0, 2), 10)
    assert not orb.reached_full and set(orb.dims) == {1}
    orb = erg.orbit_span(ch.pauli_xy(0.3), ket(0, 2), 10)
    assert orb.reached_full and orb.steps_needed == 1
    assert orb.dims == (1, 2)


def test_orbit_span_rejects_non_unit():
    with pytest.raises(ValueError):
        erg.orbit_span(ch.flip(), np.array([1.0, 1.0]), 3)


def test_orbit_span_dims_monotone():
    for seed in range(20):
        c = ch.random_channel(3, 2, seed)
        dims = erg.orbit_span(c, ket(1, 3), 9).dims
        assert all(a <= b for a, b in zip(dims, dims[1:]))


# ---------------------------------------------------------------- Wielandt

@pytest.mark.parametrize("c, bound, mixing_only", [
    # 4 * (4 - 3 - 1) = 0 floored to 1
    (ch.pauli_xyz(1 / 3, 1 / 3, 1 / 3), 1, True),
    (ch.shift_multiply(3, 0.5), 54, False),
    (ch.fourier(3), 45, True),
])
def test_wielandt_examples(c, bound, mixing_only):
    w = erg.wielandt_check(c, require_mixing=mixing_only)
    assert w.bound == bound
    assert w.satisfied


def test_wielandt_requires_mixing():
    with pytest.raises(PreconditionNotMetError):
        erg.wielandt_check(ch.flip())
    with pytest.raises(PreconditionNotMetError):
        erg.wielandt_check(ch.erasure(2))


# ---------------------------------------------------------------- invariant subspaces

def test_minimal_invariant_subspace_erasure():
    rep = erg.minimal_invariant_subspace(ch.erasure(2))
    assert np.abs(rep.minimal_subspace - np.diag([1, 0])).max() < 1e-10
    assert not rep.is_irreducible
    # the support of rho0 lies inside every invariant subspace
    for p in (np.eye(2), np.diag([1, 0])):
        assert erg.invariance_defect(ch.erasure(2), p) < 1e-12
    assert erg.invariance_defect(ch.erasure(2), np.diag([0, 1])) > 0.5


def test_minimal_invariant_subspace_identity_witnesses():
    rep = erg.minimal_invariant_subspace(ch.identity(2))
    assert rep.minimal_subspace is None and not rep.is_irreducible
    got = sorted(np.real(np.diag(w)).tolist() for w in rep.witnesses)
    assert np.abs(np.array(got) - np.array([[0, 1], [1, 0]])).max() < 1e-10


def test_minimal_invariant_subspace_flip():
    rep = erg.minimal_invariant_subspace(ch.flip())
    assert np.abs(rep.minimal_subspace - np.eye(2)).max() < 1e-10
    assert rep.is_irreducible


def test_reducible_witnesses_and_duality():
    for seed in range(20):
        c = ch.random_reducible_channel(3, 2, seed)
        rep = erg.minimal_invariant_subspace(c)
        assert rep.minimal_subspace is None
        a, b = rep.witnesses
        assert np.abs(a @ b).max() < 1e-8
        adj = ch.adjoint(c)
        for p in rep.witnesses:
            assert erg.invariance_defect(c, p) < 1e-8
            assert erg.invariance_defect(adj, np.eye(3) - p) < 1e-8


def test_minimal_subspace_matches_support_of_fixed_state():
    for seed in range(30):
        c = ch.random_channel(2 + seed % 2, 1 + seed % 3, seed)
        rep = classify(c)
        inv = erg.minimal_invariant_subspace(c)
        assert (inv.minimal_subspace is not None) == rep.ergodic


# ---------------------------------------------------------------- commutants

@pytest.mark.parametrize("gens, dim", [
    ([PAULI_X, PAULI_Y], 1),
    ([PAULI_Z], 2),
    ([shift_operator(3), clock_operator(3)], 1),
    ([np.eye(3)], 9),
])
def test_commutant_dimension(gens, dim):
    assert erg.commutant_dimension(gens) == dim


def test_commutant_dimension_uses_adjoints():
    # a single Jordan block: its commutant alone is 2-dim, with the adjoint it is 1
    j = np.array([[0, 1], [0, 0]], dtype=complex)
    assert erg.commutant_dimension([j]) == 1


def test_commutant_dimension_errors():
    with pytest.raises(ValueError):
        erg.commutant_dimension([])
    with pytest.raises(ValueError):
        erg.commutant_dimension([np.eye(2), np.eye(3)])


# ---------------------------------------------------------------- unital and random-unitary

def test_qubit_random_unitary_examples():
    assert erg.qubit_random_unitary_ergodic(ch.pauli_xy(0.3))
    c = ch.Channel((np.sqrt(0.4) * np.eye(2), np.sqrt(0.6) * PAULI_Z))
    assert not erg.qubit_random_unitary_ergodic(c)
    for theta in (0.3, 1.7, np.pi):
        c = ch.Channel((np.sqrt(0.5) * PAULI_Z, np.sqrt(0.5) * np.diag([1, np.exp(1j * theta)])))
        assert not erg.qubit_random_unitary_ergodic(c)


def test_qubit_random_unitary_errors():
    with pytest.raises(NotQubitError):
        erg.qubit_random_unitary_ergodic(ch.shift_multiply(3, 0.5))
    with pytest.raises(NotRandomUnitaryError):
        erg.qubit_random_unitary_ergodic(ch.erasure(2))


def test_unital_ergodic_examples():
    assert erg.unital_ergodic(ch.pauli_xy(0.4))
    assert not erg.unital_ergodic(ch.Channel((np.sqrt(0.5) * np.eye(2), np.sqrt(0.5) * PAULI_Z)))
    for d in (2, 3, 4):
        assert erg.unital_ergodic(ch.fourier(d))
    with pytest.raises(NotUnitalError):
        erg.unital_ergodic(ch.erasure(2))


def test_random_unitary_detection():
    assert erg.is_random_unitary(ch.random_unitary_channel(3, [0.3, 0.7], 1))
    assert not erg.is_random_unitary(ch.flip())
    assert erg.span_contains_invertible(ch.flip())
    assert not erg.span_contains_invertible(ch.erasure(2))


# ---------------------------------------------------------------- square modulus and witnesses

def test_square_modulus_examples():
    r = erg.square_modulus_mixing_test(ch.pauli_xy(0.3))
    assert not r.square_modulus_ergodic and not r.channel_mixing
    r = erg.square_modulus_mixing_test(ch.pauli_xyz(0.2, 0.3, 0.5))
    assert r.square_modulus_ergodic and r.channel_mixing
    for d in (2, 3, 4):
        r = erg.square_modulus_mixing_test(ch.fourier(d))
        assert r.channel_mixing and not r.square_modulus_ergodic and not r.diagonalizable


def test_square_modulus_of_fourier_is_dephasing():
    sq = erg.square_modulus(ch.fourier(3))
    for n in range(3):
        p = np.outer(ket(n, 3), ket(n, 3))
        assert np.abs(ch.apply(sq, p) - p).max() < 1e-12


def test_streater_witness_examples():
    for d in (2, 3):
        f = fourier_matrix(d)
        for n in range(d):
            p = np.outer(ket(n, d), ket(n, d))
            assert erg.streater_witness_check(ch.fourier(d), p, f)
    assert not erg.streater_witness_check(ch.pauli_xyz(0.2, 0.3, 0.5), np.diag([1, 0]), np.eye(2))
    assert erg.streater_witness_check(ch.identity(2), np.diag([1, 0]), np.eye(2))


@pytest.mark.parametrize("p, u", [
    (np.eye(2), np.eye(2)),
    (np.zeros((2, 2)), np.eye(2)),
    (np.diag([0.5, 0]), np.eye(2)),
    (np.diag([1, 0]), 2 * np.eye(2)),
])
def test_streater_bad_witness(p, u):
    with pytest.raises(BadWitnessError):
        erg.streater_witness_check(ch.pauli_xy(0.3), p, u)


# ---------------------------------------------------------------- peripheral structure

def test_peripheral_structure_flip():
    ps = erg.peripheral_structure(ch.flip())
    assert ps.group_order == 2 and ps.simple and not ps.partial
    u = dict((round(w.real), u) for w, u in ps.intertwiners)[-1]
    phase = u[0, 0]
    assert np.abs(u - phase * PAULI_Z).max() < 1e-10
    assert np.abs(u @ u - np.eye(2)).max() < 1e-10


def test_peripheral_structure_pauli_xy():
    ps = erg.peripheral_structure(ch.pauli_xy(0.3))
    assert ps.group_order == 2
    u = [u for w, u in ps.intertwiners if w.real < 0][0]
    assert np.abs(u - u[0, 0] * PAULI_Z).max() < 1e-10


def test_peripheral_structure_mixing():
    ps = erg.peripheral_structure(ch.pauli_xyz(0.2, 0.3, 0.5))
    assert ps.group_order == 1
    assert len(ps.intertwiners) == 1
    assert np.abs(ps.intertwiners[0][1] - np.eye(2)).max() < 1e-10


@pytest.mark.parametrize("c", [ch.flip(), ch.pauli_xy(0.2), ch.shift_multiply(3, 0.5),
                               ch.shift_multiply(4, 0.7), ch.pauli_xyz(0.2, 0.3, 0.5)])
def test_peripheral_group_structure(c):
    ps = erg.peripheral_structure(c)
    assert 1 <= ps.group_order <= c.dim**2
    assert ps.multiplicative_defect < 1e-7
    assert ps.representation_defect < 1e-6
    assert ps.simple
    assert oracles.multiset_distance(ps.eigenvalues, ps.cyclic_group) < 1e-7
    for w, u in ps.intertwiners:
        assert np.abs(np.linalg.matrix_power(u, ps.group_order) - np.eye(c.dim)).max() < 1e-8


def test_peripheral_structure_partial_when_not_faithful():
    # flip on a 2-dim block plus a decaying third level
    k1 = np.zeros((3, 3)); k1[0, 1] = 1
    k2 = np.zeros((3, 3)); k2[1, 0] = 1
    k3 = np.zeros((3, 3)); k3[0, 2] = 1
    ps = erg.peripheral_structure(ch.Channel((k1, k2, k3)))
    assert ps.partial
    assert ps.group_order == 2


def test_peripheral_structure_requires_ergodic():
    with pytest.raises(NotErgodicError):
        erg.peripheral_structure(ch.identity(2))


@pytest.mark.parametrize("c", [ch.flip(), ch.pauli_xy(0.3), ch.shift_multiply(3, 0.4)])
def test_root_check_examples(c):
    assert erg.random_unitary_root_check(c)


def test_root_check_preconditions():
    with pytest.raises(PreconditionNotMetError):
        erg.random_unitary_root_check(ch.erasure(2))
    with pytest.raises(PreconditionNotMetError):
        erg.random_unitary_root_check(ch.identity(2))


# ---------------------------------------------------------------- powers

def test_mixing_via_powers_examples():
    assert erg.mixing_via_power_ergodicity(ch.flip()) == (False, 2)
    mixing, k = erg.mixing_via_power_ergodicity(ch.pauli_xyz(0.2, 0.3, 0.5))
    assert mixing and k == 2
    found = 0
    for seed in range(10):
        c = ch.random_unitary_channel(2, [0.5, 0.5], seed)
        if classify(c).verdict is Verdict.MIXING:
            assert erg.mixing_via_power_ergodicity(c) == (True, 2)
            found += 1
    assert found


def test_mixing_via_powers_without_invertible():
    # an amplitude-damping-like map on a faithful cycle with rank-1 Kraus operators
    c = ch.fourier(3)
    assert not erg.span_contains_invertible(ch.Channel((c.kraus[0],)))
    mixing, k = erg.mixing_via_power_ergodicity(c)
    assert mixing


def test_mixing_via_powers_precondition():
    with pytest.raises(PreconditionNotMetError):
        erg.mixing_via_power_ergodicity(ch.erasure(2))


# ---------------------------------------------------------------- randomization

def test_randomization_examples():
    r = erg.verify_randomization_stability(ch.flip(), ch.identity(2), 0.5)
    assert r.ok and r.mixing
    r = erg.verify_randomization_stability(ch.flip(), ch.erasure(2), 0.7)
    assert r.ok
    for seed in range(50):
        other = ch.random_channel(2, 3, seed)
        for p in (0.1, 0.5, 0.9):
            r = erg.verify_randomization_stability(ch.pauli_xyz(0.2, 0.3, 0.5), other, p)
            assert r.ok and r.mixing


def test_randomization_preconditions():
    with pytest.raises(PreconditionNotMetError):
        erg.verify_randomization_stability(ch.identity(2), ch.flip(), 0.5)
    with pytest.raises(PreconditionNotMetError):
        erg.verify_randomization_stability(ch.flip(), ch.flip(), 0.0)


def test_f_n():
    assert erg.f_n(1.0, 4) == 5
    assert abs(erg.f_n(0.5, 3) - (1 - 0.5**4) / 0.5) < 1e-15
