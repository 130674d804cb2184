import numpy as np
import pytest

from qergodic import channels as ch
from qergodic import superop
from qergodic.errors import BadParamsError, BadWeightsError, DimensionMismatchError, NotPSDError, UnknownNameError
from qergodic.operators import PAULI_X, PAULI_Y, PAULI_Z, clock_operator, is_unitary, matrix_units, probe_states, shift_operator

import oracles


def same_action(a, b, tol=1e-10):
    return np.abs(a.superoperator() - b.superoperator()).max() < tol


@pytest.mark.parametrize("c, defect", [
    (ch.identity(2), 0.0),
    (ch.flip(), 0.0),
    # |0.81 * 2 - 2| from the single Kraus 0.9 I
    (ch.Channel((0.9 * np.eye(2),)), 0.38),
])
def test_validate_examples(c, defect):
    rep = ch.validate(c)
    assert abs(rep.tp_defect - defect) < 1e-12
    assert rep.accepted == (defect == 0.0)


def test_channel_rejects_mixed_dims():
    with pytest.raises(DimensionMismatchError):
        ch.Channel((np.eye(2), np.eye(3)))
    with pytest.raises(DimensionMismatchError):
        ch.Channel(())


def test_channel_is_immutable():
    c = ch.flip()
    with pytest.raises(ValueError):
        c.kraus[0][0, 0] = 1


def test_apply_examples():
    ket0, ket1 = np.diag([1.0, 0]), np.diag([0, 1.0])
    assert np.abs(ch.apply(ch.flip(), ket0) - ket1).max() < 1e-15
    rho = np.array([[0.6, 0.2j], [-0.2j, 0.4]])
    assert np.abs(ch.apply(ch.identity(2), rho) - rho).max() < 1e-15
    assert np.abs(ch.apply(ch.erasure(2), ket1) - ket0).max() < 1e-15
    with pytest.raises(DimensionMismatchError):
        ch.apply(ch.flip(), np.eye(3))


def test_compose_examples():
    f = ch.flip()
    assert np.abs(ch.compose(f, f).superoperator() - oracles.superop_by_columns(ch.dephasing(2).kraus)).max() < 1e-12
    c = ch.random_channel(2, 3, seed=5)
    assert same_action(ch.compose(ch.identity(2), c), c)
    e = ch.erasure(2)
    for x in matrix_units(2):
        assert np.abs(ch.apply(ch.compose(e, c), x) - ch.apply(e, x)).max() < 1e-12


def test_compose_matches_sequential_application():
    a, b = ch.random_channel(3, 2, 1), ch.random_channel(3, 3, 2)
    for rho in probe_states(3):
        assert np.abs(ch.apply(ch.compose(a, b), rho) - ch.apply(a, ch.apply(b, rho))).max() < 1e-10


def test_compose_associative():
    a, b, c = (ch.random_channel(2, k, k) for k in (2, 3, 4))
    left = ch.compose(ch.compose(a, b), c)
    right = ch.compose(a, ch.compose(b, c))
    for rho in probe_states(2):
        assert np.abs(ch.apply(left, rho) - ch.apply(right, rho)).max() < 1e-9


def test_power_examples():
    f = ch.flip()
    assert same_action(ch.power(f, 2), ch.dephasing(2))
    assert same_action(ch.power(f, 3), f)
    assert same_action(ch.power(ch.random_channel(3, 2, 9), 0), ch.identity(3))
    four = ch.power(ch.fourier(3), 2)
    for rho in probe_states(3):
        assert np.abs(ch.apply(four, rho) - np.eye(3) / 3).max() < 1e-12


def test_power_switches_to_superoperator_route():
    c = ch.random_channel(2, 4, seed=3)
    p = ch.power(c, 4)  # 4^4 = 256 Kraus factors, above the cap
    assert len(p) <= 4
    ref = np.linalg.matrix_power(oracles.superop_by_columns(c.kraus), 4)
    assert np.abs(p.superoperator() - ref).max() < 1e-10
    with pytest.raises(BadParamsError):
        ch.power(c, -1)


def test_convex_combine_examples():
    c = ch.random_channel(2, 2, 4)
    assert same_action(ch.convex_combine([(1.0, c)]), c)
    assert same_action(ch.convex_combine([(0.3, c), (0.7, c)]), c)
    u = np.cos(0.3) * np.eye(2) - 1j * np.sin(0.3) * PAULI_X
    mix = ch.convex_combine([(0.5, ch.Channel((u,))), (0.5, ch.Channel((u.conj().T,)))])
    assert ch.validate(mix).tp_defect < 1e-12
    assert ch.is_unital(mix)


@pytest.mark.parametrize("terms", [
    [(0.5, ch.flip()), (0.6, ch.flip())],
    [(-0.1, ch.flip()), (1.1, ch.flip())],
    [],
])
def test_convex_combine_bad_weights(terms):
    with pytest.raises(BadWeightsError):
        ch.convex_combine(terms)


def test_adjoint_examples():
    rng = np.random.default_rng(0)
    q, _ = np.linalg.qr(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
    adj = ch.adjoint(ch.Channel((q,)))
    assert np.abs(adj.kraus[0] - q.conj().T).max() < 1e-15
    rho0 = np.diag([0.8, 0.2])
    e = ch.adjoint(ch.erasure(2, rho0))
    a = np.array([[1.0, 2 - 1j], [2 + 1j, -3.0]])
    assert np.abs(ch.apply(e, a) - np.eye(2) * np.trace(rho0 @ a)).max() < 1e-12
    assert same_action(ch.adjoint(ch.flip()), ch.flip())


def test_adjoint_pairing():
    c = ch.random_channel(3, 3, 11)
    adj = ch.adjoint(c)
    for a in matrix_units(3):
        for b in matrix_units(3):
            lhs = np.vdot(a, ch.apply(c, b))
            rhs = np.vdot(ch.apply(adj, a), b)
            assert abs(lhs - rhs) < 1e-10
    assert adj.unit_defect() < 1e-10
    assert same_action(ch.adjoint(adj), c)


def test_is_unital_examples():
    assert ch.is_unital(ch.random_unitary_channel(3, [0.2, 0.8], seed=1))
    assert not ch.is_unital(ch.erasure(2))
    assert ch.is_unital(ch.fourier(4))


def test_gallery_conventions():
    f = ch.gallery("flip", 2)
    assert np.abs(f.kraus[0] - np.array([[0, 1], [0, 0]])).max() == 0
    assert np.abs(f.kraus[1] - np.array([[0, 0], [1, 0]])).max() == 0
    sm = ch.gallery("shift_multiply", 3, p=0.5)
    omega = np.exp(2j * np.pi / 3)
    s = np.zeros((3, 3))
    for n in range(3):
        s[(n + 1) % 3, n] = 1
    assert np.abs(sm.kraus[0] - np.sqrt(0.5) * s).max() < 1e-15
    assert np.abs(sm.kraus[1] - np.sqrt(0.5) * np.diag(omega ** np.arange(3))).max() < 1e-15
    fo = ch.gallery("fourier", 3)
    for n in range(3):
        e_n = np.exp(2j * np.pi * np.arange(3) * n / 3) / np.sqrt(3)
        assert np.abs(fo.kraus[n] - np.outer(e_n, np.eye(3)[n])).max() < 1e-15
    assert np.abs(shift_operator(3) - s).max() == 0
    assert np.abs(clock_operator(3) - np.diag(omega ** np.arange(3))).max() < 1e-15


@pytest.mark.parametrize("name, dim, params", [
    ("identity", 3, {}), ("flip", 2, {}), ("erasure", 3, {}), ("pauli_xy", 2, {"p": 0.2}),
    ("pauli_xyz", 2, {"px": 0.1, "py": 0.2, "pz": 0.7}), ("shift_multiply", 4, {"p": 0.3}),
    ("fourier", 4, {}), ("depolarizing", 3, {"p": 0.6}),
])
def test_gallery_channels_are_cptp(name, dim, params):
    c = ch.gallery(name, dim, **params)
    assert c.dim == dim
    assert ch.validate(c).tp_defect < 1e-12


def test_gallery_errors():
    with pytest.raises(UnknownNameError):
        ch.gallery("teleport", 2)
    with pytest.raises(BadParamsError):
        ch.gallery("flip", 3)
    with pytest.raises(BadParamsError):
        ch.gallery("pauli_xy", 2, p=1.5)
    with pytest.raises(BadParamsError):
        ch.gallery("identity", 2, p=0.5)
    with pytest.raises(BadParamsError):
        ch.gallery("pauli_xyz", 2, px=0.5, py=0.5, pz=0.5)


def test_depolarizing_action():
    c = ch.depolarizing(3, 0.4)
    rho = np.diag([0.5, 0.3, 0.2]).astype(complex)
    assert np.abs(ch.apply(c, rho) - (0.6 * rho + 0.4 * np.eye(3) / 3)).max() < 1e-12


def test_random_channel_examples():
    c = ch.random_channel(2, 1, seed=123)
    assert is_unitary(c.kraus[0])
    a, b = ch.random_channel(2, 4, 7), ch.random_channel(2, 4, 7)
    assert all(np.array_equal(x, y) for x, y in zip(a.kraus, b.kraus))
    assert ch.validate(ch.random_channel(3, 2, 1)).tp_defect < 1e-12


def test_random_unitary_channel_examples():
    c = ch.random_unitary_channel(3, [0.5, 0.25, 0.25], seed=2)
    again = ch.random_unitary_channel(3, [0.5, 0.25, 0.25], seed=2)
    assert all(np.array_equal(x, y) for x, y in zip(c.kraus, again.kraus))
    for k, p in zip(c.kraus, [0.5, 0.25, 0.25]):
        u = k / np.sqrt(p)
        assert np.abs(u.conj().T @ u - np.eye(3)).max() < 1e-10
    assert ch.validate(c).tp_defect < 1e-12
    with pytest.raises(BadWeightsError):
        ch.random_unitary_channel(2, [0.5, 0.4], seed=0)


def test_random_reducible_has_orthogonal_blocks():
    c = ch.random_reducible_channel(3, 2, seed=4)
    assert ch.validate(c).tp_defect < 1e-12
    s = c.superoperator()
    ones = np.sum(np.abs(np.linalg.eigvals(s) - 1) < 1e-8)
    assert ones >= 2


def test_child_seed_is_stable():
    assert ch.child_seed(42, 0) == ch.child_seed(42, 0)
    assert ch.child_seed(42, 0) != ch.child_seed(42, 1)
    assert 0 <= ch.child_seed(2**70, 3) < 2**64


def test_nonexpansive():
    rng = ch.rng_for(99)
    for i in range(100):
        d = 2 + i % 2
        c = ch.random_channel(d, 1 + i % 4, seed=i)
        rho, sigma = ch.random_state(d, rng), ch.random_state(d, rng)
        lhs = oracles.trace_norm(ch.apply(c, rho) - ch.apply(c, sigma))
        assert lhs <= oracles.trace_norm(rho - sigma) + 1e-9
        out = ch.apply(c, rho)
        assert np.linalg.eigvalsh((out + out.conj().T) / 2).min() > -1e-9


def test_superoperator_matches_column_oracle():
    for c in (ch.flip(), ch.random_channel(3, 2, 8), ch.fourier(3)):
        assert np.abs(c.superoperator() - oracles.superop_by_columns(c.kraus)).max() < 1e-12


def test_flip_superoperator_entries():
    s = ch.flip().superoperator()
    # e00 <-> e11, coherences annihilated
    expected = np.zeros((4, 4))
    expected[3, 0] = expected[0, 3] = 1
    assert np.abs(s - expected).max() == 0


def test_kraus_round_trip():
    c = ch.random_channel(3, 2, 21)
    back = superop.kraus_from_superoperator(c.superoperator())
    assert len(back) == 2
    assert np.abs(superop.superoperator_from_kraus(back) - c.superoperator()).max() < 1e-12


def test_kraus_from_non_cp_map_raises():
    transpose = np.zeros((4, 4))
    for j in range(2):
        for k in range(2):
            transpose[k * 2 + j, j * 2 + k] = 1
    with pytest.raises(NotPSDError):
        superop.kraus_from_superoperator(transpose)


def test_vectorization_identities():
    rng = np.random.default_rng(1)
    g = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    x = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    assert np.abs(superop.left_multiplication(g) @ superop.vec(x) - superop.vec(g @ x)).max() < 1e-12
    assert np.abs(superop.right_multiplication(g) @ superop.vec(x) - superop.vec(x @ g)).max() < 1e-12
    assert superop.VECTORIZATION == "row-major"


def test_pauli_channels_kraus_form():
    c = ch.pauli_xyz(0.2, 0.3, 0.5)
    for k, (w, p) in zip(c.kraus, [(0.2, PAULI_X), (0.3, PAULI_Y), (0.5, PAULI_Z)]):
        assert np.abs(k - np.sqrt(w) * p).max() < 1e-15
