import itertools

import numpy as np
import pytest

from oscsig.heisenberg import (HeisenbergElement, h_inv, h_mul, heisenberg_operator,
                               heisenberg_system, line_basis, translate, twisted_convolution,
                               weyl_inverse, weyl_transform)
from oscsig.metrics import ambiguity_grid
from oscsig.signals import Line

from conftest import field


def random_op(rng, p):
    return rng.normal(size=(p, p)) + 1j * rng.normal(size=(p, p))


def test_group_law_example():
    F = field(5)
    assert h_mul(F, HeisenbergElement(1, 0, 0), HeisenbergElement(0, 1, 0)) == (1, 1, 3)


def test_inverse_and_center():
    F = field(5)
    for h in itertools.product(range(5), repeat=3):
        h = HeisenbergElement(*h)
        assert h_mul(F, h, h_inv(F, h)) == (0, 0, 0)
        for z in range(5):
            c = HeisenbergElement(0, 0, z)
            assert h_mul(F, c, h) == h_mul(F, h, c)


def test_representation_property_exhaustive_p5():
    F = field(5)
    elems = [HeisenbergElement(*h) for h in itertools.product(range(5), repeat=3)]
    ops = {h: heisenberg_operator(F, h) for h in elems}
    worst = 0.0
    for h1, h2 in itertools.product(elems, repeat=2):
        worst = max(worst, np.abs(ops[h1] @ ops[h2] - ops[h_mul(F, h1, h2)]).max())
    assert worst < 1e-10


@pytest.mark.parametrize("p", [5, 7])
def test_unitarity(p):
    F = field(p)
    for h in itertools.product(range(p), repeat=3):
        U = heisenberg_operator(F, h)
        assert np.abs(U @ U.conj().T - np.eye(p)).max() < 1e-10


def test_operator_examples():
    F = field(5)
    assert np.allclose(heisenberg_operator(F, (0, 0, 0)), np.eye(5))
    for tau, a in itertools.product(range(5), repeat=2):
        delta = np.eye(5)[a]
        assert np.allclose(heisenberg_operator(F, (tau, 0, 0)) @ delta, np.eye(5)[(a - tau) % 5])
    ones = np.ones(5) / np.sqrt(5)
    for w in range(5):
        expected = np.exp(2j * np.pi * w * np.arange(5) / 5) / np.sqrt(5)
        assert np.allclose(heisenberg_operator(F, (0, w, 0)) @ ones, expected)


def test_translate_matches_operator_up_to_central_phase():
    F = field(7)
    phi = np.arange(7) + 1j
    for tau, w in itertools.product(range(7), repeat=2):
        direct = heisenberg_operator(F, (tau, w, 0)) @ phi
        assert np.allclose(direct, F.psi(F.half * tau * w) * translate(F, phi, tau, w))


def brute_weyl(F, A):
    p = F.p
    out = np.zeros((p, p), dtype=complex)
    for tau, w in itertools.product(range(p), repeat=2):
        out[tau, w] = np.trace(A @ heisenberg_operator(F, ((-tau) % p, (-w) % p, 0))) / p
    return out


@pytest.mark.parametrize("p", [5, 7])
def test_weyl_transform_matches_trace_formula(p, rng):
    F = field(p)
    A = random_op(rng, p)
    assert np.abs(weyl_transform(F, A) - brute_weyl(F, A)).max() < 1e-12


def test_weyl_examples(rng):
    F = field(5)
    delta0 = np.zeros((5, 5))
    delta0[0, 0] = 1
    assert np.abs(weyl_transform(F, np.eye(5)) - delta0).max() < 1e-12
    W = weyl_transform(F, heisenberg_operator(F, (2, 3, 0)))
    assert abs(abs(W[2, 3]) - 1) < 1e-12
    assert np.abs(np.delete(W.ravel(), 2 * 5 + 3)).max() < 1e-12
    A, B = random_op(rng, 5), random_op(rng, 5)
    assert np.allclose(weyl_transform(F, A + B), weyl_transform(F, A) + weyl_transform(F, B))


@pytest.mark.parametrize("p", [5, 7, 13])
def test_weyl_round_trip(p, rng):
    F = field(p)
    for _ in range(20):
        A = random_op(rng, p)
        assert np.abs(weyl_inverse(F, weyl_transform(F, A)) - A).max() < 1e-10


def test_weyl_inverse_examples():
    F = field(5)
    delta0 = np.zeros((5, 5))
    delta0[0, 0] = 1
    assert np.allclose(weyl_inverse(F, delta0), np.eye(5))
    phi = np.array([1, 2j, -1, 0.5, 3]) / np.linalg.norm([1, 2, 1, 0.5, 3])
    proj = np.outer(phi, phi.conj())
    assert np.abs(weyl_inverse(F, weyl_transform(F, proj)) - proj).max() < 1e-12


@pytest.mark.parametrize("p", [5, 7])
def test_twisted_convolution_intertwines_composition(p, rng):
    F = field(p)
    for _ in range(5):
        A, B = random_op(rng, p), random_op(rng, p)
        lhs = weyl_transform(F, A @ B)
        rhs = twisted_convolution(F, weyl_transform(F, A), weyl_transform(F, B))
        assert np.abs(lhs - rhs).max() < 1e-10


def test_twisted_convolution_unit_and_associativity(rng):
    F = field(5)
    unit = np.zeros((5, 5))
    unit[0, 0] = 1
    f, g, h = (weyl_transform(F, random_op(rng, 5)) for _ in range(3))
    assert np.allclose(twisted_convolution(F, f, unit), f)
    assert np.allclose(twisted_convolution(F, unit, f), f)
    left = twisted_convolution(F, twisted_convolution(F, f, g), h)
    right = twisted_convolution(F, f, twisted_convolution(F, g, h))
    assert np.abs(left - right).max() < 1e-10


def test_twisted_convolution_of_shift_operators():
    F = field(7)
    u, v = (1, 4), (3, 2)
    Wu = weyl_transform(F, heisenberg_operator(F, u))
    Wv = weyl_transform(F, heisenberg_operator(F, v))
    product = heisenberg_operator(F, u) @ heisenberg_operator(F, v)
    assert np.abs(twisted_convolution(F, Wu, Wv) - weyl_transform(F, product)).max() < 1e-12


def test_system_counts_and_bases():
    F = field(5)
    S = heisenberg_system(F)
    assert len(S.groups) == 6 and len(S) == 30
    # m = 0 line gives the exponentials psi_c
    expected = np.exp(2j * np.pi * np.outer(np.arange(5), np.arange(5)) / 5) / np.sqrt(5)
    assert np.allclose(line_basis(F, Line(0, 5)), expected)
    assert np.allclose(line_basis(F, Line(5, 5)), np.eye(5))


@pytest.mark.parametrize("p", [5, 7, 13])
def test_chirps_are_line_eigenvectors(p):
    F = field(p)
    for m in range(p):
        basis = line_basis(F, Line(m, p))
        for c, tau in itertools.product(range(p), range(p)):
            U = heisenberg_operator(F, (tau, m * tau % p, 0))
            assert np.abs(U @ basis[c] - F.psi(c * tau) * basis[c]).max() < 1e-10


def test_delta_ambiguity_is_vertical_line():
    F = field(5)
    mag = np.abs(ambiguity_grid(F, np.eye(5)[0]))
    expected = np.zeros((5, 5))
    expected[0, :] = 1
    assert np.abs(mag - expected).max() < 1e-12


@pytest.mark.parametrize("p", [5, 7])
def test_system_properties(p):
    F = field(p)
    S = heisenberg_system(F)
    X = S.matrix()
    for j, idx in S.by_group().items():
        assert np.abs(X[idx].conj() @ X[idx].T - np.eye(p)).max() < 1e-10
    for s in S:
        line = S.groups[s.group]
        assert np.abs(np.abs(ambiguity_grid(F, s.values)) - line.indicator()).max() < 1e-9
        if line.index != p:
            assert np.abs(np.abs(s.values) - 1 / np.sqrt(p)).max() < 1e-10
    for a, b in itertools.combinations(range(len(S)), 2):
        if S[a].group != S[b].group:
            assert np.abs(ambiguity_grid(F, S[a].values, S[b].values)).max() <= 1 / np.sqrt(p) + 1e-9
