import itertools

import numpy as np
import pytest

from oscsig.heisenberg import heisenberg_operator, weyl_transform
from oscsig.metrics import (ambiguity, ambiguity_grid, fourier_invariance_check, pairwise_max,
                            system_report)
from oscsig.oscillator import extended_system
from oscsig.signals import SignalSystem
from oscsig.weil import op_fourier

from conftest import field, system


def brute_matrix_coefficient(F, phi, phi2):
    out = np.zeros((F.p, F.p), dtype=complex)
    for tau, w in itertools.product(range(F.p), repeat=2):
        U = heisenberg_operator(F, (tau, w, 0))
        out[tau, w] = np.vdot(phi, U @ phi2) * F.psi(-F.half * tau * w)
    return out


def unit(rng, p):
    v = rng.normal(size=p) + 1j * rng.normal(size=p)
    return v / np.linalg.norm(v)


def test_grid_matches_direct_inner_products(rng):
    F = field(7)
    a, b = unit(rng, 7), unit(rng, 7)
    assert np.abs(ambiguity_grid(F, a, b) - brute_matrix_coefficient(F, a, b)).max() < 1e-12


def test_ambiguity_examples(rng):
    F = field(5)
    table = ambiguity(F, np.eye(5)[0].astype(complex))
    assert np.allclose(table.magnitude[0], 1) and np.allclose(table.magnitude[1:], 0)
    phi = unit(rng, 5)
    table = ambiguity(F, phi)
    assert abs(table.grid[0, 0] - 1) < 1e-10
    assert table.peak[:2] == (0, 0)


def test_adjoint_identity(rng):
    F = field(7)
    for _ in range(10):
        a, b = unit(rng, 7), unit(rng, 7)
        m_ab = np.abs(ambiguity_grid(F, a, b))
        m_ba = np.abs(ambiguity_grid(F, b, a))
        neg = (-np.arange(7)) % 7
        assert np.abs(m_ab - m_ba[np.ix_(neg, neg)]).max() < 1e-12


def test_ambiguity_is_weyl_transform_of_projector(rng):
    F = field(5)
    phi = unit(rng, 5)
    W = weyl_transform(F, np.outer(phi, phi.conj()))
    neg = (-np.arange(5)) % 5
    # <phi, pi(v) phi> = Tr(P pi(v)) = p W_P(-v)
    for tau in range(5):
        for w in range(5):
            c = np.vdot(phi, heisenberg_operator(F, (tau, w, 0)) @ phi)
            assert abs(c - 5 * W[neg[tau], neg[w]]) < 1e-9
    assert np.allclose(np.abs(ambiguity_grid(F, phi)), 5 * np.abs(W[np.ix_(neg, neg)]))


@pytest.mark.parametrize("kind", ["split", "nonsplit"])
def test_pairwise_max_matches_brute_force_p5(kind):
    F = field(5)
    S = system(5, kind)
    X = S.matrix()
    M = pairwise_max(F, X)
    for i, j in itertools.product(range(len(S)), repeat=2):
        grid = np.abs(brute_matrix_coefficient(F, X[i], X[j]))
        if i == j:
            grid[0, 0] = 0
        assert abs(M[i, j] - grid.max()) < 1e-12


def test_pairwise_max_threaded_is_identical(monkeypatch):
    F = field(7)
    X = system(7, "nonsplit").matrix()[:30]
    single = pairwise_max(F, X)
    monkeypatch.setenv("OSCSIG_THREADS", "3")
    assert np.array_equal(single, pairwise_max(F, X))


def test_heisenberg_cross_bound_p5():
    r = system_report(system(5, "heisenberg"))
    assert r.ok
    cross = next(c for c in r.checks if c.name == "cross_basis")
    assert cross.value <= 1 / np.sqrt(5) + 1e-9


def test_p13_nonsplit_auto_bound():
    r = system_report(system(13, "nonsplit"))
    auto = next(c for c in r.checks if c.name == "auto_offcenter")
    assert auto.bound == pytest.approx(2 * np.sqrt(13) / 14)
    assert auto.value <= 0.5151
    assert r.ok


@pytest.mark.parametrize("p,kind", [(5, "split"), (7, "split"), (5, "nonsplit"), (7, "nonsplit")])
def test_reports_pass(p, kind):
    r = system_report(system(p, kind))
    assert r.ok, r.failures
    assert {c.name for c in r.checks if not c.asserted} == {"headline_auto", "headline_cross",
                                                            "headline_supremum"}


def test_report_flags_broken_signal():
    S = system(5, "nonsplit")
    bad = SignalSystem(S.field, S.kind, S.groups, [s for s in S.signals], S.metadata)
    broken = bad.signals[3].values.copy()
    broken[2] = 0
    bad.signals[3] = type(bad.signals[3])(broken, bad.signals[3].group, bad.signals[3].character)
    r = system_report(bad)
    assert not r.ok
    assert any(bad.signals[3].label in f for f in r.failures)


def test_report_is_reproducible():
    a = system_report(system(7, "split")).to_kv()
    b = system_report(system(7, "split")).to_kv()
    assert a == b


def test_extended_report_p5():
    r = system_report(extended_system(system(5, "split")), extended_pairs=300)
    assert r.ok


@pytest.mark.parametrize("p,kind", [(5, "split"), (5, "nonsplit"), (7, "split"), (7, "nonsplit")])
def test_fourier_invariance(p, kind):
    S = system(p, kind)
    table, failures = fourier_invariance_check(S)
    assert not failures
    assert len(table) == len(S)
    assert min(m.overlap for m in table) >= 1 - 1e-8


def test_fourier_eigenvector_matches_itself():
    # the torus of powers of w: its signals are DFT eigenvectors
    S = system(5, "nonsplit")
    F = S.field
    Fm = op_fourier(F)
    table, _ = fourier_invariance_check(S)
    matched_self = [m for m in table if m.match == m.signal]
    assert matched_self
    for m in matched_self:
        v = S[m.signal].values
        assert np.linalg.norm(Fm @ v - np.vdot(v, Fm @ v) * v) < 1e-8
