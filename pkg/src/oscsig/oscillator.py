"""Maximal tori of SL2(F_p) and the oscillator signal systems built on them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .field import PrimeField, SL2Element
from .heisenberg import translate
from .signals import SignalSystem, SystemSignal, TorusDescriptor
from .weil import apply_weil, weil_bruhat

CLUSTER_TOL = 1e-8
RESIDUAL_TOL = 1e-8


class ClusteringError(ArithmeticError):
    """Eigenvalue clusters are too close to separate reliably."""


# -- tori -------------------------------------------------------------------

def split_torus_reps(F: PrimeField) -> list[SL2Element]:
    """Conjugators g = [[1, b], [c, 1 + bc]], one per split torus g A g^-1.

    (b, c) and (-b, (1 + bc)/b) give the same torus when b != 0; the smaller
    integer pair of each such couple is kept.
    """
    p = F.p
    reps = [SL2Element.make(F, 1, 0, c, 1) for c in range(p)]
    for b in range(1, p):
        binv = F.inv(b)
        for c in range(p):
            partner = ((-b) % p, (1 + b * c) * binv % p)
            if (b, c) < partner:
                reps.append(SL2Element.make(F, 1, b, c, 1 + b * c))
    return reps


def split_model_generator(F: PrimeField) -> SL2Element:
    """diag(r, 1/r) with r the field's primitive root."""
    return SL2Element.diag(F, F.generator)


def nonsplit_model_elements(F: PrimeField) -> list[SL2Element]:
    """T_delta = {[[a, delta b], [b, a]] : a^2 - delta b^2 = 1}, sorted by entries."""
    p, delta = F.p, F.nonsquare
    out = [
        SL2Element(a, delta * b % p, b, a, p)
        for a in range(p) for b in range(p)
        if (a * a - delta * b * b) % p == 1
    ]
    return sorted(out, key=lambda g: g.entries)


def nonsplit_model_generator(F: PrimeField) -> SL2Element:
    """First element of T_delta (in entry order) of full order p + 1."""
    for g in nonsplit_model_elements(F):
        if g.order() == F.p + 1:
            return g
    raise AssertionError("T_delta is not cyclic")  # unreachable for a field


def torus_generator(T: TorusDescriptor) -> SL2Element:
    return T.generator


def _sqrt_table(F: PrimeField) -> dict[int, int]:
    return {k * k % F.p: k for k in range(1, (F.p + 1) // 2)}


def _conjugator_for(F: PrimeField, x: int, y: int, z: int, roots: dict[int, int]) -> SL2Element:
    """g with g X0 g^-1 = X for X0 = [[0, delta], [1, 0]] and X = [[x, y], [z, -x]].

    Columns of g are (u, X u); det [u | Xu] = z u1^2 - 2x u1 u2 - y u2^2 is
    rescaled to 1 by choosing u with a square determinant.
    """
    p = F.p
    for u1, u2 in [(1, 0)] + [(k, 1) for k in range(p)]:
        det = (z * u1 * u1 - 2 * x * u1 * u2 - y * u2 * u2) % p
        if det in roots:
            s = F.inv(roots[det])
            u1, u2 = u1 * s % p, u2 * s % p
            return SL2Element.make(F, u1, x * u1 + y * u2, u2, z * u1 - x * u2)
    raise AssertionError("anisotropic form failed to represent a square")


def nonsplit_tori(F: PrimeField) -> list[TorusDescriptor]:
    """Every non-split torus of SL2(F_p) exactly once, T_delta first.

    A non-split torus is {a I + b X} for the pair +-X of its traceless elements
    with X^2 = delta I, so tori are enumerated by the canonical sign choice of
    X and each is reached by an explicit conjugator of T_delta.
    """
    p, delta = F.p, F.nonsquare
    g0 = nonsplit_model_generator(F)
    ident = SL2Element.identity(F)
    tori = [TorusDescriptor("nonsplit", ident, g0, p + 1)]
    roots = _sqrt_table(F)
    model = (0, delta, 1)
    for x in range(p):
        r = (delta - x * x) % p
        for y in range(1, p):
            z = r * F.inv(y) % p
            X, negX = (x, y, z), ((-x) % p, (-y) % p, (-z) % p)
            if X > negX or X == model or negX == model:
                continue
            g = _conjugator_for(F, x, y, z, roots)
            tori.append(TorusDescriptor("nonsplit", g, g.conj(g0), p + 1))
    return tori


def split_tori(F: PrimeField) -> list[TorusDescriptor]:
    gA = split_model_generator(F)
    return [TorusDescriptor("split", g, g.conj(gA), F.p - 1) for g in split_torus_reps(F)]


def torus_key(g: SL2Element) -> tuple[int, int, int]:
    """Canonical label of the torus generated by ``g`` (g != +-I).

    A maximal torus is the centralizer of the traceless line through
    g - tr(g)/2 I; the line is normalized to leading coefficient 1.
    """
    p = g.p
    half = (p + 1) // 2
    s = (g.a - g.d) * half % p
    line = (s, g.b, g.c)
    lead = next(v for v in line if v)
    k = pow(lead, -1, p)
    return tuple(v * k % p for v in line)


def torus_elements_from(F: PrimeField, g: SL2Element, T0: list[SL2Element]) -> frozenset:
    return frozenset(g.conj(h).entries for h in T0)


# -- spectra ----------------------------------------------------------------

@dataclass
class Eigenpair:
    eigenvalue: complex
    vector: np.ndarray
    cluster: int


def _clusters(vals: np.ndarray, tol: float) -> list[list[int]]:
    order = np.argsort(np.angle(vals), kind="stable")
    groups: list[list[int]] = []
    for i in order:
        if groups and abs(vals[i] - vals[groups[-1][-1]]) <= tol:
            groups[-1].append(int(i))
        else:
            groups.append([int(i)])
    if len(groups) > 1 and abs(vals[groups[0][0]] - vals[groups[-1][-1]]) <= tol:
        groups[0] = groups.pop() + groups[0]  # wrap-around at angle +-pi
    return groups


def diagonalize_unitary(U: np.ndarray, order: Optional[int] = None,
                        tol: float = CLUSTER_TOL) -> list[Eigenpair]:
    """Orthonormal eigendecomposition of a unitary matrix with clustered eigenvalues.

    Uses the complex Schur form, which is diagonal for normal matrices, so
    vectors inside a degenerate cluster come out orthonormal. Clusters are
    ordered by the argument of their mean eigenvalue.

    Raises ClusteringError when two clusters sit within 10 * tol of each
    other, or when ``order`` is given and U^order is not a scalar on the
    computed spectrum.
    """
    U = np.asarray(U, dtype=complex)
    n = U.shape[0]
    if np.max(np.abs(U @ U.conj().T - np.eye(n))) > 1e-10:
        raise ValueError("matrix is not unitary within 1e-10")
    T, Z = scipy.linalg.schur(U, output="complex")
    vals = np.diag(T).copy()
    groups = _clusters(vals, tol)
    means = [vals[g].mean() for g in groups]
    for i in range(len(groups)):
        for j in range(i + 1, len(groups)):
            gap = np.min(np.abs(vals[groups[i]][:, None] - vals[groups[j]][None, :]))
            if gap < 10 * tol:
                raise ClusteringError(f"clusters {i} and {j} separated by only {gap:.3g}")
    min_gap = min(
        (abs(means[i] - means[j]) for i in range(len(means)) for j in range(i)), default=np.inf
    )
    if min_gap < 1e-6:
        # independent spectrum from the general solver must agree on multiplicities
        other = np.linalg.eigvals(U)
        counts = sorted(int(np.sum(np.abs(other - m) <= 1e3 * tol)) for m in means)
        if counts != sorted(len(g) for g in groups):
            raise ClusteringError("cluster multiplicities disagree between solvers")
    if order is not None:
        powers = vals ** order
        if np.max(np.abs(powers - powers[0])) > 1e-6:
            raise ClusteringError(f"U^{order} is not scalar on the spectrum")
    keyed = sorted(range(len(groups)), key=lambda k: np.angle(means[k]))
    out = []
    for cid, k in enumerate(keyed):
        for i in sorted(groups[k]):
            out.append(Eigenpair(complex(vals[i]), Z[:, i].copy(), cid))
    for pair in out:
        res = np.linalg.norm(U @ pair.vector - pair.eigenvalue * pair.vector)
        if res > RESIDUAL_TOL:
            raise ClusteringError(f"eigenresidual {res:.3g} exceeds {RESIDUAL_TOL}")
    return out


def cluster_sizes(pairs: list[Eigenpair]) -> list[int]:
    sizes: dict[int, int] = {}
    for pr in pairs:
        sizes[pr.cluster] = sizes.get(pr.cluster, 0) + 1
    return [sizes[k] for k in sorted(sizes)]


def phase_normalize(s: np.ndarray) -> np.ndarray:
    """Rotate ``s`` so its first entry of magnitude >= max/2 is real positive."""
    s = np.asarray(s, dtype=complex)
    mags = np.abs(s)
    peak = mags.max() if s.size else 0.0
    if peak == 0:
        raise ValueError("cannot phase-normalize the zero vector")
    k = int(np.argmax(mags >= peak / 2))
    return s * (np.conj(s[k]) / mags[k])


# -- systems ----------------------------------------------------------------

def _model_basis(F: PrimeField, kind: str) -> tuple[np.ndarray, np.ndarray]:
    """Eigenbasis (rows) and eigenvalues of rho(g_T0) with the sigma-space removed."""
    if kind == "split":
        g0, order = split_model_generator(F), F.p - 1
    elif kind == "nonsplit":
        g0, order = nonsplit_model_generator(F), F.p + 1
    else:
        raise ValueError(f"unknown torus kind {kind!r}")
    pairs = diagonalize_unitary(weil_bruhat(F, g0).op, order=order)
    sizes = cluster_sizes(pairs)
    if kind == "split":
        doubles = [c for c, n in enumerate(sizes) if n == 2]
        if len(doubles) != 1 or sum(sizes) - 2 != len(sizes) - 1:
            raise ClusteringError(f"split spectrum has cluster sizes {sizes}")
        pairs = [pr for pr in pairs if pr.cluster != doubles[0]]
    elif any(n != 1 for n in sizes):
        raise ClusteringError(f"non-split spectrum has cluster sizes {sizes}")
    vecs = np.stack([phase_normalize(pr.vector) for pr in pairs])
    return vecs, np.array([pr.eigenvalue for pr in pairs])


@dataclass
class OscillatorFamily:
    """Everything needed to produce an oscillator system, with signals built on demand.

    Signal ``i`` belongs to torus ``i // n_chars`` and character ``i % n_chars``,
    where ``n_chars = len(base)``; it equals rho(conjugator) applied to the
    model eigenvector.
    """

    field: PrimeField
    kind: str
    tori: list[TorusDescriptor]
    base: np.ndarray
    base_eigenvalues: np.ndarray

    def __len__(self) -> int:
        return len(self.tori) * len(self.base)

    @property
    def p(self) -> int:
        return self.field.p

    def torus_signals(self, j: int) -> np.ndarray:
        return apply_weil(self.field, self.tori[j].conjugator, self.base)

    def __getitem__(self, i: int) -> SystemSignal:
        if not 0 <= i < len(self):
            raise IndexError(i)
        j, c = divmod(i, len(self.base))
        vec = apply_weil(self.field, self.tori[j].conjugator, self.base[c])
        return SystemSignal(vec, group=j, character=c)

    def system(self, check: bool = True) -> SignalSystem:
        signals = []
        for j, T in enumerate(self.tori):
            vecs = self.torus_signals(j)
            image = apply_weil(self.field, T.generator, vecs)
            eigs = np.einsum("ij,ij->i", vecs.conj(), image)
            if check:
                res = np.linalg.norm(image - eigs[:, None] * vecs, axis=1)
                if res.max() > RESIDUAL_TOL:
                    raise ClusteringError(f"torus {j}: eigenresidual {res.max():.3g}")
            for c in range(len(vecs)):
                signals.append(SystemSignal(vecs[c], j, c, complex(eigs[c])))
        return SignalSystem(self.field, self.kind, list(self.tori), signals,
                            {"generator_order": self.tori[0].order})


def oscillator_family(F: PrimeField, kind: str) -> OscillatorFamily:
    base, eigs = _model_basis(F, kind)
    tori = split_tori(F) if kind == "split" else nonsplit_tori(F)
    return OscillatorFamily(F, kind, tori, base, eigs)


def build_system(F: PrimeField, kind: str) -> SignalSystem:
    """Split system: p(p+1)/2 tori x (p-2) signals; non-split: one basis of p per torus."""
    return oscillator_family(F, kind).system()


def extended_system(S: SignalSystem) -> SignalSystem:
    """All translates M_w L_tau phi, ordered by (signal, tau, w)."""
    F = S.field
    out = []
    for s in S.signals:
        for tau in range(F.p):
            for w in range(F.p):
                out.append(SystemSignal(translate(F, s.values, tau, w), s.group, s.character,
                                        translate=(tau, w)))
    return SignalSystem(F, "extended", S.groups, out, {"base_kind": S.kind, **S.metadata})
