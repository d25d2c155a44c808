"""Ambiguity functions and bound verification for signal systems."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .field import PrimeField, SL2Element
from .oscillator import torus_key
from .signals import Line, SignalSystem, TorusDescriptor
from .weil import op_fourier

SLACK = 1e-9
THREADS_ENV = "OSCSIG_THREADS"


@dataclass
class AmbiguityTable:
    """Grid of <phi, M_w L_tau phi2> indexed ``[tau, w]``."""

    grid: np.ndarray
    peak: tuple[int, int, float]
    max_offcenter: float

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.grid)


def ambiguity_grid(F: PrimeField, phi: np.ndarray, phi2: Optional[np.ndarray] = None) -> np.ndarray:
    phi2 = phi if phi2 is None else phi2
    p = F.p
    tau = np.arange(p)
    shifted = phi2[(tau[:, None] + tau[None, :]) % p]  # row tau is L_tau phi2
    # sum_t conj(phi(t)) psi(w t) phi2(t + tau) is an inverse DFT over t
    return p * np.fft.ifft(np.conj(phi)[None, :] * shifted, axis=1)


def ambiguity(F: PrimeField, phi: np.ndarray, phi2: Optional[np.ndarray] = None) -> AmbiguityTable:
    grid = ambiguity_grid(F, phi, phi2)
    mag = np.abs(grid)
    k = int(np.argmax(mag))
    tau, w = divmod(k, F.p)
    off = mag.copy()
    off[0, 0] = 0.0
    return AmbiguityTable(grid, (tau, w, float(mag[tau, w])), float(off.max()))


def _threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def pairwise_max(F: PrimeField, X: np.ndarray) -> np.ndarray:
    """M[i, j] = max over (tau, w) of |<x_i, M_w L_tau x_j>|, brute force.

    The diagonal skips (tau, w) = (0, 0), so it holds the off-center
    auto-correlation maximum.
    """
    p = F.p
    X = np.asarray(X, dtype=complex)
    Xc = X.conj()
    chars = F.psi_table[(np.arange(p)[:, None] * np.arange(p)[None, :]) % p]  # [w, t]

    def scan(taus):
        best = np.zeros((len(X), len(X)))
        for tau in taus:
            rolled = np.roll(X, -tau, axis=1)
            for w in range(p):
                mag = np.abs(Xc @ (rolled * chars[w]).T)
                if tau == 0 and w == 0:
                    np.fill_diagonal(mag, 0.0)
                np.maximum(best, mag, out=best)
        return best

    n = _threads()
    chunks = [list(range(p))[k::n] for k in range(n)]
    if n == 1:
        return scan(chunks[0])
    with ThreadPoolExecutor(n) as pool:
        parts = list(pool.map(scan, chunks))
    return np.maximum.reduce(parts)


@dataclass
class Check:
    name: str
    bound: float
    value: float
    asserted: bool

    @property
    def passed(self) -> bool:
        return self.value <= self.bound + SLACK


@dataclass
class BoundReport:
    p: int
    kind: str
    n_signals: int
    checks: list[Check] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)
    per_signal: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures and all(c.passed for c in self.checks if c.asserted)

    def add(self, name, bound, value, asserted=True):
        self.checks.append(Check(name, float(bound), float(value), asserted))

    def to_kv(self) -> str:
        lines = [f"p={self.p}", f"kind={self.kind}", f"signals={self.n_signals}"]
        for c in self.checks:
            mode = "assert" if c.asserted else "report"
            lines.append(f"{c.name}.{mode}.bound={c.bound!r}")
            lines.append(f"{c.name}.{mode}.value={c.value!r}")
            lines.append(f"{c.name}.{mode}.pass={str(c.passed).lower()}")
        lines.append(f"failures={len(self.failures)}")
        lines.extend(f"failure={f}" for f in self.failures)
        lines.append(f"ok={str(self.ok).lower()}")
        return "\n".join(lines) + "\n"


def _norm_failures(S: SignalSystem, tol: float = 1e-10) -> list[str]:
    norms = np.linalg.norm(S.matrix(), axis=1)
    return [f"signal {s.label}: norm {n!r}" for s, n in zip(S.signals, norms) if abs(n - 1) > tol]


def _orthonormal_failures(S: SignalSystem, X: np.ndarray, tol: float = 1e-9) -> list[str]:
    out = []
    for j, idx in sorted(S.by_group().items()):
        G = X[idx].conj() @ X[idx].T
        dev = np.abs(G - np.eye(len(idx)))
        if dev.max() > tol:
            a, b = np.unravel_index(int(np.argmax(dev)), dev.shape)
            out.append(f"group {j}: signals {S.signals[idx[a]].label} and "
                       f"{S.signals[idx[b]].label} not orthonormal ({dev.max():.3g})")
    return out


def _oscillator_report(S: SignalSystem, report: BoundReport, X: np.ndarray,
                       assert_proof: bool, headline: bool) -> None:
    F, p = S.field, S.p
    sizes = np.array([S.groups[s.group].order for s in S.signals], dtype=float)
    groups = np.array([s.group for s in S.signals])
    M = pairwise_max(F, X)
    auto = np.diag(M).copy()
    np.fill_diagonal(M, -1.0)
    same = groups[:, None] == groups[None, :]
    sup = np.abs(X).max(axis=1)

    auto_bound = 2 * math.sqrt(p) / sizes
    cross_bound = 4 * math.sqrt(p) / np.sqrt(sizes[:, None] * sizes[None, :])
    remark_bound = 2 * math.sqrt(p) / sizes
    sup_bound = 2 / np.sqrt(sizes)

    labels = [s.label for s in S.signals]
    for i in np.flatnonzero(auto > auto_bound + SLACK):
        report.failures.append(f"signal {labels[i]}: auto {auto[i]!r} > {auto_bound[i]!r}")
    for i in np.flatnonzero(sup > sup_bound + SLACK):
        report.failures.append(f"signal {labels[i]}: supremum {sup[i]!r} > {sup_bound[i]!r}")
    bad = np.argwhere(np.triu(M > cross_bound + SLACK, 1))
    for i, j in bad[:50]:
        report.failures.append(f"pair {labels[i]} / {labels[j]}: cross {M[i, j]!r} > {cross_bound[i, j]!r}")
    same_M = np.where(same, M, -1.0)
    bad = np.argwhere(np.triu(same_M > remark_bound[:, None] + SLACK, 1))
    for i, j in bad[:50]:
        report.failures.append(f"pair {labels[i]} / {labels[j]}: same-torus cross "
                               f"{M[i, j]!r} > {remark_bound[i]!r}")

    if assert_proof:
        report.add("auto_offcenter", (auto_bound).min(), auto.max())
        report.add("cross", cross_bound.min(), M.max())
        report.add("cross_same_torus", remark_bound.min(), same_M.max())
        report.add("supremum", sup_bound.min(), sup.max())
    if headline:
        report.add("headline_auto", 2 / math.sqrt(p), auto.max(), asserted=False)
        report.add("headline_cross", 4 / math.sqrt(p), M.max(), asserted=False)
        report.add("headline_supremum", 2 / math.sqrt(p), sup.max(), asserted=False)
    report.per_signal = {"auto": auto, "supremum": sup, "cross_row_max": M.max(axis=1)}


def _heisenberg_report(S: SignalSystem, report: BoundReport, X: np.ndarray) -> None:
    F, p = S.field, S.p
    worst_line = 0.0
    for i, s in enumerate(S.signals):
        line = S.groups[s.group]
        dev = np.abs(np.abs(ambiguity_grid(F, s.values)) - line.indicator()).max()
        worst_line = max(worst_line, dev)
        if dev > 1e-9:
            report.failures.append(f"signal {s.label}: |A| deviates from its line by {dev:.3g}")
    report.add("line_indicator_deviation", 1e-9, worst_line)
    M = pairwise_max(F, X)
    groups = np.array([s.group for s in S.signals])
    other = groups[:, None] != groups[None, :]
    cross = np.where(other, M, 0.0).max()
    report.add("cross_basis", 1 / math.sqrt(p), cross)
    dev = np.abs(np.abs(X) - 1 / math.sqrt(p)).max(axis=1)
    chirp = np.array([S.groups[s.group].index != p for s in S.signals])
    # the delta basis of the vertical line is not unimodular
    report.add("unimodularity_deviation_chirps", 1e-10, dev[chirp].max())
    report.add("unimodularity_deviation_all", 1e-10, dev.max(), asserted=False)


def _extended_report(S: SignalSystem, report: BoundReport, X: np.ndarray,
                     pairs: int, seed: int) -> None:
    p = S.p
    rng = np.random.default_rng(seed)
    n = len(X)
    worst = 0.0
    bound = 4 * math.sqrt(p) / (p - 1)
    for _ in range(pairs):
        i, j = rng.choice(n, size=2, replace=False)
        val = abs(np.vdot(X[i], X[j]))
        worst = max(worst, val)
        if val > bound + SLACK:
            report.failures.append(f"pair {S.signals[i].label} / {S.signals[j].label}: {val!r}")
    report.add("extended_inner_product", bound, worst)
    report.add("headline_extended", 4 / math.sqrt(p), worst, asserted=False)


def system_report(S: SignalSystem, assert_proof: bool = True, headline: bool = True,
                  extended_pairs: int = 1000, seed: int = 0) -> BoundReport:
    """Check a system against the bounds that apply to its kind.

    Oscillator systems get the proof-constant bounds: off-center
    auto-correlation 2 sqrt(p)/#T, cross-correlation 4 sqrt(p)/sqrt(#T #T')
    (2 sqrt(p)/#T within one torus) and supremum 2/sqrt(#T). The headline
    constants 2/sqrt(p) and 4/sqrt(p) are reported only.
    """
    X = S.matrix()
    report = BoundReport(S.p, S.kind, len(S))
    report.failures.extend(_norm_failures(S))
    if S.kind in ("split", "nonsplit"):
        report.failures.extend(_orthonormal_failures(S, X))
        _oscillator_report(S, report, X, assert_proof, headline)
    elif S.kind == "heisenberg":
        report.failures.extend(_orthonormal_failures(S, X))
        _heisenberg_report(S, report, X)
    elif S.kind == "extended":
        _extended_report(S, report, X, extended_pairs, seed)
    else:
        raise ValueError(f"unknown system kind {S.kind!r}")
    return report


@dataclass
class FourierMatch:
    signal: int
    match: Optional[int]
    overlap: float


def fourier_invariance_check(S: SignalSystem, tol: float = 1e-8) -> tuple[list[FourierMatch], list[str]]:
    """Match the DFT of every oscillator signal inside the torus conjugated by w.

    Returns the matching table and a list of failures (missing torus, low
    overlap, or a matching that is not a bijection).
    """
    F = S.field
    w = SL2Element.weyl(F)
    Fm = op_fourier(F)
    index = {torus_key(T.generator): j for j, T in enumerate(S.groups)}
    members = S.by_group()
    X = S.matrix()
    table: list[FourierMatch] = []
    failures: list[str] = []
    for j, T in enumerate(S.groups):
        idx = members.get(j, [])
        target = index.get(torus_key(w.conj(T.generator)))
        if target is None:
            failures.append(f"group {j}: conjugate torus by w is missing")
            table.extend(FourierMatch(i, None, 0.0) for i in idx)
            continue
        tidx = members[target]
        overlaps = np.abs(X[tidx].conj() @ (Fm @ X[idx].T))  # [candidate, source]
        best = overlaps.argmax(axis=0)
        for col, i in enumerate(idx):
            ov = float(overlaps[best[col], col])
            table.append(FourierMatch(i, tidx[best[col]], ov))
            if ov < 1 - tol:
                failures.append(f"signal {S.signals[i].label}: best Fourier overlap {ov!r}")
        if len(set(best.tolist())) != len(idx):
            failures.append(f"group {j}: Fourier matching is not a bijection")
    return table, failures
