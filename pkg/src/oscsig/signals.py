"""Containers for labeled signal collections."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from .field import PrimeField, SL2Element

PHASE_RULE = "lowest index with |x| >= max|x|/2 made real positive"
HEISENBERG_RULE = "pi(tau,w,z) = psi(tau*w/2 + z) M_w L_tau"
SYMPLECTIC_FORM = "omega((tau,w),(tau',w')) = tau*w' - tau'*w"


@dataclass(frozen=True)
class Line:
    """A line through the origin of the time-frequency plane.

    Index ``m`` in ``range(p)`` is the line {(tau, m tau)}; index ``p`` is the
    vertical line {(0, w)}.
    """

    index: int
    p: int

    @property
    def direction(self) -> tuple[int, int]:
        return (0, 1) if self.index == self.p else (1, self.index)

    def points(self) -> list[tuple[int, int]]:
        dt, dw = self.direction
        return [((dt * s) % self.p, (dw * s) % self.p) for s in range(self.p)]

    def indicator(self) -> np.ndarray:
        grid = np.zeros((self.p, self.p))
        for tau, w in self.points():
            grid[tau, w] = 1.0
        return grid


@dataclass(frozen=True)
class TorusDescriptor:
    """A maximal torus T = conjugator . T0 . conjugator^-1 with cyclic generator."""

    kind: str
    conjugator: SL2Element
    generator: SL2Element
    order: int

    def elements(self) -> frozenset[tuple[int, int, int, int]]:
        out, x = set(), self.generator
        for _ in range(self.order):
            out.add(x.entries)
            x = x @ self.generator
        return frozenset(out)


@dataclass
class SystemSignal:
    """One member of a signal system together with its labels.

    ``group`` indexes ``SignalSystem.groups`` (a torus or a line), ``character``
    is the eigen-index inside it, and ``translate`` is set for the extended
    system, holding the (tau, w) of the applied M_w L_tau.
    """

    values: np.ndarray
    group: int
    character: int
    eigenvalue: Optional[complex] = None
    translate: Optional[tuple[int, int]] = None

    @property
    def label(self) -> str:
        base = f"{self.group}:{self.character}"
        if self.translate is not None:
            base += f"@{self.translate[0]},{self.translate[1]}"
        return base


@dataclass
class SignalSystem:
    field: PrimeField
    kind: str
    groups: list[Any]
    signals: list[SystemSignal]
    metadata: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.signals)

    def __getitem__(self, i: int) -> SystemSignal:
        return self.signals[i]

    def __iter__(self):
        return iter(self.signals)

    @property
    def p(self) -> int:
        return self.field.p

    def matrix(self) -> np.ndarray:
        """Signals stacked as rows, shape (len(self), p)."""
        if not self.signals:
            return np.zeros((0, self.p), dtype=complex)
        return np.stack([s.values for s in self.signals])

    def by_group(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for i, s in enumerate(self.signals):
            out.setdefault(s.group, []).append(i)
        return out

    def find(self, label: str) -> SystemSignal:
        for s in self.signals:
            if s.label == label:
                return s
        raise KeyError(label)

    def conventions(self) -> dict:
        return {
            "symplectic_form": SYMPLECTIC_FORM,
            "heisenberg": HEISENBERG_RULE,
            "phase_rule": PHASE_RULE,
            "generator": self.field.generator,
            "nonsquare": self.field.nonsquare,
        }


def group_sizes(system: SignalSystem) -> Sequence[int]:
    """Torus order (or p for lines) of each group in the system."""
    return [g.order if isinstance(g, TorusDescriptor) else system.p for g in system.groups]
