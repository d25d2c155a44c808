"""Radar parameter estimation and CDMA multi-user simulations.

Noise is i.i.d. circular complex Gaussian with per-sample variance sigma^2,
where snr_db = 10 log10(1 / (p sigma^2)) for unit-norm signals. Each trial draws
from its own PCG64 stream keyed by (seed, trial), so any trial can be replayed
alone and results do not depend on scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Protocol, Sequence

import numpy as np

from .field import PrimeField
from .heisenberg import translate
from .metrics import ambiguity_grid

MODES = ("sync", "async", "phase", "full")


class _Indexed(Protocol):
    def __len__(self) -> int: ...
    def __getitem__(self, i: int): ...


@dataclass(frozen=True)
class ChannelScenario:
    mode: str = "full"
    snr_db: Optional[float] = None
    seed: int = 0
    trials: int = 100

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.trials < 1:
            raise ValueError("trials must be positive")

    def rng(self, trial: int) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence(self.seed, spawn_key=(trial,))))

    def distortion(self, rng: np.random.Generator, p: int) -> tuple[int, int]:
        tau = int(rng.integers(p)) if self.mode in ("async", "full") else 0
        w = int(rng.integers(p)) if self.mode in ("phase", "full") else 0
        return tau, w

    def noise(self, rng: np.random.Generator, p: int) -> np.ndarray:
        if self.snr_db is None:
            return np.zeros(p, dtype=complex)
        sigma2 = 10 ** (-self.snr_db / 10) / p
        return np.sqrt(sigma2 / 2) * (rng.standard_normal(p) + 1j * rng.standard_normal(p))


@dataclass
class SimulationResult:
    metric: str
    rate: float
    trials: int
    events: int
    failures: int
    log: list = field(default_factory=list)

    def to_kv(self, extra: Optional[dict] = None) -> str:
        lines = [f"{k}={v}" for k, v in (extra or {}).items()]
        lines += [f"{self.metric}={self.rate!r}", f"trials={self.trials}",
                  f"events={self.events}", f"failures={self.failures}"]
        return "\n".join(lines) + "\n"


def matched_filter(F: PrimeField, phi: np.ndarray, echo: np.ndarray) -> np.ndarray:
    """|<echo, M_w L_tau phi>| over the (tau, w) grid."""
    return np.abs(ambiguity_grid(F, echo, phi))


def estimate_shift(F: PrimeField, phi: np.ndarray, echo: np.ndarray) -> tuple[int, int]:
    k = int(np.argmax(matched_filter(F, phi, echo)))
    return divmod(k, F.p)


def radar_simulate(F: PrimeField, phi: np.ndarray, scenario: ChannelScenario,
                   keep_log: bool = False) -> SimulationResult:
    """Exact-recovery rate of (tau0, w0) from echoes M_w0 L_tau0 phi (+ noise)."""
    p = F.p
    misses, log = 0, []
    for trial in range(scenario.trials):
        rng = scenario.rng(trial)
        truth = scenario.distortion(rng, p)
        echo = translate(F, phi, *truth) + scenario.noise(rng, p)
        est = estimate_shift(F, phi, echo)
        misses += est != truth
        if keep_log:
            log.append((truth, est))
    trials = scenario.trials
    return SimulationResult("recovery_rate", (trials - misses) / trials, trials, trials, misses, log)


def cdma_simulate(F: PrimeField, S: _Indexed, users: int, scenario: ChannelScenario,
                  known_distortions: bool = False, keep_log: bool = False) -> SimulationResult:
    """Bit error rate of BPSK users sharing the channel u = sum b_i M_wi L_taui phi_i.

    Receiver i correlates u against its own signal at the known distortion,
    or at the argmax of the cross-ambiguity when the distortion is unknown,
    and decodes the sign of the real part.
    """
    p = F.p
    if users < 1 or users > len(S):
        raise ValueError(f"users must be in 1..{len(S)}, got {users}")
    errors, log = 0, []
    for trial in range(scenario.trials):
        rng = scenario.rng(trial)
        picks = rng.choice(len(S), size=users, replace=False)
        bits = rng.choice(np.array([-1, 1]), size=users)
        shifts = [scenario.distortion(rng, p) for _ in range(users)]
        sent = [translate(F, S[int(i)].values, *h) for i, h in zip(picks, shifts)]
        u = sum(b * x for b, x in zip(bits, sent)) + scenario.noise(rng, p)
        decoded = np.empty(users, dtype=int)
        for i in range(users):
            if known_distortions or scenario.mode == "sync":
                y = np.vdot(sent[i], u)
            else:
                grid = np.conj(ambiguity_grid(F, u, S[int(picks[i])].values))
                y = grid.flat[int(np.argmax(np.abs(grid)))]
            decoded[i] = 1 if y.real >= 0 else -1
        wrong = int(np.sum(decoded != bits))
        errors += wrong
        if keep_log:
            log.append((picks.tolist(), bits.tolist(), shifts, wrong))
    bits_total = users * scenario.trials
    return SimulationResult("ber", errors / bits_total, scenario.trials, bits_total, errors, log)
