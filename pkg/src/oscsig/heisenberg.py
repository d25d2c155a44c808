"""Heisenberg group, its Schroedinger representation on C(F_p), and the Weyl transform.

Conventions: omega((tau, w), (tau', w')) = tau w' - tau' w, and

    [pi(tau, w, z) f](t) = psi(tau w / 2 + z) psi(w t) f(t + tau),

which is a homomorphism for the group law
(v, z)(v', z') = (v + v', z + z' + omega(v, v') / 2).
Phase-space functions are p x p arrays indexed ``[tau, w]``.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .field import PrimeField
from .signals import Line, SignalSystem, SystemSignal


class HeisenbergElement(NamedTuple):
    tau: int
    w: int
    z: int = 0


def omega(F: PrimeField, v1: tuple[int, int], v2: tuple[int, int]) -> int:
    return (v1[0] * v2[1] - v2[0] * v1[1]) % F.p


def h_mul(F: PrimeField, h1: HeisenbergElement, h2: HeisenbergElement) -> HeisenbergElement:
    p = F.p
    z = h1.z + h2.z + F.half * omega(F, h1[:2], h2[:2])
    return HeisenbergElement((h1.tau + h2.tau) % p, (h1.w + h2.w) % p, z % p)


def h_inv(F: PrimeField, h: HeisenbergElement) -> HeisenbergElement:
    p = F.p
    return HeisenbergElement(-h.tau % p, -h.w % p, -h.z % p)


def heisenberg_operator(F: PrimeField, h: HeisenbergElement | tuple) -> np.ndarray:
    """Dense p x p matrix of pi(h); ``h`` may omit the central coordinate."""
    h = HeisenbergElement(*h)
    p = F.p
    t = np.arange(p)
    U = np.zeros((p, p), dtype=complex)
    U[t, (t + h.tau) % p] = F.psi(F.half * h.tau * h.w + h.z) * F.psi_table[(h.w * t) % p]
    return U


def translate(F: PrimeField, phi: np.ndarray, tau: int, w: int) -> np.ndarray:
    """M_w L_tau applied to ``phi`` (no central phase).

    Works on a single signal or on a stack of signals along the last axis.
    """
    p = F.p
    return F.psi_table[(w * np.arange(p)) % p] * np.roll(phi, -tau, axis=-1)


def weyl_transform(F: PrimeField, A: np.ndarray) -> np.ndarray:
    """W_A(v) = Tr(A pi(-v)) / p on the plane V."""
    p = F.p
    A = np.asarray(A, dtype=complex)
    x = np.arange(p)
    out = np.empty((p, p), dtype=complex)
    for tau in range(p):
        # pi(-tau, -w) has entries psi(tau w / 2) psi(-w x) at (x, x - tau)
        diag = A[(x - tau) % p, x]
        phase = F.psi_table[(F.half * tau * x) % p]
        out[tau] = phase * np.fft.fft(diag) / p
    return out


def weyl_inverse(F: PrimeField, f: np.ndarray) -> np.ndarray:
    """Pi(f) = sum_v f(v) pi(v); left inverse of ``weyl_transform``."""
    p = F.p
    f = np.asarray(f, dtype=complex)
    x = np.arange(p)
    out = np.zeros((p, p), dtype=complex)
    for tau in range(p):
        coeff = f[tau] * F.psi_table[(F.half * tau * x) % p]
        out[x, (x + tau) % p] = p * np.fft.ifft(coeff)
    return out


def twisted_convolution(F: PrimeField, f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """(f * g)(v) = sum_{v1 + v2 = v} psi(omega(v1, v2) / 2) f(v1) g(v2).

    Satisfies W_{AB} = W_A * W_B for the transform above.
    """
    p = F.p
    g = np.asarray(g, dtype=complex)
    tau, w = np.meshgrid(np.arange(p), np.arange(p), indexing="ij")
    out = np.zeros((p, p), dtype=complex)
    for t1 in range(p):
        for w1 in range(p):
            c = f[t1, w1]
            if c == 0:
                continue
            # omega(v1, v - v1) = omega(v1, v)
            phase = F.psi_table[(F.half * (t1 * w - tau * w1)) % p]
            out += c * phase * np.roll(g, (t1, w1), axis=(0, 1))
    return out


def line_basis(F: PrimeField, line: Line) -> np.ndarray:
    """Orthonormal eigenbasis of pi restricted to ``line``; row c is the c-th vector.

    For the line {(tau, m tau)} the vectors are the chirps
    psi(-m t^2 / 2 + c t) / sqrt(p), with pi(tau, m tau) eigenvalue psi(c tau).
    The vertical line gives the delta basis.
    """
    p = F.p
    if line.index == p:
        return np.eye(p, dtype=complex)
    m = line.index
    t = np.arange(p)
    c = t[:, None]
    exponent = (-m * F.half * t[None, :] ** 2 + c * t[None, :]) % p
    return F.psi_table[exponent] / np.sqrt(p)


def heisenberg_system(F: PrimeField) -> SignalSystem:
    """The p + 1 line bases, p(p + 1) chirp signals."""
    lines = [Line(m, F.p) for m in range(F.p + 1)]
    signals = []
    for j, line in enumerate(lines):
        basis = line_basis(F, line)
        for c in range(F.p):
            signals.append(SystemSignal(basis[c], group=j, character=c))
    return SignalSystem(F, "heisenberg", lines, signals)
