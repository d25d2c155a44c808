"""The Weil representation of SL2(F_p) on C(F_p).

Two independent constructions:

* ``weil_bruhat`` composes scaling, chirp and Fourier operators along the
  Bruhat factorization; it is projective (fixed up to a unit scalar) and made
  deterministic by a phase rule.
* ``weil_kernel`` sums the closed-form phase-space kernel over pi(v) for
  elements g with g - I invertible; it is exactly multiplicative there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import FieldError, PrimeField, SL2Element, bruhat_decompose
from .heisenberg import heisenberg_operator, weyl_inverse


class OutsideCayleyDomain(FieldError):
    """g - I is singular, so the kernel formula does not apply."""


@dataclass(frozen=True)
class WeilOperator:
    op: np.ndarray
    source: str
    g: SL2Element


def op_scaling(F: PrimeField, a: int) -> np.ndarray:
    """S_a f(t) = sigma(a) f(t / a)."""
    a = F.reduce(a)
    if a == 0:
        raise FieldError("scaling by 0 is not invertible")
    p = F.p
    t = np.arange(p)
    S = np.zeros((p, p), dtype=complex)
    S[t, (t * F.inv(a)) % p] = F.legendre(a)
    return S


def op_chirp(F: PrimeField, u: int) -> np.ndarray:
    """M_u f(t) = psi(-u t^2 / 2) f(t)."""
    t = np.arange(F.p)
    return np.diag(F.psi_table[(-F.reduce(u) * F.half * t * t) % F.p])


def op_fourier(F: PrimeField) -> np.ndarray:
    """Unitary DFT  F f(w) = p^{-1/2} sum_t psi(w t) f(t)."""
    t = np.arange(F.p)
    return F.psi_table[np.outer(t, t) % F.p] / np.sqrt(F.p)


def _first_entry_phase(M: np.ndarray, tol: float = 1e-9) -> complex:
    flat = M.ravel()
    k = int(np.argmax(np.abs(flat) > tol))
    return flat[k] / abs(flat[k])


def weil_bruhat(F: PrimeField, g: SL2Element) -> WeilOperator:
    """rho(g) = M_u2 S_a F M_u1 (big cell) or M_u S_a, then phase-fixed.

    The phase rule makes the first nonzero entry, scanning rows then columns,
    real positive.
    """
    form = bruhat_decompose(g)
    op = op_chirp(F, form.u2) @ op_scaling(F, form.a)
    if form.variant == "big-cell":
        op = op @ op_fourier(F) @ op_chirp(F, form.u1)
    op = op / _first_entry_phase(op)
    return WeilOperator(op, "bruhat", g)


def apply_weil(F: PrimeField, g: SL2Element, vecs: np.ndarray) -> np.ndarray:
    """rho_B(g) applied to signals stacked along the last axis, in O(p log p) each.

    Matches ``weil_bruhat(F, g).op @ v``: under the phase rule the overall
    scalar is sigma(a), since row 0 of the unnormalized product starts with
    sigma(a) (times 1/sqrt(p) in the big cell).
    """
    p = F.p
    t = np.arange(p)
    form = bruhat_decompose(g)
    x = np.asarray(vecs, dtype=complex)
    if form.variant == "big-cell":
        x = F.psi_table[(-form.u1 * F.half * t * t) % p] * x
        x = np.fft.ifft(x, axis=-1) * np.sqrt(p)
    # S_a: entry t reads index t / a; the sign sigma(a) cancels against the phase rule
    x = x[..., (t * F.inv(form.a)) % p]
    return F.psi_table[(-form.u2 * F.half * t * t) % p] * x


def cayley(F: PrimeField, g: SL2Element) -> np.ndarray:
    """kappa(g) = (g + I)(g - I)^-1 as an integer 2x2 array mod p."""
    p = F.p
    a, b, c, d = g.entries
    a1, d1 = (a - 1) % p, (d - 1) % p
    det = (a1 * d1 - b * c) % p
    if det == 0:
        raise OutsideCayleyDomain(f"{g!r} - I is singular")
    di = F.inv(det)
    inv = np.array([[d1, -b], [-c, a1]], dtype=np.int64) * di % p
    plus = np.array([[a + 1, b], [c, d + 1]], dtype=np.int64)
    return plus @ inv % p


def kernel_function(F: PrimeField, g: SL2Element) -> np.ndarray:
    """K(g, v) = mu(g) psi(omega(kappa(g) v, v) / 4) / p on the plane."""
    p = F.p
    k = cayley(F, g)
    det = int((k[0, 0] + 1) * (k[1, 1] + 1) - k[0, 1] * k[1, 0]) % p
    mu = F.legendre(-det)
    tau, w = np.meshgrid(np.arange(p), np.arange(p), indexing="ij")
    kt = k[0, 0] * tau + k[0, 1] * w
    kw = k[1, 0] * tau + k[1, 1] * w
    form = (kt * w - tau * kw) % p
    return mu * F.psi_table[(F.quarter * form) % p] / p


def weil_kernel(F: PrimeField, g: SL2Element) -> WeilOperator:
    return WeilOperator(weyl_inverse(F, kernel_function(F, g)), "kernel", g)


def egorov_check(F: PrimeField, rho: WeilOperator | np.ndarray, g: SL2Element,
                 v: tuple[int, int]) -> float:
    """max |rho(g) pi(v) rho(g)^-1 - pi(g v)| entrywise."""
    R = rho.op if isinstance(rho, WeilOperator) else rho
    lhs = R @ heisenberg_operator(F, v) @ R.conj().T
    rhs = heisenberg_operator(F, g.apply(v))
    return float(np.max(np.abs(lhs - rhs)))
