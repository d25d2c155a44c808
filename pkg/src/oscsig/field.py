"""Prime field arithmetic, characters, and SL2(F_p).

Field elements are plain ints in ``range(p)``; every operation reduces eagerly.
"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, NamedTuple, Optional

import numpy as np


class FieldError(ValueError):
    """Raised for an unusable modulus or an element outside its domain."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class PrimeField:
    """The field F_p for an odd prime p >= 5.

    ``generator`` is the smallest primitive root and ``nonsquare`` the smallest
    quadratic non-residue, so the choice is reproducible everywhere.
    """

    p: int
    generator: int = field(init=False)
    nonsquare: int = field(init=False)

    def __post_init__(self):
        p = self.p
        if not isinstance(p, (int, np.integer)) or isinstance(p, bool):
            raise FieldError(f"modulus must be an integer, got {p!r}")
        p = int(p)
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if p == 2:
            raise FieldError("p = 2 is not odd")
        if p == 3:
            raise FieldError("p = 3 is excluded (the Weil representation is not unique over F_3)")
        object.__setattr__(self, "p", p)
        factors = _prime_factors(p - 1)
        gen = next(
            r for r in range(2, p) if all(pow(r, (p - 1) // q, p) != 1 for q in factors)
        )
        object.__setattr__(self, "generator", gen)
        object.__setattr__(self, "nonsquare", next(a for a in range(2, p) if self.legendre(a) == -1))

    # -- scalar arithmetic -------------------------------------------------

    def reduce(self, a: int) -> int:
        return int(a) % self.p

    def inv(self, a: int) -> int:
        a = int(a) % self.p
        if a == 0:
            raise FieldError("0 has no inverse")
        return pow(a, -1, self.p)

    @property
    def half(self) -> int:
        """The inverse of 2, i.e. (p + 1) / 2."""
        return (self.p + 1) // 2

    @property
    def quarter(self) -> int:
        return self.half * self.half % self.p

    def elements(self) -> range:
        return range(self.p)

    def units(self) -> range:
        return range(1, self.p)

    # -- characters --------------------------------------------------------

    def legendre(self, a: int) -> int:
        """Quadratic character: +1 on nonzero squares, -1 on non-squares, 0 at 0."""
        a = int(a) % self.p
        if a == 0:
            return 0
        return 1 if pow(a, (self.p - 1) // 2, self.p) == 1 else -1

    def psi(self, t) -> complex | np.ndarray:
        """Additive character t -> exp(2 pi i t / p); accepts ints or int arrays."""
        if isinstance(t, np.ndarray):
            return self.psi_table[np.mod(t, self.p)]
        return cmath.exp(2j * cmath.pi * (int(t) % self.p) / self.p)

    @cached_property
    def psi_table(self) -> np.ndarray:
        return np.exp(2j * np.pi * np.arange(self.p) / self.p)

    @cached_property
    def legendre_table(self) -> np.ndarray:
        return np.array([self.legendre(a) for a in range(self.p)], dtype=np.int64)

    @cached_property
    def log_table(self) -> np.ndarray:
        """Discrete log base ``generator`` for units; entry 0 is -1."""
        table = np.full(self.p, -1, dtype=np.int64)
        x = 1
        for k in range(self.p - 1):
            table[x] = k
            x = x * self.generator % self.p
        return table

    def order(self, a: int) -> int:
        a = int(a) % self.p
        if a == 0:
            raise FieldError("0 has no multiplicative order")
        k, x = 1, a
        while x != 1:
            x = x * a % self.p
            k += 1
        return k


class SL2Element(NamedTuple):
    """Row-major 2x2 matrix [[a, b], [c, d]] over F_p with determinant 1."""

    a: int
    b: int
    c: int
    d: int
    p: int

    @classmethod
    def make(cls, F: PrimeField | int, a, b, c, d) -> "SL2Element":
        p = F.p if isinstance(F, PrimeField) else int(F)
        g = cls(int(a) % p, int(b) % p, int(c) % p, int(d) % p, p)
        if (g.a * g.d - g.b * g.c) % p != 1:
            raise FieldError(f"determinant of {g.entries} is not 1 mod {p}")
        return g

    @classmethod
    def identity(cls, F: PrimeField | int) -> "SL2Element":
        return cls.make(F, 1, 0, 0, 1)

    @classmethod
    def weyl(cls, F: PrimeField | int) -> "SL2Element":
        """The Weyl element [[0, 1], [-1, 0]]."""
        return cls.make(F, 0, 1, -1, 0)

    @classmethod
    def lower(cls, F: PrimeField | int, u: int) -> "SL2Element":
        return cls.make(F, 1, 0, u, 1)

    @classmethod
    def diag(cls, F: PrimeField | int, a: int) -> "SL2Element":
        p = F.p if isinstance(F, PrimeField) else int(F)
        return cls.make(p, a, 0, 0, pow(int(a) % p, -1, p))

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, other: "SL2Element") -> "SL2Element":
        if not isinstance(other, SL2Element):
            return NotImplemented
        p = self.p
        if other.p != p:
            raise FieldError("elements live over different fields")
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return SL2Element((a * e + b * g) % p, (a * f + b * h) % p,
                          (c * e + d * g) % p, (c * f + d * h) % p, p)

    def inv(self) -> "SL2Element":
        p = self.p
        return SL2Element(self.d, (-self.b) % p, (-self.c) % p, self.a, p)

    def __neg__(self) -> "SL2Element":
        p = self.p
        return SL2Element((-self.a) % p, (-self.b) % p, (-self.c) % p, (-self.d) % p, p)

    def __pow__(self, k: int) -> "SL2Element":
        result = SL2Element.identity(self.p)
        base = self if k >= 0 else self.inv()
        k = abs(k)
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def conj(self, h: "SL2Element") -> "SL2Element":
        """Return self . h . self^-1."""
        return self @ h @ self.inv()

    def apply(self, v: tuple[int, int]) -> tuple[int, int]:
        """Action on a column vector (tau, w) of the time-frequency plane."""
        tau, w = v
        return ((self.a * tau + self.b * w) % self.p, (self.c * tau + self.d * w) % self.p)

    def trace(self) -> int:
        return (self.a + self.d) % self.p

    def is_identity(self) -> bool:
        return self.entries == (1, 0, 0, 1)

    def order(self) -> int:
        k, x = 1, self
        while not x.is_identity():
            x = x @ self
            k += 1
        return k

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=np.int64)

    def __repr__(self) -> str:
        return f"SL2([[{self.a}, {self.b}], [{self.c}, {self.d}]] mod {self.p})"


def sl2_mul(g1: SL2Element, g2: SL2Element) -> SL2Element:
    return g1 @ g2


def sl2_inv(g: SL2Element) -> SL2Element:
    return g.inv()


def sl2_elements(F: PrimeField) -> Iterator[SL2Element]:
    """All p(p^2 - 1) elements, in lexicographic order of (a, b, c, d)."""
    p = F.p
    for a, b, c in itertools.product(range(p), repeat=3):
        if a:
            d = (1 + b * c) * pow(a, -1, p) % p
            yield SL2Element(a, b, c, d, p)
        elif (b * c) % p == p - 1:
            for d in range(p):
                yield SL2Element(a, b, c, d, p)


@dataclass(frozen=True)
class BruhatForm:
    """g = lower(u2) . diag(a, 1/a) [. w . lower(u1)].

    ``variant`` is ``"torus-unipotent"`` (no Weyl factor, ``u1`` is None) or
    ``"big-cell"``.
    """

    variant: str
    u2: int
    a: int
    u1: Optional[int] = None

    def recompose(self, F: PrimeField | int) -> SL2Element:
        g = SL2Element.lower(F, self.u2) @ SL2Element.diag(F, self.a)
        if self.variant == "big-cell":
            g = g @ SL2Element.weyl(F) @ SL2Element.lower(F, self.u1)
        return g


def bruhat_decompose(g: SL2Element) -> BruhatForm:
    """Split ``g`` along SL2 = UA + UAwU (disjoint), U lower unitriangular.

    The Borel cell UA is exactly the set of matrices with zero upper-right entry.
    """
    p = g.p
    if g.b == 0:
        # [[a, 0], [c, 1/a]] = lower(c/a) . diag(a)
        return BruhatForm("torus-unipotent", g.c * pow(g.a, -1, p) % p, g.a)
    binv = pow(g.b, -1, p)
    # lower(u2) diag(a) w lower(u1) = [[a u1, a], [u2 a u1 - 1/a, u2 a]]
    return BruhatForm("big-cell", g.d * binv % p, g.b, g.a * binv % p)
