"""Exact arithmetic on Q/Z and Z_(p)/Z, plus the two bracket functions.

``frac_bracket`` is the ordinary fractional part ``<x>`` in [0, 1).
``balanced_bracket`` is the Frobenius-orbit average of ``<p^i x> - 1/2``,
the quantity that controls p-adic orders of Gauss sums.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from math import gcd
from typing import Union

RationalLike = Union[int, Fraction, "Residue", str]


@total_ordering
@dataclass(frozen=True)
class Residue:
    """A class in Q/Z stored as a reduced fraction ``num/den`` with 0 <= num < den."""

    num: int
    den: int

    def __post_init__(self):
        if self.den <= 0:
            raise ValueError(f"denominator must be positive, got {self.den}")
        if not 0 <= self.num < self.den or gcd(self.num, self.den) != 1:
            raise ValueError(
                f"{self.num}/{self.den} is not canonical; use Residue.of()"
            )

    @classmethod
    def of(cls, x: RationalLike) -> Residue:
        """Canonical residue of ``x`` (int, Fraction, Residue or ``"a/b"`` string)."""
        if isinstance(x, Residue):
            return x
        if isinstance(x, str):
            return cls.parse(x)
        f = Fraction(x)
        return cls(f.numerator % f.denominator, f.denominator)

    @classmethod
    def parse(cls, text: str) -> Residue:
        """Parse ``"num/den"`` (or a bare integer); unreduced input is canonicalized."""
        s = text.strip()
        if "/" in s:
            a, b = s.split("/", 1)
            num, den = int(a), int(b)
            if den == 0:
                raise ValueError(f"zero denominator in {text!r}")
            f = Fraction(num, den)
        else:
            f = Fraction(int(s))
        return cls(f.numerator % f.denominator, f.denominator)

    @classmethod
    def zero(cls) -> Residue:
        return cls(0, 1)

    @property
    def value(self) -> Fraction:
        """The representative in [0, 1)."""
        return Fraction(self.num, self.den)

    def is_zero(self) -> bool:
        return self.num == 0

    def __lt__(self, other: Residue) -> bool:
        if not isinstance(other, Residue):
            return NotImplemented
        return self.value < other.value

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"

    def __repr__(self) -> str:
        return f"Residue({self.num}/{self.den})"

    def __add__(self, other: RationalLike) -> Residue:
        return Residue.of(self.value + Residue.of(other).value)

    __radd__ = __add__

    def __sub__(self, other: RationalLike) -> Residue:
        return Residue.of(self.value - Residue.of(other).value)

    def __rsub__(self, other: RationalLike) -> Residue:
        return Residue.of(Residue.of(other).value - self.value)

    def __neg__(self) -> Residue:
        return Residue.of(-self.value)

    def __mul__(self, k: int) -> Residue:
        if not isinstance(k, int):
            return NotImplemented
        return Residue.of(self.value * k)

    __rmul__ = __mul__


@dataclass(frozen=True)
class PResidue:
    """A residue in Z_(p)/Z: the denominator is prime to ``p``."""

    value: Residue
    p: int

    def __post_init__(self):
        if self.p < 2:
            raise ValueError(f"p must be a prime, got {self.p}")
        if self.value.den % self.p == 0:
            raise ValueError(f"denominator of {self.value} is divisible by p={self.p}")

    @classmethod
    def of(cls, x: RationalLike, p: int) -> PResidue:
        if isinstance(x, PResidue):
            if x.p != p:
                raise ValueError("prime mismatch")
            return x
        return cls(Residue.of(x), p)

    def times_p(self) -> PResidue:
        return PResidue(self.value * self.p, self.p)

    def div_p(self) -> PResidue:
        """The unique ``y`` with ``p*y == self`` and den(y) prime to p."""
        return PResidue(div_p(self.value, self.p), self.p)

    def __str__(self) -> str:
        return str(self.value)


def div_p(x: Residue, p: int) -> Residue:
    """Solve ``p*y = x`` in Z_(p)/Z; the solution keeps the denominator of ``x``."""
    if x.den % p == 0:
        raise ValueError(f"denominator of {x} is divisible by p={p}")
    if x.den == 1:
        return x
    return Residue.of(Fraction(x.num * pow(p, -1, x.den), x.den))


def preimages(x: Residue, d: int) -> list[Residue]:
    """All ``y`` with ``d*y = x``, listed as ``(x + j)/d`` for j = 0..d-1."""
    if d < 1:
        raise ValueError(f"d must be positive, got {d}")
    return [Residue.of((x.value + j) / d) for j in range(d)]


def frac_bracket(x: Union[int, Fraction, Residue]) -> Fraction:
    """``<x>``: the representative of x mod Z in [0, 1)."""
    if isinstance(x, Residue):
        return x.value
    f = Fraction(x)
    return f - (f.numerator // f.denominator)


def _as_pair(x, p: int | None) -> tuple[Residue, int]:
    if isinstance(x, PResidue):
        return x.value, x.p
    if p is None:
        raise TypeError("p is required unless x is a PResidue")
    r = Residue.of(x)
    if r.den % p == 0:
        raise ValueError(f"denominator of {r} is divisible by p={p}")
    return r, p


def frobenius_orbit(x, p: int | None = None) -> tuple[list[PResidue], int]:
    """Orbit ``[x, px, ..., p^(e-1) x]`` of multiplication by p, and its length e."""
    r, p = _as_pair(x, p)
    orbit = [PResidue(r, p)]
    y = r * p
    while y != r:
        orbit.append(PResidue(y, p))
        y = y * p
    return orbit, len(orbit)


@lru_cache(maxsize=1 << 16)
def _balanced(num: int, den: int, p: int) -> Fraction:
    # multiplicative order of p mod den gives the orbit length
    e = 1
    if den > 1:
        y = p % den
        while y != 1:
            y = y * p % den
            e += 1
    total = Fraction(0)
    k = num
    for _ in range(e):
        total += Fraction(k, den)
        k = k * p % den
    return total / e - Fraction(1, 2)


def balanced_bracket(x, p: int | None = None) -> Fraction:
    """``(1/e) * sum_{i<e} (<p^i x> - 1/2)`` over the Frobenius orbit of x.

    Accepts a :class:`PResidue`, or any rational/Residue together with ``p``.
    """
    r, p = _as_pair(x, p)
    return _balanced(r.num, r.den, p)


def multiplicative_order(a: int, n: int) -> int:
    """Order of ``a`` in (Z/nZ)^x; ``n == 1`` gives 1."""
    if n == 1:
        return 1
    if gcd(a, n) != 1:
        raise ValueError(f"{a} is not a unit mod {n}")
    e, y = 1, a % n
    while y != 1:
        y = y * a % n
        e += 1
    return e


def units(n: int) -> list[int]:
    """Representatives of (Z/nZ)^x in 1..n (so ``units(1) == [1]``)."""
    return [t for t in range(1, n + 1) if gcd(t, n) == 1]


def euler_phi(n: int) -> int:
    return len(units(n))
