"""Exact p-adic order of cyclotomic integers at a chosen prime above p.

Used as an independent check of the bracket formulas for Gauss-sum orders:
the element is expanded in ``pi = zeta_p - 1`` and each coefficient, an
element of Z[zeta_d] with p not dividing d, is sent into the Galois ring
``Z/p^K [y] / (M)`` by ``zeta_d -> `` a Teichmueller root of unity, where its
order is read off the coefficients. Orders are normalized so that ``ord p = 1``.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .charsum import CycloElem, FiniteField


class PrecisionError(ArithmeticError):
    pass


class GaloisRing:
    """``Z/p^K [y] / (M(y))`` with M the (monic) modulus of a finite field, lifted."""

    def __init__(self, field: FiniteField, K: int):
        self.p, self.e, self.K = field.p, field.e, K
        self.mod = field.p**K
        self.M = list(field.modulus)

    def reduce(self, a: list[int]) -> list[int]:
        a = [x % self.mod for x in a]
        e = self.e
        for k in range(len(a) - 1, e - 1, -1):
            c = a[k]
            if c:
                for i, x in enumerate(self.M):
                    a[k - e + i] = (a[k - e + i] - c * x) % self.mod
        out = a[:e]
        return out + [0] * (e - len(out))

    def mul(self, a: list[int], b: list[int]) -> list[int]:
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return self.reduce(prod)

    def add(self, a: list[int], b: list[int]) -> list[int]:
        return [(x + y) % self.mod for x, y in zip(a, b)]

    def scale(self, a: list[int], c: int) -> list[int]:
        return [(c * x) % self.mod for x in a]

    def power(self, a: list[int], k: int) -> list[int]:
        out = self.one()
        base = a
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def one(self) -> list[int]:
        return [1] + [0] * (self.e - 1)

    def zero(self) -> list[int]:
        return [0] * self.e

    def teichmueller(self, digits: list[int]) -> list[int]:
        """The root of unity congruent to the given field element mod p."""
        q = self.p**self.e
        x = self.reduce(list(digits))
        for _ in range(self.K):
            x = self.power(x, q)
        return x

    def order(self, a: list[int]) -> int:
        """p-adic order of an element (K if it vanishes mod p^K)."""
        best = self.K
        for c in a:
            if c:
                v = 0
                while c % self.p == 0:
                    c //= self.p
                    v += 1
                best = min(best, v)
        return best


def _split_exponent(n: int, p: int) -> tuple[int, int, int]:
    """``(d, x, y)`` with n = d p^a (a <= 1) and ``zeta_n = zeta_d^x zeta_p^y``."""
    if n % p:
        return n, 1, 0
    d = n // p
    if d % p == 0:
        raise ValueError(f"n={n} is divisible by p^2")
    if d == 1:
        return 1, 0, 1
    x = pow(p, -1, d)
    y = (1 - x * p) // d
    return d, x, y


def padic_order(elem: CycloElem, field: FiniteField, K: int | None = None,
                inverse_generator: bool = True) -> Fraction:
    """Order of ``elem`` at the prime where ``zeta_{q-1}`` meets the generator.

    With ``inverse_generator`` the prime is the one on which
    ``zeta_{q-1} == generator^{-1}``; otherwise ``zeta_{q-1} == generator``.
    """
    p, q = field.p, field.q
    d, x, y = _split_exponent(elem.n, p)
    if (q - 1) % d:
        raise ValueError(f"zeta_{d} does not live in F_{q}")
    K = K or 4 * field.e + 8
    ring = GaloisRing(field, K)
    # coefficient blocks a_j in Z[zeta_d] of zeta_p^j, as cyclic vectors mod d
    width = p if elem.n % p == 0 else 1
    blocks = [[0] * d for _ in range(width)]
    for k, c in enumerate(elem.coeffs):
        if c:
            blocks[(k * y) % width][(k * x) % d] += c
    if width > 1:
        top = blocks[p - 1]
        for j in range(p - 1):
            blocks[j] = [u - v for u, v in zip(blocks[j], top)]
        blocks = blocks[: p - 1]
    # zeta_p^j = (1 + pi)^j
    pis = [[sum(comb(j, k) * blocks[j][i] for j in range(k, len(blocks))) for i in range(d)]
           for k in range(len(blocks))]
    g = field.exp[(q - 1 - 1) if inverse_generator else 1]  # generator^{-1} or generator
    root = ring.teichmueller(field._digits(field.exp[(field.log[g] * ((q - 1) // d)) % (q - 1)]))
    powers = [ring.one()]
    for _ in range(d - 1):
        powers.append(ring.mul(powers[-1], root))
    best: Fraction | None = None
    ramification = p - 1 if width > 1 else 1
    for k, vec in enumerate(pis):
        val = ring.zero()
        for i, c in enumerate(vec):
            if c:
                val = ring.add(val, ring.scale(powers[i], c))
        v = ring.order(val)
        if v >= K:
            continue
        cand = Fraction(v) + Fraction(k, ramification)
        if best is None or cand < best:
            best = cand
    if best is None:
        raise PrecisionError(f"element vanishes to precision p^{K}")
    return best
