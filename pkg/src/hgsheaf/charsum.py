"""Exact Gauss sums over finite fields, valued in cyclotomic integers.

A Gauss sum ``g(kappa, psi) = sum_{x in F_q^x} chi_kappa(x) psi(tr x)`` lives in
``Z[zeta_n]`` with ``n = lcm(den(kappa), p)``. Elements of ``Z[zeta_n]`` are
stored in the power basis modulo the n-th cyclotomic polynomial, so equality
is coefficient equality.

The multiplicative character is pinned by the field's generator ``g``:
``chi_kappa(g^j) = zeta_m^(j * m * kappa)``. Identities that do not depend on
this choice (valuations, absolute values, Frobenius invariance) are what the
tests check.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Sequence

from .residues import PResidue, Residue, frac_bracket, units


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


# ----------------------------------------------------------- cyclotomic ring


def _poly_divmod_exact(num: list[int], den: list[int]) -> list[int]:
    """Exact quotient of integer polynomials (low degree first), den monic."""
    num = num[:]
    dn = len(den) - 1
    out = [0] * (len(num) - dn)
    for k in range(len(num) - 1, dn - 1, -1):
        c = num[k]
        if c:
            out[k - dn] = c
            for i, d in enumerate(den):
                num[k - dn + i] -= c * d
    if any(num[:dn]):
        raise ArithmeticError("division is not exact")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, constant term first."""
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divmod_exact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Row k holds x^k reduced modulo Phi_n, for k = 0..n-1."""
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    rows = []
    cur = [0] * deg
    cur[0] = 1
    for _ in range(n):
        rows.append(tuple(cur))
        # multiply by x and reduce the overflow term
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * phi[i] for i, c in enumerate(cur)]
    return tuple(rows)


def _reduce_cyclic(n: int, vec: Sequence[int]) -> tuple[int, ...]:
    table = _power_table(n)
    deg = len(table[0])
    out = [0] * deg
    for k, c in enumerate(vec):
        if c:
            row = table[k % n]
            for i in range(deg):
                if row[i]:
                    out[i] += c * row[i]
    return tuple(out)


@dataclass(frozen=True)
class CycloElem:
    """An element of Z[zeta_n] in the reduced power basis (length phi(n))."""

    n: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        deg = len(cyclotomic_polynomial(self.n)) - 1
        if len(self.coeffs) != deg:
            raise ValueError(f"expected {deg} coefficients for n={self.n}")

    @classmethod
    def from_cyclic(cls, n: int, vec: Sequence[int]) -> CycloElem:
        """Element ``sum_k vec[k] * zeta_n^k`` (exponents taken mod n)."""
        return cls(n, _reduce_cyclic(n, vec))

    @classmethod
    def integer(cls, value: int, n: int = 1) -> CycloElem:
        vec = [0] * n
        vec[0] = value
        return cls.from_cyclic(n, vec)

    @classmethod
    def zeta(cls, n: int, k: int = 1) -> CycloElem:
        vec = [0] * n
        vec[k % n] = 1
        return cls.from_cyclic(n, vec)

    def lift(self, m: int) -> CycloElem:
        """The same element viewed in Z[zeta_m] for a multiple m of n."""
        if m == self.n:
            return self
        if m % self.n:
            raise ValueError(f"{m} is not a multiple of {self.n}")
        step = m // self.n
        vec = [0] * m
        for k, c in enumerate(self.coeffs):
            vec[k * step] += c
        return CycloElem.from_cyclic(m, vec)

    def _common(self, other: CycloElem | int) -> tuple[CycloElem, CycloElem]:
        if isinstance(other, int):
            other = CycloElem.integer(other, self.n)
        m = _lcm(self.n, other.n)
        return self.lift(m), other.lift(m)

    def __add__(self, other):
        a, b = self._common(other)
        return CycloElem(a.n, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycloElem(self.n, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        return self + (-other if isinstance(other, CycloElem) else -other)

    def __mul__(self, other):
        if isinstance(other, int):
            return CycloElem(self.n, tuple(other * x for x in self.coeffs))
        a, b = self._common(other)
        vec = [0] * a.n
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        vec[(i + j) % a.n] += x * y
        return CycloElem.from_cyclic(a.n, vec)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> CycloElem:
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = CycloElem.integer(1, self.n)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = CycloElem.integer(other, self.n)
        if not isinstance(other, CycloElem):
            return NotImplemented
        a, b = self._common(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        return hash((self.n, self.coeffs))

    def exact_div(self, k: int) -> CycloElem:
        """Divide every coefficient by the integer ``k``; raises if not exact."""
        if any(c % k for c in self.coeffs):
            raise ArithmeticError(f"{self} is not divisible by {k}")
        return CycloElem(self.n, tuple(c // k for c in self.coeffs))

    def embed(self, k: int = 1) -> complex:
        """Complex value under zeta_n -> exp(2 pi i k / n), gcd(k, n) = 1."""
        z = cmath.exp(2j * cmath.pi * k / self.n)
        return sum(c * z**i for i, c in enumerate(self.coeffs))

    def embeddings(self) -> list[complex]:
        return [self.embed(k) for k in units(self.n)]

    def root_of_unity_exponent(self) -> tuple[int, int] | None:
        """``(j, n2)`` with ``self == zeta_n2^j`` (n2 = lcm(n, 2)), or None."""
        n2 = _lcm(self.n, 2)
        me = self.lift(n2)
        for j in range(n2):
            if me == CycloElem.zeta(n2, j):
                return j, n2
        return None

    def to_dict(self) -> dict:
        return {"n": self.n, "coeffs": list(self.coeffs)}

    @classmethod
    def from_dict(cls, obj: dict) -> CycloElem:
        return cls(int(obj["n"]), tuple(int(c) for c in obj["coeffs"]))

    def __repr__(self) -> str:
        return f"CycloElem(n={self.n}, coeffs={list(self.coeffs)})"


# -------------------------------------------------------------- finite field


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = [x % p for x in a]
    dm = len(m) - 1
    inv = pow(m[-1], -1, p)
    for k in range(len(a) - 1, dm - 1, -1):
        c = a[k] * inv % p
        if c:
            for i, x in enumerate(m):
                a[k - dm + i] = (a[k - dm + i] - c * x) % p
    out = a[:dm] if dm else []
    return out + [0] * (dm - len(out))


def _is_irreducible(f: list[int], p: int) -> bool:
    deg = len(f) - 1
    for dg in range(1, deg // 2 + 1):
        for code in range(p**dg):
            g = [(code // p**i) % p for i in range(dg)] + [1]
            if not any(_poly_mod(f, g, p)):
                return False
    return True


class FiniteField:
    """F_q with q = p^e; elements are ints 0..q-1 whose base-p digits are the
    coefficients of a polynomial modulo a fixed irreducible ``modulus``."""

    def __init__(self, p: int, e: int = 1):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        if e < 1:
            raise ValueError("degree must be positive")
        self.p, self.e, self.q = p, e, p**e
        self.modulus = self._least_irreducible()
        self._mul_cache: dict[tuple[int, int], int] = {}
        self.generator = self._least_generator()
        self.exp = [1]
        for _ in range(self.q - 2):
            self.exp.append(self.mul(self.exp[-1], self.generator))
        self.log = {x: j for j, x in enumerate(self.exp)}
        if len(self.log) != self.q - 1:
            raise AssertionError("generator does not have order q - 1")
        # trace of generator^j, as an element of F_p
        self.trace_of_power = [self._trace(x) for x in self.exp]
        self._gauss_cache: dict[tuple[Residue, int], CycloElem] = {}

    @classmethod
    def of_order(cls, q: int) -> FiniteField:
        for p in range(2, q + 1):
            if q % p == 0:
                e, t = 0, q
                while t % p == 0:
                    t //= p
                    e += 1
                if t != 1:
                    raise ValueError(f"{q} is not a prime power")
                return cls(p, e)
        raise ValueError(f"{q} is not a prime power")

    def __repr__(self) -> str:
        return f"FiniteField(p={self.p}, e={self.e})"

    def _digits(self, x: int) -> list[int]:
        return [(x // self.p**i) % self.p for i in range(self.e)]

    def _from_digits(self, d: Sequence[int]) -> int:
        return sum((c % self.p) * self.p**i for i, c in enumerate(d))

    def _least_irreducible(self) -> list[int]:
        for code in range(self.p**self.e):
            f = [(code // self.p**i) % self.p for i in range(self.e)] + [1]
            if _is_irreducible(f, self.p):
                return f
        raise AssertionError("no irreducible polynomial found")

    def add(self, a: int, b: int) -> int:
        return self._from_digits([x + y for x, y in zip(self._digits(a), self._digits(b))])

    def mul(self, a: int, b: int) -> int:
        key = (a, b) if a <= b else (b, a)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] += x * y
        out = self._from_digits(_poly_mod(prod, self.modulus, self.p))
        self._mul_cache[key] = out
        return out

    def power(self, a: int, k: int) -> int:
        out = 1
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def _order(self, a: int) -> int:
        k, x = 1, a
        while x != 1:
            x = self.mul(x, a)
            k += 1
            if k > self.q:
                return 0
        return k

    def _least_generator(self) -> int:
        for g in range(1, self.q):
            if self._order(g) == self.q - 1:
                return g
        raise AssertionError("no generator")

    def _trace(self, x: int) -> int:
        total, y = 0, x
        for _ in range(self.e):
            total = self.add(total, y)
            y = self.power(y, self.p)
        if total >= self.p:
            raise AssertionError("trace left the prime field")
        return total

    def elements(self) -> range:
        return range(self.q)


def _check_admissible(field: FiniteField, kappa: Residue) -> None:
    if kappa.den % field.p == 0:
        raise ValueError(f"denominator of {kappa} is divisible by p={field.p}")
    if (field.q - 1) % kappa.den:
        raise ValueError(f"denominator of {kappa} does not divide q - 1 = {field.q - 1}")


def _residue(kappa) -> Residue:
    return kappa.value if isinstance(kappa, PResidue) else Residue.of(kappa)


def gauss_sum(field: FiniteField, kappa, psi_shift: int = 1) -> CycloElem:
    """``sum_{x != 0} chi_kappa(x) * zeta_p^(psi_shift * tr x)``, exactly."""
    k = _residue(kappa)
    _check_admissible(field, k)
    if psi_shift % field.p == 0:
        raise ValueError("psi_shift must be a unit mod p")
    key = (k, psi_shift % field.p)
    hit = field._gauss_cache.get(key)
    if hit is not None:
        return hit
    m, a, p = k.den, k.num, field.p
    n = _lcm(m, p)
    sm, sp = n // m, n // p
    vec = [0] * n
    for j, tr in enumerate(field.trace_of_power):
        vec[(((j * a) % m) * sm + (psi_shift * tr % p) * sp) % n] += 1
    g = CycloElem.from_cyclic(n, vec)
    field._gauss_cache[key] = g
    return g


def gauss_valuation(field: FiniteField, kappa) -> Fraction:
    """p-adic order of the Gauss sum (ord p = 1): ``sum_{i<e} <p^i kappa>``."""
    k = _residue(kappa)
    _check_admissible(field, k)
    return sum((frac_bracket(k.value * field.p**i) for i in range(field.e)), Fraction(0))


def character_sign_at_minus_one(field: FiniteField, kappa) -> int:
    """``chi_kappa(-1)``, which is +1 or -1."""
    k = _residue(kappa)
    _check_admissible(field, k)
    if field.p == 2:
        return 1
    return -1 if (k.num * ((field.q - 1) // k.den)) % 2 else 1


def frobenius_gauss_identity(field: FiniteField, kappa) -> bool:
    """Whether ``g(p * kappa) == g(kappa)`` exactly."""
    k = _residue(kappa)
    return gauss_sum(field, k * field.p) == gauss_sum(field, k)


def hasse_davenport_ratio(field: FiniteField, lam, d: int) -> CycloElem:
    """``prod_j g(lam + j/d) / (g(d lam) * prod_{j>=1} g(j/d))`` as an exact element.

    The division is carried out with ``1/g(k) = chi_k(-1) g(-k) / q`` for
    ``k != 0`` and ``1/g(0) = -1``, followed by exact integer division.
    """
    lam = _residue(lam)
    if d < 1 or (field.q - 1) % d:
        raise ValueError(f"d={d} must divide q - 1 = {field.q - 1}")
    _check_admissible(field, lam)
    numer = CycloElem.integer(1)
    for j in range(d):
        numer = numer * gauss_sum(field, lam + Fraction(j, d))
    divisors = [lam * d] + [Residue.of(Fraction(j, d)) for j in range(1, d)]
    qpow = 0
    for k in divisors:
        if k.is_zero():
            numer = -numer
        else:
            numer = numer * gauss_sum(field, -k) * character_sign_at_minus_one(field, k)
            qpow += 1
    return numer.exact_div(field.q**qpow)
