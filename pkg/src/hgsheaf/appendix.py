"""Linear independence of the functions ``(t, x) -> <<t (x + kappa)>>``.

For even N and an odd prime p not dividing N, consider the map ``phi`` sending
the basis vector ``v_kappa`` (kappa in (1/N)Z/Z) to the function
``(t, x) -> <<t (x + kappa)>>`` on ``(Z/NZ)^x x (1/N)Z/Z``, taken modulo
functions of ``x`` alone. Its rank is governed by the divisors M of N for
which ``-1`` is a power of p modulo M. Everything rank-related here is exact;
only L-values and the theta / gamma functionals use mpmath.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Any

import mpmath
import numpy as np

from . import lattice
from .residues import Residue, balanced_bracket, euler_phi, frac_bracket, units


class AuditError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


def _check_np(N: int, p: int) -> None:
    if N < 2 or N % 2:
        raise AuditError(f"N must be even, got {N}")
    if p == 2 or not _is_prime(p):
        raise AuditError(f"p must be an odd prime, got {p}")
    if N % p == 0:
        raise AuditError(f"p={p} divides N={N}")


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def minus_one_is_power(p: int, M: int) -> bool:
    """Does the subgroup of (Z/MZ)^x generated by p contain -1?"""
    x = p % M
    seen = set()
    while x not in seen:
        if x == M - 1:
            return True
        seen.add(x)
        x = x * p % M
    return False


@dataclass(frozen=True)
class SupersingularSplit:
    N: int
    p: int
    S: tuple[int, ...]
    Sc: tuple[int, ...]

    def to_dict(self) -> dict[str, Any]:
        return {"N": self.N, "p": self.p, "S": list(self.S), "Sc": list(self.Sc)}


def supersingular_divisors(N: int, p: int) -> SupersingularSplit:
    _check_np(N, p)
    S, Sc = [], []
    for M in divisors(N):
        if M in (1, 2):
            continue
        (S if minus_one_is_power(p, M) else Sc).append(M)
    return SupersingularSplit(N, p, tuple(S), tuple(Sc))


# ------------------------------------------------------------ the matrix


def _grid(N: int) -> list[tuple[int, int]]:
    return [(t, a) for t in units(N) for a in range(N)]


@dataclass
class FunctionalMatrix:
    """Rows ``kappa = k/N``, columns ``(t, x = a/N)``, entries ``<<t (x + kappa)>>``.

    ``quotient`` rows are the entries minus their ``t = 1`` value at the same
    x, which identifies the quotient by functions of x with a subspace.
    """

    N: int
    p: int
    columns: list[tuple[int, int]]
    rows: list[list[Fraction]]
    quotient: list[list[Fraction]]

    def rank(self) -> int:
        return lattice.rank(self.quotient)

    def image_of(self, vec: list[Fraction | int]) -> list[Fraction]:
        """``phi(sum vec[k] v_{k/N})`` in the quotient coordinates."""
        return [sum((c * row[j] for c, row in zip(vec, self.quotient) if c), Fraction(0))
                for j in range(len(self.columns))]


def functional_matrix(N: int, p: int) -> FunctionalMatrix:
    _check_np(N, p)
    cols = _grid(N)
    rows, quot = [], []
    for k in range(N):
        row = [balanced_bracket(Residue.of(Fraction(t * (a + k), N)), p) for t, a in cols]
        base = {a: v for (t, a), v in zip(cols, row) if t == 1}
        rows.append(row)
        quot.append([v - base[a] for (t, a), v in zip(cols, row)])
    return FunctionalMatrix(N, p, cols, rows, quot)


def sigma_vector(N: int, M: int, kappa: int | Fraction | Residue) -> list[int]:
    """Indicator of ``kappa + i/l`` (i < l = N/M) as a vector on (1/N)Z/Z.

    An integer ``kappa`` is read as the index ``kappa/N``.
    """
    if M < 1 or N % M:
        raise AuditError(f"M={M} does not divide N={N}")
    if isinstance(kappa, int):
        k0 = kappa % N
    else:
        k = Residue.of(kappa)
        if N % k.den:
            raise AuditError(f"{k} is not in (1/{N})Z/Z")
        k0 = k.num * (N // k.den)
    l = N // M
    vec = [0] * N
    for i in range(l):
        vec[(k0 + i * M) % N] += 1
    return vec


def listed_generators(split: SupersingularSplit) -> list[tuple[int, int]]:
    """``(M, j)`` labels of the chosen generators of the kernel.

    ``S u {2}`` is numbered in decreasing order (so a divisor never precedes a
    multiple); block i contributes ``j = t_{i-1} + s`` for s = 1..phi(M_i), with
    t_i the running total of phi. ``(2, 0)`` and ``(2, 1)`` are appended.
    """
    numbered = sorted(set(split.S) | {2}, reverse=True)
    out, total = [], 0
    for M in numbered:
        for s in range(1, euler_phi(M) + 1):
            out.append((M, total + s))
        total += euler_phi(M)
    out += [(2, 0), (2, 1)]
    return out


@dataclass
class AuditReport:
    split: SupersingularSplit
    rank_image: int
    expected_rank: int
    dim_W: int
    expected_dim_W: int
    kernel_dim: int
    sigmas_in_kernel: bool
    all_sigmas_span: int
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def rank_ok(self) -> bool:
        return self.rank_image == self.expected_rank

    @property
    def W_ok(self) -> bool:
        return self.dim_W == self.expected_dim_W

    @property
    def kernel_is_W(self) -> bool:
        return self.sigmas_in_kernel and self.dim_W == self.kernel_dim

    @property
    def ok(self) -> bool:
        return self.rank_ok and self.W_ok and self.kernel_is_W

    def to_dict(self) -> dict[str, Any]:
        out = {
            **self.split.to_dict(),
            "rank_image": self.rank_image,
            "expected_rank": self.expected_rank,
            "dim_W": self.dim_W,
            "expected_dim_W": self.expected_dim_W,
            "kernel_dim": self.kernel_dim,
            "sigmas_in_kernel": self.sigmas_in_kernel,
            "all_sigmas_span": self.all_sigmas_span,
            "rank_ok": self.rank_ok,
            "W_ok": self.W_ok,
            "kernel_is_W": self.kernel_is_W,
            "ok": self.ok,
        }
        out.update(self.extra)
        return out


def phi_rank_audit(N: int, p: int) -> AuditReport:
    split = supersingular_divisors(N, p)
    fm = functional_matrix(N, p)
    rank_image = fm.rank()
    gens = [sigma_vector(N, M, j) for M, j in listed_generators(split)]
    in_kernel = all(not any(fm.image_of(v)) for v in gens)
    every = [sigma_vector(N, M, k) for M in (*split.S, 2) for k in range(N)]
    every_in_kernel = all(not any(fm.image_of(v)) for v in every)
    return AuditReport(
        split=split,
        rank_image=rank_image,
        expected_rank=sum(euler_phi(M) for M in split.Sc),
        dim_W=lattice.rank(gens),
        expected_dim_W=sum(euler_phi(M) for M in split.S) + 2,
        kernel_dim=N - rank_image,
        sigmas_in_kernel=in_kernel and every_in_kernel,
        all_sigmas_span=lattice.rank(every),
    )


# ------------------------------------------------- Dirichlet characters, L(1)


@dataclass(frozen=True)
class DirichletCharacter:
    """A character mod ``modulus`` stored as ``unit -> exponent in Q/Z``."""

    modulus: int
    table: tuple[tuple[int, Fraction], ...]

    def exponent(self, n: int) -> Fraction | None:
        n %= self.modulus
        for u, e in self.table:
            if u == n:
                return e
        return None

    def __call__(self, n: int) -> mpmath.mpc:
        e = self.exponent(n)
        if e is None:
            return mpmath.mpc(0)
        return mpmath.expjpi(2 * mpmath.mpf(e.numerator) / e.denominator)

    @property
    def is_odd(self) -> bool:
        return self.modulus > 2 and self.exponent(-1) == Fraction(1, 2)

    def is_trivial_on(self, a: int) -> bool:
        return self.exponent(a) == 0


def _order(a: int, n: int) -> int:
    k, x = 1, a % n
    while x != 1 % n:
        x = x * a % n
        k += 1
    return k


def dirichlet_characters(N: int) -> list[DirichletCharacter]:
    """Every character of (Z/NZ)^x, by brute force over a generating set."""
    us = units(N)
    if N <= 2:
        return [DirichletCharacter(N, ((1 % N, Fraction(0)),))]
    gens: list[int] = []
    span = {1}
    for a in us:
        if a in span:
            continue
        gens.append(a)
        frontier = set(span)
        while frontier:
            frontier = {x * g % N for x in frontier | span for g in gens} - span
            span |= frontier
    orders = [_order(g, N) for g in gens]
    # one exponent vector per unit
    logs: dict[int, tuple[int, ...]] = {}
    for es in product(*(range(o) for o in orders)):
        u = 1
        for g, e in zip(gens, es):
            u = u * pow(g, e, N) % N
        logs.setdefault(u, es)
    relations = [es for es in product(*(range(o) for o in orders))
                 if math.prod(pow(g, e, N) for g, e in zip(gens, es)) % N == 1]
    out = []
    for xs in product(*(range(o) for o in orders)):
        vals = [Fraction(x, o) for x, o in zip(xs, orders)]
        if any(sum(e * v for e, v in zip(rel, vals)) % 1 for rel in relations):
            continue
        table = tuple((u, sum((e * v for e, v in zip(logs[u], vals)), Fraction(0)) % 1)
                      for u in us)
        out.append(DirichletCharacter(N, table))
    return out


def odd_characters(N: int) -> list[DirichletCharacter]:
    return [c for c in dirichlet_characters(N) if c.is_odd]


def displayed_l_sum(N: int, chi: DirichletCharacter, dps: int = 64) -> mpmath.mpc:
    """``-(2 pi i / N) sum_{m,l} psi(ml) chi(m) (<l/N> - 1/2)`` with ``psi(x) = e(x/N)``."""
    with mpmath.workdps(dps):
        total = mpmath.mpc(0)
        for m in units(N):
            cm = chi(m)
            for l in range(N):
                total += mpmath.expjpi(mpmath.mpf(2 * m * l) / N) * cm * _mp(Fraction(l, N) - Fraction(1, 2))
        return -2j * mpmath.pi / N * total


def l_value(N: int, chi: DirichletCharacter, dps: int = 64) -> mpmath.mpc:
    """``L(1, chi)`` for an odd character mod N, from the finite double sum.

    The double sum evaluates to ``-2 L(1, chi)``; the factor is removed here.
    """
    if N <= 2:
        raise AuditError("N must exceed 2")
    if chi.modulus != N:
        raise AuditError(f"character is mod {chi.modulus}, not {N}")
    if not chi.is_odd:
        raise AuditError("character must be odd")
    with mpmath.workdps(dps):
        return -displayed_l_sum(N, chi, dps) / 2


def l_value_digamma(N: int, chi: DirichletCharacter, dps: int = 64) -> mpmath.mpc:
    """Oracle: ``L(1, chi) = -(1/N) sum_a chi(a) digamma(a/N)``."""
    with mpmath.workdps(dps):
        return -sum(chi(a) * mpmath.digamma(mpmath.mpf(a) / N) for a in units(N)) / N


# ---------------------------------------------------- theta and gamma forms


def _admissible_character(M: int, p: int) -> DirichletCharacter:
    for c in odd_characters(M):
        if c.is_trivial_on(p):
            return c
    raise AuditError(f"no odd character mod {M} is trivial on p={p}; is M supersingular?")


def _check_l_prime(N: int, M: int, l_prime: int) -> None:
    if N % M:
        raise AuditError(f"M={M} does not divide N={N}")
    if math.gcd(l_prime, N) != N // M:
        raise AuditError(f"l'={l_prime} does not map (1/{N})Z/Z onto (1/{M})Z/Z")


def _mp(x: Fraction) -> mpmath.mpf:
    return mpmath.mpf(x.numerator) / x.denominator


def _e(x: Fraction) -> mpmath.mpc:
    return mpmath.expjpi(2 * mpmath.mpf(x.numerator) / x.denominator)


@dataclass
class FunctionalValue:
    value: complex
    expected: complex
    normalizer: complex
    formula_normalizer: complex

    @property
    def normalizer_ratio(self) -> complex:
        return self.formula_normalizer / self.normalizer

    def to_dict(self) -> dict[str, Any]:
        def c(z):
            return [float(z.real), float(z.imag)]
        return {"value": c(self.value), "expected": c(self.expected),
                "normalizer": c(self.normalizer),
                "formula_normalizer": c(self.formula_normalizer),
                "normalizer_ratio": c(self.normalizer_ratio)}


def _raw_functional(N: int, p: int, chi: DirichletCharacter, l_prime: int, k: int,
                    bracket) -> mpmath.mpc:
    total = mpmath.mpc(0)
    for t in units(N):
        ct = chi(t)
        if ct == 0:
            continue
        for a in range(N):
            total += ct * _e(Fraction(l_prime * a, N)) * _mp(bracket(Fraction(t * (a + k), N)))
    return total


def _formula_normalizer(N: int, M: int, l_prime: int, chi: DirichletCharacter) -> mpmath.mpc:
    l = N // M
    t0 = (l_prime // l) % M
    chi_ratio = mpmath.conj(chi(t0))  # chi(l / l') = chi(t0)^{-1}
    return chi_ratio * M * euler_phi(M) / (2j * mpmath.pi * euler_phi(N)) / l_value(M, chi)


def theta_functional(N: int, p: int, M: int, l_prime: int, kappa, dps: int = 64
                     ) -> FunctionalValue:
    """``theta_{l'}(phi(v_kappa))`` normalized so that kappa = 0 gives 1."""
    _check_l_prime(N, M, l_prime)
    k = Residue.of(kappa)
    if N % k.den:
        raise AuditError(f"{k} is not in (1/{N})Z/Z")
    k0 = k.num * (N // k.den)
    with mpmath.workdps(dps):
        chi = _admissible_character(M, p)

        def br(x):
            return balanced_bracket(Residue.of(x), p)

        norm = 1 / _raw_functional(N, p, chi, l_prime, 0, br)
        value = norm * _raw_functional(N, p, chi, l_prime, k0, br)
        return FunctionalValue(complex(value), complex(_e(Fraction(-l_prime * k0, N))),
                               complex(norm), complex(_formula_normalizer(N, M, l_prime, chi)))


def gamma_functional(N: int, M: int, l_prime: int, kappa, dps: int = 64) -> FunctionalValue:
    """The companion form with the plain centred bracket and any odd character mod M."""
    _check_l_prime(N, M, l_prime)
    k = Residue.of(kappa)
    k0 = k.num * (N // k.den)
    with mpmath.workdps(dps):
        chi = odd_characters(M)[0]

        def br(x):
            return frac_bracket(x) - Fraction(1, 2)

        norm = 1 / _raw_functional(N, 0, chi, l_prime, 0, br)
        value = norm * _raw_functional(N, 0, chi, l_prime, k0, br)
        return FunctionalValue(complex(value), complex(_e(Fraction(-l_prime * k0, N))),
                               complex(norm), complex(_formula_normalizer(N, M, l_prime, chi)))


def l_primes(N: int, M: int) -> list[int]:
    """The phi(M) elements l' of Z/NZ with ``gcd(l', N) = N/M``."""
    return [lp for lp in range(N) if math.gcd(lp, N) == N // M]


def theta_vandermonde_rank(N: int, p: int) -> tuple[int, int]:
    """Numerical rank of ``(e(-l' k / N))`` over S^c blocks, and the row count."""
    split = supersingular_divisors(N, p)
    rows = [[np.exp(-2j * np.pi * lp * k / N) for k in range(N)]
            for M in split.Sc for lp in l_primes(N, M)]
    if not rows:
        return 0, 0
    return int(np.linalg.matrix_rank(np.array(rows))), len(rows)
