"""Cohomological Mellin transforms of hypergeometric data and their profiles.

Over F_q the transform at a character ``chi`` is the product of Gauss sums
``prod_i g(l_i(chi) + kappa_i)``; its p-adic order and, over C, its Hodge
type are sums of bracket values. ``profile`` tabulates those sums on a finite
grid of characters so two data can be compared exactly.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Iterator, Sequence

from .charsum import CycloElem, FiniteField, gauss_sum
from .hgdata import Character, HGData, apply_form
from .residues import Residue, balanced_bracket, frac_bracket, units


class MellinError(ValueError):
    pass


def _lcm_all(values) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


def arguments(data: HGData, chi: Sequence[Residue], t: int = 1) -> list[Residue]:
    """The residues ``t * (l_i(chi) + kappa_i)``."""
    if len(chi) != data.rank:
        raise MellinError(f"character needs {data.rank} components, got {len(chi)}")
    return [(apply_form(row, chi) + k) * t for row, k in zip(data.l, data.kappa)]


def _require_finite(data: HGData, field_: FiniteField | None = None) -> None:
    if data.p is None:
        raise MellinError("finite-field data required")
    if field_ is not None and field_.p != data.p:
        raise MellinError(f"field characteristic {field_.p} != data characteristic {data.p}")


def mellin_fq(data: HGData, chi: Sequence[Residue], field_: FiniteField,
              psi_shift: int = 1) -> CycloElem:
    """``prod_i g(l_i(chi) + kappa_i, psi)`` as an exact cyclotomic integer."""
    _require_finite(data, field_)
    out = CycloElem.integer(1)
    for i, a in enumerate(arguments(data, chi)):
        if (field_.q - 1) % a.den:
            raise MellinError(
                f"index {i}: denominator of l_i(chi) + kappa_i = {a} does not divide q - 1 = {field_.q - 1}"
            )
        out = out * gauss_sum(field_, a, psi_shift)
    return out


def mellin_bruteforce(data: HGData, chi: Sequence[Residue], field_: FiniteField,
                      psi_shift: int = 1) -> CycloElem:
    """The full character sum over ``(F_q^x)^r``, without factoring it.

    Restricted to r <= 4 and q <= 13; this is the oracle for :func:`mellin_fq`.
    """
    _require_finite(data, field_)
    if data.r > 4 or field_.q > 13:
        raise MellinError("brute-force sum is limited to r <= 4 and q <= 13")
    args = arguments(data, chi)
    for i, a in enumerate(args):
        if (field_.q - 1) % a.den:
            raise MellinError(f"index {i}: denominator {a.den} does not divide q - 1")
    p = field_.p
    n = _lcm_all([a.den for a in args] + [p])
    qm1 = field_.q - 1
    # per-variable exponent contributions: character part and additive part
    char_part = [[(j * a.num % a.den) * (n // a.den) for j in range(qm1)] for a in args]
    traces = field_.trace_of_power
    vec = [0] * n
    for js in product(range(qm1), repeat=len(args)):
        tr = 0
        e = 0
        for i, j in enumerate(js):
            e += char_part[i][j]
            tr += traces[j]
        e += (psi_shift * tr % p) * (n // p)
        vec[e % n] += 1
    return CycloElem.from_cyclic(n, vec)


def mellin_order(data: HGData, chi: Sequence[Residue], t: int = 1) -> Fraction:
    """Normalized p-adic order ``sum_i (<<t (l_i(chi) + kappa_i)>> + 1/2)``.

    Multiply by [F_q : F_p] to get the order of :func:`mellin_fq`.
    """
    _require_finite(data)
    p = data.p
    return sum((balanced_bracket(a, p) + Fraction(1, 2) for a in arguments(data, chi, t)),
               Fraction(0))


@dataclass(frozen=True)
class HodgeType:
    p: Fraction
    q: Fraction
    kappa_sum_zero: bool
    r: int

    @property
    def component_sum(self) -> Fraction:
        return self.p + self.q

    @property
    def stated_weight(self) -> int:
        """Weight attached to the branch: r when sum(kappa) != 0, else r - 1."""
        return self.r - 1 if self.kappa_sum_zero else self.r

    @property
    def weight_mismatch(self) -> bool:
        """Set when the components do not add up to r, which happens in the sum(kappa) != 0 branch."""
        return self.component_sum != self.r

    def to_dict(self) -> dict:
        return {
            "p": str(self.p),
            "q": str(self.q),
            "component_sum": str(self.component_sum),
            "kappa_sum_zero": self.kappa_sum_zero,
            "stated_weight": self.stated_weight,
            "weight_mismatch": self.weight_mismatch,
        }


def hodge_type(data: HGData, chi: Sequence[Residue], t: int = 1) -> HodgeType:
    """Hodge type of the Mellin transform of complex data at ``chi``, twisted by ``t``."""
    if data.p is not None:
        raise MellinError("Hodge types are defined for complex data only")
    raw = arguments(data, chi)
    for i, a in enumerate(raw):
        if a.is_zero():
            raise MellinError(f"index {i}: kappa_i + l_i(chi) is zero")
    args = [a * t for a in raw]
    hp = sum((frac_bracket(a) for a in args), Fraction(0))
    hq = sum((frac_bracket(-a) for a in args), Fraction(0))
    total = Residue.of(sum(k.value for k in data.kappa)) * t
    zero = total.is_zero()
    if not zero:
        hp += frac_bracket(-total)
        hq += frac_bracket(total)
    return HodgeType(hp, hq, zero, data.r)


# --------------------------------------------------------------- profiles


def _least_prime_above(m: int) -> int:
    c = m + 1
    while any(c % d == 0 for d in range(2, int(c**0.5) + 1)):
        c += 1
    return c


def generic_shift(*datas: HGData) -> tuple[Fraction, ...]:
    """Offset ``(1/P, 1/P^2, ...)`` keeping every ``l_i`` off the integers.

    P is the least prime above every |coefficient|, so ``l_i(shift)`` is never an
    integer for a nonzero row. For rank 1 with unit forms this is the half shift.
    """
    rank = datas[0].rank
    big = max((abs(x) for d in datas for row in d.l for x in row), default=1)
    P = _least_prime_above(max(big, 1))
    return tuple(Fraction(1, P ** (j + 1)) for j in range(rank))


@dataclass
class ProfileGrid:
    """Exact profile values indexed by ``(chi, t)``; rows in canonical grid order."""

    flavor: str
    N: int
    rank: int
    points: list[tuple[Character, int]] = field(default_factory=list)
    values: list[Fraction] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.values)

    def items(self) -> Iterator[tuple[tuple[Character, int], Fraction]]:
        return zip(self.points, self.values)

    def as_dict(self) -> dict[tuple[Character, int], Fraction]:
        return dict(self.items())

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"chi_{j + 1}" for j in range(self.rank)] + ["t", "value"])
        for (chi, t), v in self.items():
            w.writerow([str(c) for c in chi] + [t, str(v)])
        return buf.getvalue()


def _check_N(data: HGData, N: int) -> None:
    if N < 1:
        raise MellinError("N must be positive")
    for k in data.kappa:
        if N % k.den:
            raise MellinError(f"N={N} is not a multiple of the denominator of {k}")
    if data.p is not None and N % data.p == 0:
        raise MellinError(f"N={N} must be prime to p={data.p}")


def _shift_scale(shift: Sequence[Fraction]) -> int:
    return _lcm_all(s.denominator for s in shift)


def shell_order(N: int, rank: int) -> Iterator[tuple[int, ...]]:
    """All of ``range(N)^rank``, cube shell by cube shell: max coordinate 0, 1, 2, ..."""
    for h in range(N):
        for a in product(range(h + 1), repeat=rank):
            if h in a:
                yield a


def golden_unit(N: int) -> int:
    """Unit mod N nearest to N (sqrt 5 - 1)/2; multiplying by it spreads 0, 1, 2, ... over Z/NZ."""
    target = N * (5 ** 0.5 - 1) / 2
    return min((u for u in units(N)), key=lambda u: (abs(u - target), u))


def _tuples(N: int, rank: int, order: str) -> Iterator[tuple[int, ...]]:
    if order == "lex":
        return product(range(N), repeat=rank)
    if order == "shell":
        return shell_order(N, rank)
    if order == "spread":
        u = golden_unit(N)
        return (tuple(x * u % N for x in a) for a in shell_order(N, rank))
    raise MellinError(f"unknown grid order {order!r}")


def grid_indices(data: HGData, N: int, order: str = "lex") -> Iterator[tuple[tuple[int, ...], int]]:
    """Integer labels ``(a, t)`` of the grid; ``t`` varies fastest."""
    ts = units(N) if data.p is not None else [1]
    for a in _tuples(N, data.rank, order):
        for t in ts:
            yield a, t


def point_of(a: Sequence[int], t: int, N: int, shift: Sequence[Fraction] | None = None
             ) -> tuple[Character, int]:
    """The character ``(a + shift) / N`` (no shift for finite data) and twist."""
    if shift is None:
        return tuple(Residue.of(Fraction(x, N)) for x in a), t
    return tuple(Residue.of((x + s) / N) for x, s in zip(a, shift)), t


def grid_points(data: HGData, N: int, shift: Sequence[Fraction] | None = None
                ) -> Iterator[tuple[Character, int]]:
    """Canonical enumeration of the profile grid for ``data``'s flavor."""
    if data.p is None and shift is None:
        shift = generic_shift(data)
    for a, t in grid_indices(data, N):
        yield point_of(a, t, N, shift if data.p is None else None)


def grid_values(data: HGData, N: int, shift: Sequence[Fraction] | None = None,
                order: str = "lex") -> Iterator[tuple[tuple[tuple[int, ...], int], Fraction]]:
    """Profile values over the grid by integer arithmetic, labelled as in :func:`grid_indices`.

    Agrees pointwise with :func:`profile_value`; used wherever whole grids are scanned.
    """
    _check_N(data, N)
    rows = data.l
    r = data.r
    if data.p is None:
        shift = shift if shift is not None else generic_shift(data)
        D = _shift_scale(shift)
        L = N * D
        sh = [int(s * D) for s in shift]
        kap = [k.num * (L // k.den) for k in data.kappa]
        half = Fraction(r, 2)
        for a in _tuples(N, data.rank, order):
            chi = [x * D + s for x, s in zip(a, sh)]
            total = 0
            for row, k in zip(rows, kap):
                total += (sum(c * x for c, x in zip(row, chi)) + k) % L
            yield (a, 1), Fraction(total, L) - half
        return
    p = data.p
    ts = units(N)
    kap = [k.num * (N // k.den) for k in data.kappa]
    table: dict[int, Fraction] = {}

    def br(k: int) -> Fraction:
        v = table.get(k)
        if v is None:
            v = table[k] = balanced_bracket(Residue.of(Fraction(k, N)), p)
        return v

    for a in _tuples(N, data.rank, order):
        base = [sum(c * x for c, x in zip(row, a)) + k for row, k in zip(rows, kap)]
        for t in ts:
            yield (a, t), sum((br(t * b % N) for b in base), Fraction(0))


def profile_value(data: HGData, chi: Sequence[Residue], t: int = 1) -> Fraction:
    """Single profile entry: balanced brackets over F_q, centred brackets over C."""
    if data.p is None:
        return sum((frac_bracket(a) - Fraction(1, 2) for a in arguments(data, chi)),
                   Fraction(0))
    return sum((balanced_bracket(a, data.p) for a in arguments(data, chi, t)), Fraction(0))


def profile(data: HGData, N: int | None = None,
            shift: Sequence[Fraction] | None = None) -> ProfileGrid:
    """Tabulate :func:`profile_value` over the whole grid of level ``N``.

    Finite flavor: every chi in (1/N Z/Z)^rank and every t in (Z/NZ)^x.
    Complex flavor: every chi in (1/N Z/Z)^rank + shift/N with t = 1.
    """
    if N is None:
        N = _lcm_all(data.denominators())
    _check_N(data, N)
    grid = ProfileGrid(data.flavor, N, data.rank)
    if data.p is None and shift is None:
        shift = generic_shift(data)
    for (a, t), v in grid_values(data, N, shift):
        grid.points.append(point_of(a, t, N, shift if data.p is None else None))
        grid.values.append(v)
    return grid
