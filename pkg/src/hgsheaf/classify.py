"""Deciding equivalence of hypergeometric data, and rank-1 profile inversion.

Two non-resonant data are equivalent exactly when their normal forms agree as
multisets. An inequivalent verdict is backed by a witness: two grid points
at which the bracket profiles of the normal forms differ by different
amounts, so the profiles cannot agree up to a constant.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import islice
from math import gcd
from typing import Any, Iterable, Iterator, Mapping, Sequence

from .appendix import (  # noqa: F401  re-exported
    AuditReport,
    SupersingularSplit,
    gamma_functional,
    l_value,
    phi_rank_audit,
    sigma_vector,
    supersingular_divisors,
    theta_functional,
)
from .hgdata import Character, HGData
from .mellin import _lcm_all, generic_shift, grid_values, point_of
from .moves import MoveTranscript, normalize
from .residues import Residue, frac_bracket


class ClassifyError(ValueError):
    pass


def _check_pair(a: HGData, b: HGData) -> None:
    if a.rank != b.rank:
        raise ClassifyError(f"rank mismatch: {a.rank} vs {b.rank}")
    if a.p != b.p:
        raise ClassifyError(f"flavor mismatch: {a.flavor}/{a.p} vs {b.flavor}/{b.p}")


def common_level(a: HGData, b: HGData) -> int:
    return _lcm_all(a.denominators() + b.denominators())


GridPoint = tuple[Character, int]


def _differences(a: HGData, b: HGData, N: int, shift, order: str = "lex"
                 ) -> Iterator[tuple[tuple[tuple[int, ...], int], Fraction, Fraction]]:
    for (label, va), (_, vb) in zip(grid_values(a, N, shift, order),
                                    grid_values(b, N, shift, order)):
        yield label, va, vb


def profile_equal(a: HGData, b: HGData, N: int | None = None) -> tuple[bool, Fraction | None]:
    """Do the profiles of ``a`` and ``b`` differ by one constant on the whole grid?

    Exhaustive over the level-N grid (default: lcm of all denominators).
    Complex data are sampled off every jump hyperplane of either datum.
    """
    _check_pair(a, b)
    N = N or common_level(a, b)
    shift = generic_shift(a, b) if a.p is None else None
    offset = None
    for _, va, vb in _differences(a, b, N, shift):
        d = va - vb
        if offset is None:
            offset = d
        elif d != offset:
            return False, None
    return True, offset


@dataclass
class Witness:
    level: int
    reference: GridPoint
    reference_values: tuple[Fraction, Fraction]
    point: GridPoint
    values: tuple[Fraction, Fraction]

    def to_dict(self) -> dict[str, Any]:
        def pt(p):
            return {"chi": [str(c) for c in p[0]], "t": p[1]}
        return {
            "level": self.level,
            "reference": pt(self.reference),
            "reference_values": [str(v) for v in self.reference_values],
            "point": pt(self.point),
            "values": [str(v) for v in self.values],
            "difference_change": str((self.values[0] - self.values[1])
                                     - (self.reference_values[0] - self.reference_values[1])),
        }


def find_witness(a: HGData, b: HGData, budget: int = 200_000, max_refine: int = 6
                 ) -> Witness | None:
    """First grid point where ``a - b`` departs from its value at the origin.

    Points are visited in "spread" order: cube shells of coordinates
    scrambled by a golden-ratio unit, so early points cover the whole torus
    rather than one line or one corner. Levels N, 2N, ... (multiples prime to p) are tried in turn;
    the whole search visits at most ``budget`` points. None if nothing is found.
    """
    _check_pair(a, b)
    N0 = common_level(a, b)
    shift = generic_shift(a, b) if a.p is None else None
    left = budget
    m = 0
    tried = 0
    while tried < max_refine and left > 0:
        m += 1
        if a.p is not None and gcd(m, a.p) != 1:
            continue
        tried += 1
        N = N0 * m
        ref = None
        for point, va, vb in islice(_differences(a, b, N, shift, "spread"), left):
            left -= 1
            if ref is None:
                ref = (point, (va, vb))
            elif va - vb != ref[1][0] - ref[1][1]:
                return Witness(N, point_of(*ref[0], N, shift), ref[1],
                               point_of(*point, N, shift), (va, vb))
    return None


def _multiset(data: HGData) -> Counter:
    return Counter(data.pairs())


@dataclass
class Verdict:
    equivalent: bool
    normal_forms: tuple[HGData, HGData]
    transcripts: tuple[MoveTranscript, MoveTranscript]
    witness: Witness | None = None
    checked_points: int = 0
    check_exhaustive: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def constant_difference(self) -> tuple[list[Residue], list[Residue]]:
        """Constant characters set aside on one side but not the other."""
        ca = Counter(self.transcripts[0].constants)
        cb = Counter(self.transcripts[1].constants)
        return sorted((ca - cb).elements()), sorted((cb - ca).elements())

    def to_dict(self) -> dict[str, Any]:
        only_a, only_b = self.constant_difference
        return {
            "verdict": "equivalent" if self.equivalent else "inequivalent",
            "normal_forms": [d.to_dict() for d in self.normal_forms],
            "transcripts": [t.to_dict() for t in self.transcripts],
            "constants_only_first": [str(k) for k in only_a],
            "constants_only_second": [str(k) for k in only_b],
            "witness": self.witness.to_dict() if self.witness else None,
            "checked_points": self.checked_points,
            "check_exhaustive": self.check_exhaustive,
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def decide_isomorphism(a: HGData, b: HGData, check_budget: int = 5_000,
                       witness_budget: int = 200_000) -> Verdict:
    """Normalize both data and compare; back the answer with profile evidence."""
    _check_pair(a, b)
    na, ta = normalize(a)
    nb, tb = normalize(b)
    if _multiset(na) == _multiset(nb):
        v = Verdict(True, (na, nb), (ta, tb))
        N = common_level(na, nb)
        shift = generic_shift(na, nb) if na.p is None else None
        offset = None
        for _, va, vb in islice(_differences(na, nb, N, shift), check_budget):
            v.checked_points += 1
            if offset is None:
                offset = va - vb
            elif va - vb != offset:
                raise ClassifyError("equal normal forms with non-constant profile difference")
        total = N ** na.rank * (len([t for t in range(1, N + 1) if gcd(t, N) == 1]) if na.p else 1)
        v.check_exhaustive = v.checked_points >= total
        return v
    v = Verdict(False, (na, nb), (ta, tb))
    v.witness = find_witness(na, nb, budget=witness_budget)
    if v.witness is None:
        v.notes.append("normal forms differ but no separating grid point was found within budget")
    return v


# ----------------------------------------------------- rank-1 inversion

Term = tuple[int, Residue, int]  # (sign, kappa, multiplicity)


def half_grid(N: int) -> list[Residue]:
    return [Residue.of(Fraction(k, 2 * N)) for k in range(2 * N)]


def synthesize_rank1(terms: Iterable[Term], c: Fraction | int, N: int) -> dict[Residue, Fraction]:
    """``f(x) = sum m (<x + kappa> - 1/2) over (+) terms - sum m (<x - kappa> - 1/2) over (-) terms + c``.

    Evaluated on (1/2N)Z/Z. A ``(-, kappa)`` term is the profile of the form
    ``-1`` with character kappa, written so that f is right-continuous.
    """
    terms = list(terms)
    for s, k, m in terms:
        if s not in (1, -1) or m < 1:
            raise ClassifyError(f"bad term {(s, k, m)}")
        if N % Residue.of(k).den:
            raise ClassifyError(f"denominator of {k} does not divide N={N}")
    out = {}
    for x in half_grid(N):
        v = Fraction(c)
        for s, k, m in terms:
            v += s * m * (frac_bracket(x + Residue.of(k) * s) - Fraction(1, 2))
        out[x] = v
    return out


def rank1_terms(data: HGData) -> list[Term]:
    """Signed terms of a rank-1 datum with forms +-1."""
    if data.rank != 1 or any(abs(row[0]) != 1 for row in data.l):
        raise ClassifyError("need rank-1 data with forms +-1")
    c = Counter((row[0], k) for row, k in data.pairs())
    return sorted((s, k, m) for (s, k), m in c.items())


def recover_rank1(values: Mapping[Residue, Fraction], N: int) -> tuple[list[Term], Fraction]:
    """Invert :func:`synthesize_rank1`: read each term off the jumps of f.

    At ``x = b/N`` the function drops by ``m`` for a (+) term with kappa = -b/N
    and rises by ``m`` for a (-) term with kappa = b/N; the slope comes from the
    half-step samples.
    """
    f = {Residue.of(x): Fraction(v) for x, v in values.items()}
    grid = half_grid(N)
    missing = [x for x in grid if x not in f]
    if missing:
        raise ClassifyError(f"missing sample at {missing[0]}")
    h = Fraction(1, 2 * N)
    at = [f[Residue.of(Fraction(b, N))] for b in range(N)]
    mid = [f[Residue.of(Fraction(2 * b + 1, 2 * N))] for b in range(N)]
    slopes = {(mid[b] - at[b]) / h for b in range(N)}
    if len(slopes) != 1:
        raise ClassifyError("input is not a bracket profile: inconsistent slopes")
    S = slopes.pop()
    net: Counter = Counter()
    for b in range(N):
        left = mid[b - 1] + S * h
        drop = left - at[b]
        if drop.denominator != 1:
            raise ClassifyError("input is not a bracket profile: non-integral jump")
        if drop:
            net[b] = int(drop)
    if sum(net.values()) != S:
        raise ClassifyError("input is not a bracket profile: slope does not match jumps")
    terms: list[Term] = []
    for b, m in net.items():
        if m > 0:
            terms.append((1, Residue.of(Fraction(-b, N)), m))
        else:
            terms.append((-1, Residue.of(Fraction(b, N)), -m))
    terms.sort()
    base = synthesize_rank1(terms, 0, N)
    consts = {f[x] - base[x] for x in grid}
    if len(consts) != 1:
        raise ClassifyError("input is not a bracket profile: residual is not constant")
    return terms, consts.pop()


def recover_rank1_data(values: Mapping[Residue, Fraction], N: int,
                       p: int | None = None) -> tuple[HGData | None, Fraction]:
    """Rebuild rank-1 data from a recovered term list (None if it is empty)."""
    terms, c = recover_rank1(values, N)
    pairs: list[tuple[Sequence[int], Residue]] = []
    for s, k, m in terms:
        pairs += [((s,), k)] * m
    if len(pairs) < 2:
        return None, c
    return HGData(1, tuple(r for r, _ in pairs), tuple(k for _, k in pairs), p), c
