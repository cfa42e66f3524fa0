"""Hypergeometric data ``(R, {l_i}, {kappa_i})`` and its validity predicates.

``R`` is represented by its rank; the forms ``l_i`` are the rows of an integer
matrix ``l`` (r rows, rank R columns) and ``kappa`` holds one residue per row.
Complex data (``p is None``) require the rows to sum to zero; finite-field
data carry the characteristic ``p`` and require kappa denominators prime to p.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Any, Iterable, Sequence

from . import lattice
from .lattice import CokernelPresentation, IntMatrix
from .residues import Residue

Character = tuple[Residue, ...]


class DataError(ValueError):
    """Structurally malformed hypergeometric data."""


@dataclass(frozen=True)
class HGData:
    rank: int
    l: tuple[tuple[int, ...], ...]
    kappa: tuple[Residue, ...]
    p: int | None = None

    def __post_init__(self):
        l = tuple(tuple(int(x) for x in row) for row in self.l)
        kappa = tuple(Residue.of(k) for k in self.kappa)
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "kappa", kappa)
        if self.rank < 1:
            raise DataError(f"rank of R must be positive, got {self.rank}")
        if len(l) != len(kappa):
            raise DataError(f"{len(l)} forms but {len(kappa)} characters")
        if any(len(row) != self.rank for row in l):
            raise DataError(f"every form needs {self.rank} coefficients")
        if len(l) <= self.rank:
            raise DataError(f"need r > rank R, got r={len(l)}, rank={self.rank}")
        if self.p is not None and self.p < 2:
            raise DataError(f"invalid characteristic {self.p}")

    @property
    def r(self) -> int:
        return len(self.l)

    @property
    def flavor(self) -> str:
        return "complex" if self.p is None else "finite"

    @property
    def is_finite(self) -> bool:
        return self.p is not None

    def matrix(self) -> IntMatrix:
        return [list(row) for row in self.l]

    def pairs(self) -> list[tuple[tuple[int, ...], Residue]]:
        return list(zip(self.l, self.kappa))

    def with_pairs(self, pairs: Iterable[tuple[Sequence[int], Residue]]) -> HGData:
        pairs = list(pairs)
        return HGData(self.rank, tuple(tuple(a) for a, _ in pairs),
                      tuple(k for _, k in pairs), self.p)

    def canonical(self) -> HGData:
        """Same data with the pairs sorted (rows lexicographically, then kappa)."""
        return self.with_pairs(sorted(self.pairs(), key=_pair_key))

    def permuted(self, order: Sequence[int]) -> HGData:
        ps = self.pairs()
        return self.with_pairs(ps[i] for i in order)

    def denominators(self) -> list[int]:
        return [k.den for k in self.kappa]

    # ------------------------------------------------------------ JSON

    def to_dict(self) -> dict[str, Any]:
        flavor: Any = "complex" if self.p is None else {"finite": {"p": self.p}}
        return {
            "flavor": flavor,
            "rank": self.rank,
            "l": [list(row) for row in self.l],
            "kappa": [str(k) for k in self.kappa],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, obj: dict[str, Any]) -> HGData:
        try:
            flavor = obj["flavor"]
            if flavor == "complex":
                p = None
            elif isinstance(flavor, dict) and "finite" in flavor:
                p = int(flavor["finite"]["p"])
            else:
                raise DataError(f"unknown flavor {flavor!r}")
            return cls(int(obj["rank"]), tuple(tuple(r) for r in obj["l"]),
                       tuple(Residue.parse(str(k)) for k in obj["kappa"]), p)
        except (KeyError, TypeError) as exc:
            raise DataError(f"malformed data: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> HGData:
        return cls.from_dict(json.loads(text))


def _pair_key(pair):
    row, k = pair
    return (row, k.value)


def complex_data(l, kappa) -> HGData:
    l = tuple(tuple(row) for row in l)
    return HGData(len(l[0]), l, tuple(Residue.of(k) for k in kappa))


def finite_data(l, kappa, p: int) -> HGData:
    l = tuple(tuple(row) for row in l)
    return HGData(len(l[0]), l, tuple(Residue.of(k) for k in kappa), p)


def equal_data(a: HGData, b: HGData, up_to_basis: bool = False) -> bool:
    """Equality up to permutation of the pairs (and optionally a GL(R) change)."""
    if a.rank != b.rank or a.r != b.r or a.p != b.p:
        return False
    if not up_to_basis:
        return a.canonical() == b.canonical()
    return _equal_up_to_gl(a, b)


def _equal_up_to_gl(a: HGData, b: HGData) -> bool:
    # pick independent rows of a, try every image among b's rows with matching
    # kappa, solve for the basis change and test it
    k = a.rank
    rows_a = a.matrix()
    basis_idx = None
    for idx in combinations(range(a.r), k):
        if lattice.det([rows_a[i] for i in idx]) != 0:
            basis_idx = idx
            break
    if basis_idx is None:
        return False
    target = sorted(b.pairs(), key=_pair_key)
    a_inv = _rational_inverse([rows_a[i] for i in basis_idx])

    def search(pos, chosen):
        if pos == k:
            img = [list(b.l[j]) for j in chosen]
            # rows_a[basis] @ g = img  =>  g = A^-1 img
            g = [[sum(a_inv[i][t] * img[t][j] for t in range(k)) for j in range(k)]
                 for i in range(k)]
            if any(x.denominator != 1 for row in g for x in row):
                return False
            gi = [[int(x) for x in row] for row in g]
            if abs(lattice.det(gi)) != 1:
                return False
            moved = a.with_pairs((tuple(lattice.matvec(lattice.transpose(gi), row)), kap)
                                 for row, kap in a.pairs())
            return sorted(moved.pairs(), key=_pair_key) == target
        i = basis_idx[pos]
        for j in range(b.r):
            if j not in chosen and b.kappa[j] == a.kappa[i]:
                if search(pos + 1, chosen + [j]):
                    return True
        return False

    return search(0, [])


def _rational_inverse(m: IntMatrix) -> list[list[Fraction]]:
    n = len(m)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(m)]
    rref, _ = lattice._row_reduce(aug)
    return [row[n:] for row in rref]


# ---------------------------------------------------------------- predicates


@dataclass
class ValidationReport:
    injective_primitive: bool
    separated: bool
    sum_zero: bool | None = None
    p_denominators_ok: bool | None = None
    failures: list[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        flags = [self.injective_primitive, self.separated, self.sum_zero, self.p_denominators_ok]
        return all(f for f in flags if f is not None)

    def to_dict(self) -> dict[str, Any]:
        return {
            "valid": self.valid,
            "injective_primitive": self.injective_primitive,
            "separated": self.separated,
            "sum_zero": self.sum_zero,
            "p_denominators_ok": self.p_denominators_ok,
            "failures": list(self.failures),
        }


def is_separated(l: IntMatrix) -> bool:
    """No ``e_i - e_j`` (i != j) lies in the column span of ``l``."""
    r = len(l)
    for i, j in combinations(range(r), 2):
        v = [0] * r
        v[i], v[j] = 1, -1
        if lattice.in_column_span(l, v):
            return False
    return True


def validate(data: HGData) -> ValidationReport:
    l = data.matrix()
    report = ValidationReport(
        injective_primitive=lattice.is_primitive_embedding(l),
        separated=is_separated(l),
    )
    if data.p is None:
        report.sum_zero = all(sum(col) == 0 for col in zip(*l))
    else:
        report.p_denominators_ok = all(k.den % data.p for k in data.kappa)
    for name in ("injective_primitive", "separated", "sum_zero", "p_denominators_ok"):
        if getattr(report, name) is False:
            report.failures.append(name)
    return report


def is_valid(data: HGData) -> bool:
    return validate(data).valid


def presentation(data: HGData) -> CokernelPresentation:
    return lattice.cokernel(data.matrix())


def alpha(data: HGData, cok: CokernelPresentation | None = None) -> tuple[Residue, ...]:
    """``sum_i kappa_i * omega_i`` in L (x) Q/Z, in the basis of ``cok``."""
    cok = cok or presentation(data)
    out = []
    for c in range(cok.basis_rank):
        out.append(Residue.of(sum(k.value * w[c] for k, w in zip(data.kappa, cok.omega))))
    return tuple(out)


def row_gcd(row: Sequence[int]) -> int:
    g = 0
    for x in row:
        g = gcd(g, x)
    return g


def is_primitive_data(data: HGData) -> bool:
    """Every ``l_i`` is surjective onto Z."""
    return all(row_gcd(row) == 1 for row in data.l)


def divisorial_pairs(data: HGData) -> list[tuple[int, int]]:
    """Index pairs (0-based) with ``l_i + l_j = 0`` and ``kappa_i + kappa_j = 0``."""
    out = []
    for i, j in combinations(range(data.r), 2):
        if all(a + b == 0 for a, b in zip(data.l[i], data.l[j])) \
                and (data.kappa[i] + data.kappa[j]).is_zero():
            out.append((i, j))
    return out


def apply_form(row: Sequence[int], chi: Sequence[Residue]) -> Residue:
    """``l_i(chi)`` for a character given by residue coordinates."""
    return Residue.of(sum(a * c.value for a, c in zip(row, chi)))


def character(*parts) -> Character:
    return tuple(Residue.of(x) for x in parts)
