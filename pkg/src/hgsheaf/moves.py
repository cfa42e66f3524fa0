"""Equivalence moves on hypergeometric data and the normalization pipeline.

Three moves relate data whose sheaves agree up to a correspondence:

* multiplicative: split index ``i`` into ``d`` copies of ``l_i / d`` carrying
  the ``d`` preimages of ``kappa_i`` under multiplication by ``d``;
* reduce: drop every index whose form is zero;
* Frobenius (finite flavor): replace ``(l_i, kappa_i)`` by ``(l_i / p, kappa_i / p)``.

:func:`normalize` applies them in a fixed order and records what it did in a
:class:`MoveTranscript` that can be replayed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Union

from .cone import is_nonresonant
from .hgdata import HGData, row_gcd
from .residues import Residue, div_p, preimages


class MoveError(ValueError):
    pass


# ------------------------------------------------------------------ moves


def _check_index(data: HGData, i: int) -> None:
    if not 0 <= i < data.r:
        raise MoveError(f"index {i} out of range for r={data.r}")


def move_multiplicative(data: HGData, i: int, d: int) -> HGData:
    """Replace index ``i`` by ``d`` indices ``(l_i/d, (kappa_i + j)/d)``, j = 0..d-1."""
    _check_index(data, i)
    row = data.l[i]
    g = row_gcd(row)
    if g == 0:
        raise MoveError(f"index {i}: form is zero; use move_reduce")
    if d < 1 or g % d:
        raise MoveError(f"index {i}: d={d} does not divide gcd {g} of the form")
    if data.p is not None and d % data.p == 0:
        raise MoveError(f"d={d} is divisible by p={data.p}; use move_frobenius")
    if d == 1:
        return data
    new_row = tuple(x // d for x in row)
    pairs = data.pairs()
    split = [(new_row, k) for k in preimages(data.kappa[i], d)]
    return data.with_pairs(pairs[:i] + split + pairs[i + 1:])


def move_reduce(data: HGData) -> tuple[HGData, list[Residue]]:
    """Drop all zero forms; returns the reduced data and the dropped characters."""
    keep, dropped = [], []
    for row, k in data.pairs():
        if any(row):
            keep.append((row, k))
        else:
            dropped.append(k)
    if not dropped:
        return data, []
    if len(keep) <= data.rank:
        raise MoveError("reduction collapses data")
    return data.with_pairs(keep), dropped


def move_frobenius(data: HGData, i: int) -> HGData:
    """Divide form ``i`` by p and its character by p (inside Z_(p)/Z).

    Non-resonance is kept, but separatedness need not be: the image of the
    forms grows, e.g. ``((3,), (-1,))`` at p=3 becomes ``((1,), (-1,))``.
    """
    if data.p is None:
        raise MoveError("Frobenius move needs finite-flavor data")
    _check_index(data, i)
    p = data.p
    row = data.l[i]
    g = row_gcd(row)
    if g == 0:
        raise MoveError(f"index {i}: form is zero; use move_reduce")
    if g % p:
        raise MoveError(f"index {i}: p={p} does not divide the form {row}")
    pairs = data.pairs()
    pairs[i] = (tuple(x // p for x in row), div_p(data.kappa[i], p))
    return data.with_pairs(pairs)


# ------------------------------------------------------------- transcript


@dataclass(frozen=True)
class Multiplicative:
    i: int
    d: int

    def to_dict(self) -> dict[str, Any]:
        return {"move": "multiplicative", "i": self.i, "d": self.d}


@dataclass(frozen=True)
class Reduce:
    dropped: tuple[Residue, ...]

    def to_dict(self) -> dict[str, Any]:
        return {"move": "reduce", "dropped": [str(k) for k in self.dropped]}


@dataclass(frozen=True)
class Frobenius:
    i: int

    def to_dict(self) -> dict[str, Any]:
        return {"move": "frobenius", "i": self.i}


Move = Union[Multiplicative, Reduce, Frobenius]


def _move_from_dict(obj: dict[str, Any]) -> Move:
    kind = obj.get("move")
    if kind == "multiplicative":
        return Multiplicative(int(obj["i"]), int(obj["d"]))
    if kind == "reduce":
        return Reduce(tuple(Residue.parse(k) for k in obj["dropped"]))
    if kind == "frobenius":
        return Frobenius(int(obj["i"]))
    raise MoveError(f"unknown move record {obj!r}")


@dataclass
class MoveTranscript:
    """Ordered move records plus the constant characters they set aside.

    ``constants`` collects the ``j/d`` (j = 1..d-1) attached to each
    multiplicative move and every character dropped by reduction.
    """

    moves: list[Move] = field(default_factory=list)
    constants: list[Residue] = field(default_factory=list)
    sort: bool = True

    def record(self, move: Move) -> None:
        self.moves.append(move)
        if isinstance(move, Multiplicative):
            self.constants.extend(Residue.of(Fraction(j, move.d)) for j in range(1, move.d))
        elif isinstance(move, Reduce):
            self.constants.extend(move.dropped)

    def replay(self, data: HGData) -> HGData:
        out = data
        for m in self.moves:
            if isinstance(m, Multiplicative):
                out = move_multiplicative(out, m.i, m.d)
            elif isinstance(m, Frobenius):
                out = move_frobenius(out, m.i)
            else:
                out, dropped = move_reduce(out)
                if tuple(dropped) != m.dropped:
                    raise MoveError("replayed reduction dropped different characters")
        return out.canonical() if self.sort else out

    def to_list(self) -> list[dict[str, Any]]:
        return [m.to_dict() for m in self.moves]

    def to_dict(self) -> dict[str, Any]:
        return {"moves": self.to_list(), "constants": [str(k) for k in self.constants]}

    def to_json(self) -> str:
        return json.dumps(self.to_list())

    @classmethod
    def from_list(cls, records: list[dict[str, Any]]) -> MoveTranscript:
        t = cls()
        for obj in records:
            t.record(_move_from_dict(obj))
        return t

    @classmethod
    def from_json(cls, text: str) -> MoveTranscript:
        return cls.from_list(json.loads(text))


def normalize(data: HGData, check: bool = True) -> tuple[HGData, MoveTranscript]:
    """Primitive reduced representative of ``data``'s equivalence class.

    Order: Frobenius moves (finite flavor), one multiplicative move per index
    with the remaining gcd, reduction, canonical sort. With ``check`` the input
    and output are tested for non-resonance.
    """
    if check and not is_nonresonant(data):
        raise MoveError("normalize needs non-resonant data")
    transcript = MoveTranscript()
    out = data
    if data.p is not None:
        p = data.p
        for i in range(out.r):
            while (g := row_gcd(out.l[i])) and g % p == 0:
                out = move_frobenius(out, i)
                transcript.record(Frobenius(i))
    # right to left so earlier indices are not shifted by the splits
    for i in reversed(range(out.r)):
        g = row_gcd(out.l[i])
        if g > 1:
            out = move_multiplicative(out, i, g)
            transcript.record(Multiplicative(i, g))
    out, dropped = move_reduce(out)
    if dropped:
        transcript.record(Reduce(tuple(dropped)))
    out = out.canonical()
    if check and not is_nonresonant(out):
        raise MoveError("normal form is resonant")
    return out, transcript


# ------------------------------------------------- power sums as symmetric polys

Poly = dict[tuple[int, ...], int]


def _padd(a: Poly, b: Poly, scale: int = 1) -> Poly:
    out = dict(a)
    for mono, c in b.items():
        v = out.get(mono, 0) + scale * c
        if v:
            out[mono] = v
        else:
            out.pop(mono, None)
    return out


def _pmul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            mono = tuple(x + y for x, y in zip(ma, mb))
            v = out.get(mono, 0) + ca * cb
            if v:
                out[mono] = v
            else:
                out.pop(mono, None)
    return out


def _gen(j: int, n: int) -> Poly:
    e = [0] * n
    e[j] = 1
    return {tuple(e): 1}


def power_sum_symmetric(d: int) -> Poly:
    """``F`` with ``x_1^d + ... + x_d^d = F(s_1, ..., s_d)`` for the elementary s_k.

    Returned as ``{exponent tuple over (s_1..s_d): coefficient}`` via Newton's
    identities ``P_k = sum_{i<k} (-1)^(i-1) s_i P_{k-i} + (-1)^(k-1) k s_k``.
    """
    if d < 1:
        raise ValueError("d must be positive")
    power: list[Poly] = [{}]
    for k in range(1, d + 1):
        acc: Poly = {}
        for i in range(1, k):
            acc = _padd(acc, _pmul(_gen(i - 1, d), power[k - i]), (-1) ** (i - 1))
        acc = _padd(acc, _gen(k - 1, d), (-1) ** (k - 1) * k)
        power.append(acc)
    return power[d]


def poly_eval(poly: Poly, values) -> Any:
    total = 0
    for mono, c in poly.items():
        term = c
        for v, e in zip(values, mono):
            if e:
                term = term * v**e
        total = total + term
    return total


def poly_set_last_zero(poly: Poly) -> Poly:
    """``F(s_1, ..., s_{d-1}, 0)``."""
    return {m: c for m, c in poly.items() if m[-1] == 0}


def elementary_symmetric(values) -> list:
    """``[e_1, ..., e_n]`` of the given values."""
    coeffs = [1]
    for v in values:
        nxt = coeffs + [0]
        for k in range(len(coeffs), 0, -1):
            nxt[k] = nxt[k] + coeffs[k - 1] * v
        coeffs = nxt
    return coeffs[1:]
