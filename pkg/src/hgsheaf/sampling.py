"""Seeded random generators of hypergeometric data for property suites."""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd

from .cone import is_nonresonant
from .hgdata import HGData, divisorial_pairs, is_primitive_data, validate
from .residues import Residue

PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


class SamplingError(RuntimeError):
    pass


def random_kappa(rng: random.Random, max_den: int, p: int | None = None,
                 nonzero: bool = False) -> Residue:
    while True:
        den = rng.randint(1, max_den)
        if p is not None and den % p == 0:
            continue
        k = Residue.of(Fraction(rng.randrange(den), den))
        if nonzero and k.is_zero():
            continue
        return k


def random_data(
    rng: random.Random,
    *,
    p: int | None = None,
    rank: int | None = None,
    r: int | None = None,
    max_den: int = 12,
    coeff: int = 2,
    primitive: bool = False,
    reduced: bool = False,
    nondivisorial: bool = False,
    nonresonant: bool = True,
    max_rank: int = 3,
    max_r: int = 6,
    tries: int = 10_000,
) -> HGData:
    """Rejection-sample valid data with the requested extra properties.

    Complex data get a last row equal to minus the sum of the others, so the
    forms sum to zero.
    """
    for _ in range(tries):
        k = rank or rng.randint(1, max_rank)
        n = r or rng.randint(k + 1, max(k + 1, max_r))
        rows = [[rng.randint(-coeff, coeff) for _ in range(k)] for _ in range(n)]
        if p is None:
            rows[-1] = [-sum(col) for col in zip(*rows[:-1])]
        kappa = [random_kappa(rng, max_den, p) for _ in range(n)]
        try:
            d = HGData(k, tuple(map(tuple, rows)), tuple(kappa), p)
        except ValueError:
            continue
        if reduced and any(not any(row) for row in d.l):
            continue
        if primitive and not is_primitive_data(d):
            continue
        if not validate(d).valid:
            continue
        if nondivisorial and divisorial_pairs(d):
            continue
        if nonresonant and not is_nonresonant(d):
            continue
        return d
    raise SamplingError("no sample satisfied the constraints")


def permute(data: HGData, rng: random.Random) -> HGData:
    order = list(range(data.r))
    rng.shuffle(order)
    return data.permuted(order)


def fresh_prime(data: HGData, avoid: tuple[int, ...] = ()) -> int:
    """Least prime dividing no character denominator (nor p, nor ``avoid``)."""
    for q in PRIMES:
        if q == data.p or q in avoid:
            continue
        if all(gcd(q, k.den) == 1 for k in data.kappa):
            return q
    raise SamplingError("ran out of primes")


def perturb(data: HGData, rng: random.Random, tries: int = 50) -> HGData:
    """Shift one character by ``1/q`` for a fresh prime q, keeping the data non-resonant."""
    used: tuple[int, ...] = ()
    for _ in range(tries):
        q = fresh_prime(data, used)
        i = rng.randrange(data.r)
        kappa = list(data.kappa)
        kappa[i] = kappa[i] + Fraction(1, q)
        out = HGData(data.rank, data.l, tuple(kappa), data.p)
        if is_nonresonant(out):
            return out
        used += (q,)
    raise SamplingError("could not perturb without resonance")
