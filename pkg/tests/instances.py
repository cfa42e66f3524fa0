"""Random finite-field instances whose characters all live at a given level q."""

import random
from fractions import Fraction

from hgsheaf.charsum import FiniteField
from hgsheaf.cone import is_nonresonant
from hgsheaf.hgdata import HGData, validate
from hgsheaf.residues import Residue


def residue_at(rng: random.Random, level: int) -> Residue:
    return Residue.of(Fraction(rng.randrange(level), level))


def finite_instance(rng: random.Random, q: int, *, rank: int | None = None,
                    r: int | None = None, max_r: int = 3, coeff: int = 2,
                    nonresonant: bool = False):
    """Valid finite data with kappa and chi in (1/(q-1))Z/Z, plus the field."""
    field = FiniteField.of_order(q)
    level = q - 1
    while True:
        k = rank or rng.randint(1, max(1, max_r - 1))
        n = r or rng.randint(k + 1, max(k + 1, max_r))
        rows = tuple(tuple(rng.randint(-coeff, coeff) for _ in range(k)) for _ in range(n))
        kappa = tuple(residue_at(rng, level) for _ in range(n))
        try:
            data = HGData(k, rows, kappa, field.p)
        except ValueError:
            continue
        if not validate(data).valid:
            continue
        if nonresonant and not is_nonresonant(data):
            continue
        chi = tuple(residue_at(rng, level) for _ in range(k))
        return data, chi, field


def data_with_row_gcd(rng: random.Random, *, p: int | None, want: str,
                      max_den: int = 8, tries: int = 20_000):
    """Valid non-resonant data and an index whose row gcd admits the requested move.

    ``want`` is "multiplicative" (a gcd d > 1 prime to p; returns d) or
    "frobenius" (a gcd divisible by p; returns p).
    """
    from hgsheaf.hgdata import row_gcd
    from hgsheaf.sampling import random_data

    for _ in range(tries):
        data = random_data(rng, p=p, max_rank=2, max_r=5, coeff=max(4, p or 0), max_den=max_den)
        choices = []
        for i, row in enumerate(data.l):
            g = row_gcd(row)
            if want == "frobenius" and g and g % p == 0:
                choices.append((i, p))
            elif want == "multiplicative" and g > 1:
                d = g
                while p is not None and d % p == 0:
                    d //= p
                if d > 1:
                    choices.append((i, d))
        if choices:
            i, d = rng.choice(choices)
            return data, i, d
    raise RuntimeError(f"no sample admits a {want} move")
