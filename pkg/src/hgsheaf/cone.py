"""Facets of the cone spanned by the omega_i, and the non-resonance test.

Facet enumeration is brute force over (dim - 1)-subsets of the distinct
generators: each subset of full rank dim - 1 determines a hyperplane, which
is kept if every generator lies weakly on one side of it. Fine at the sizes
this package targets (a dozen generators, dimension up to ~8).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from . import lattice
from .hgdata import HGData, alpha, presentation
from .residues import Residue


class ConeError(ValueError):
    pass


@dataclass(frozen=True)
class ConeSpec:
    dim: int
    generators: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, generators: Sequence[Sequence[int]], dim: int | None = None) -> ConeSpec:
        gens = tuple(tuple(int(x) for x in g) for g in generators)
        if dim is None:
            if not gens:
                raise ConeError("dimension is required for an empty generator list")
            dim = len(gens[0])
        if any(len(g) != dim for g in gens):
            raise ConeError(f"generators must live in Z^{dim}")
        return cls(dim, gens)


@dataclass(frozen=True, order=True)
class Facet:
    """A primitive inward-pointing linear form ``h`` with ``h >= 0`` on the cone."""

    h: tuple[int, ...]

    def __call__(self, v: Sequence) -> object:
        return sum(a * x for a, x in zip(self.h, v))


def facets(cone: ConeSpec) -> list[Facet]:
    dim = cone.dim
    gens = sorted(set(cone.generators))
    if not gens or lattice.rank(gens) < dim:
        raise ConeError("generators do not span a full-rank sublattice")
    found: set[tuple[int, ...]] = set()
    for subset in combinations(gens, dim - 1):
        if dim > 1 and lattice.rank(list(subset)) != dim - 1:
            continue
        if dim == 1:
            ker = [[1]]
        else:
            ker = lattice.nullspace([list(s) for s in subset])
        if len(ker) != 1:
            continue
        h = lattice.primitive_vector(ker[0])
        vals = [sum(a * x for a, x in zip(h, g)) for g in gens]
        if all(v >= 0 for v in vals):
            found.add(tuple(h))
        elif all(v <= 0 for v in vals):
            found.add(tuple(-a for a in h))
    return [Facet(h) for h in sorted(found)]


def facet_value(facet: Facet, point: Sequence[Residue]) -> Residue:
    """``h(alpha)`` in Q/Z for a point of L (x) Q/Z."""
    return Residue.of(sum(a * x.value for a, x in zip(facet.h, point)))


def cone_of(data: HGData) -> ConeSpec:
    cok = presentation(data)
    return ConeSpec.of(cok.omega, cok.basis_rank)


def resonant_facets(data: HGData) -> list[Facet]:
    """Facets ``h`` with ``h(alpha)`` integral."""
    cok = presentation(data)
    a = alpha(data, cok)
    cone = ConeSpec.of(cok.omega, cok.basis_rank)
    return [f for f in facets(cone) if facet_value(f, a).is_zero()]


def is_nonresonant(data: HGData) -> bool:
    return not resonant_facets(data)
