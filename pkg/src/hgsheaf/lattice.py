"""Integer matrix normal forms, cokernels and adapted bases.

Matrices are plain row-major ``list[list[int]]`` with Python integers, so
everything here is exact. The Smith and Hermite routines return their
transforms and check them by re-multiplication before returning.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Sequence

IntMatrix = list[list[int]]


class LatticeError(ValueError):
    """Raised when an input violates a lattice-level precondition."""


def as_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    m = [[int(v) for v in row] for row in rows]
    if m and len({len(row) for row in m}) != 1:
        raise LatticeError("ragged matrix")
    return m


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(a: IntMatrix) -> IntMatrix:
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: IntMatrix, v: Sequence[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def det(a: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [row[:] for row in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def is_unimodular(a: IntMatrix) -> bool:
    return len(a) == len(a[0]) and abs(det(a)) == 1


def _row_reduce(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (rref, pivot columns)."""
    m = [row[:] for row in rows]
    pivots: list[int] = []
    ncols = len(m[0]) if m else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(a: Sequence[Sequence]) -> int:
    """Exact rank over Q of an integer or rational matrix."""
    if not a or not a[0]:
        return 0
    _, piv = _row_reduce([[Fraction(x) for x in row] for row in a])
    return len(piv)


def nullspace(a: Sequence[Sequence]) -> list[list[Fraction]]:
    """A basis of {v : a v = 0} over Q (right kernel)."""
    ncols = len(a[0])
    if not a:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    rref, piv = _row_reduce([[Fraction(x) for x in row] for row in a])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, c in enumerate(piv):
            v[c] = -rref[i][f]
        basis.append(v)
    return basis


def left_nullspace(a: Sequence[Sequence]) -> list[list[Fraction]]:
    """A basis of {w : w a = 0} over Q."""
    return nullspace(transpose([list(r) for r in a]))


def primitive_vector(v: Sequence) -> list[int]:
    """Clear denominators and divide by the content; the zero vector stays zero."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return ints if g == 0 else [x // g for x in ints]


# ---------------------------------------------------------------- Smith form


def smith_normal_form(a: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``U @ a @ V == D`` and U, V unimodular.

    ``D`` is diagonal with nonnegative entries d_1 | d_2 | ... (zeros last).
    """
    a = as_matrix(a)
    m = len(a)
    n = len(a[0]) if m else 0
    d = [row[:] for row in a]
    u = identity(m)
    v = identity(n)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):
        # row_dst += k * row_src
        d[dst] = [x + k * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, k):
        for row in d:
            row[dst] += k * row[src]
        for row in v:
            row[dst] += k * row[src]

    for t in range(min(m, n)):
        while True:
            nz = [
                (abs(d[i][j]), i, j)
                for i in range(t, m)
                for j in range(t, n)
                if d[i][j] != 0
            ]
            if not nz:
                break
            _, pi, pj = min(nz)
            swap_rows(t, pi)
            swap_cols(t, pj)
            done = True
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(i, t, -(d[i][t] // d[t][t]))
                    if d[i][t]:
                        done = False
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(j, t, -(d[t][j] // d[t][t]))
                    if d[t][j]:
                        done = False
            if not done:
                continue
            bad = next(
                (
                    i
                    for i in range(t + 1, m)
                    for j in range(t + 1, n)
                    if d[i][j] % d[t][t]
                ),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if t < m and t < n and d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]

    if matmul(matmul(u, a), v) != d:
        raise AssertionError("Smith decomposition failed re-multiplication check")
    return u, d, v


def invariant_factors(a: IntMatrix) -> list[int]:
    """Nonzero diagonal entries of the Smith form."""
    _, d, _ = smith_normal_form(a)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i]]


# -------------------------------------------------------------- Hermite form


def hermite_normal_form(a: IntMatrix) -> IntMatrix:
    """Row-style Hermite normal form: nonzero rows of an echelon basis of the row lattice.

    Pivots are positive and entries above each pivot are reduced into [0, pivot).
    """
    m = [row[:] for row in as_matrix(a)]
    if not m:
        return []
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        # gcd-combine the column below row r into row r
        while True:
            rows = [i for i in range(r, len(m)) if m[i][c] != 0]
            if not rows:
                break
            piv = min(rows, key=lambda i: abs(m[i][c]))
            m[r], m[piv] = m[piv], m[r]
            others = [i for i in range(r + 1, len(m)) if m[i][c] != 0]
            if not others:
                break
            for i in others:
                q = m[i][c] // m[r][c]
                m[i] = [x - q * y for x, y in zip(m[i], m[r])]
        if r < len(m) and m[r][c] != 0:
            if m[r][c] < 0:
                m[r] = [-x for x in m[r]]
            for i in range(r):
                q = m[i][c] // m[r][c]
                if q:
                    m[i] = [x - q * y for x, y in zip(m[i], m[r])]
            r += 1
            if r == len(m):
                break
    return [row for row in m[:r]]


def in_row_lattice(basis_rows: IntMatrix, v: Sequence[int]) -> bool:
    """Whether ``v`` is an integer combination of ``basis_rows``."""
    v = [int(x) for x in v]
    if not basis_rows:
        return not any(v)
    h = hermite_normal_form(basis_rows)
    rest = v[:]
    for row in h:
        c = next(j for j, x in enumerate(row) if x)
        if rest[c] % row[c]:
            return False
        q = rest[c] // row[c]
        rest = [x - q * y for x, y in zip(rest, row)]
    return not any(rest)


def in_column_span(a: IntMatrix, v: Sequence[int]) -> bool:
    """Whether ``v`` lies in the Z-span of the columns of ``a``."""
    return in_row_lattice(transpose(a), v)


def same_row_lattice(a: IntMatrix, b: IntMatrix) -> bool:
    return hermite_normal_form(a) == hermite_normal_form(b)


# ------------------------------------------------------------------ cokernel


def is_primitive_embedding(l: IntMatrix) -> bool:
    """``l: Z^k -> Z^r`` is injective with torsion-free cokernel."""
    l = as_matrix(l)
    k = len(l[0])
    factors = invariant_factors(l)
    return len(factors) == k and all(f == 1 for f in factors)


@dataclass(frozen=True)
class CokernelPresentation:
    """``0 -> R -> Z^r -> L -> 0`` with a chosen basis of ``L``.

    ``q_matrix`` is the (rank L) x r matrix of the projection; ``omega[i]`` is the
    image of the i-th standard basis vector (column i of ``q_matrix``).
    """

    basis_rank: int
    q_matrix: IntMatrix
    omega: list[list[int]]

    def rebase(self, change: IntMatrix) -> CokernelPresentation:
        """New presentation after the coordinate change ``x -> change @ x`` on L."""
        q = matmul(change, self.q_matrix)
        return CokernelPresentation(self.basis_rank, q, transpose(q))


def cokernel(l: IntMatrix) -> CokernelPresentation:
    """Cokernel of a primitive embedding ``l`` (r x k, row i is the form l_i)."""
    l = as_matrix(l)
    r, k = len(l), len(l[0])
    if not is_primitive_embedding(l):
        raise LatticeError("l is not a primitive embedding (non-injective or torsion cokernel)")
    if r <= k:
        raise LatticeError(f"cokernel is zero: r={r} must exceed rank {k}")
    u, _, _ = smith_normal_form(l)
    q = [row[:] for row in u[k:]]
    if any(any(row) for row in matmul(q, l)):
        raise AssertionError("q @ l != 0")
    if rank(q) + rank(l) != r:
        raise AssertionError("cokernel sequence is not exact")
    return CokernelPresentation(r - k, q, transpose(q))


def _basis_completion(u: Sequence[int]) -> IntMatrix:
    """Unimodular ``B`` with ``B @ u == e_1`` for a primitive vector ``u``."""
    col = [[x] for x in u]
    ul, d, vr = smith_normal_form(col)
    if d[0][0] != 1:
        raise LatticeError(f"{list(u)} is not primitive")
    # ul @ u @ vr = e_1 with vr = [[+-1]]
    s = vr[0][0]
    return [[s * x for x in row] for row in ul]


def good_basis(cok: CokernelPresentation, i: int, d: int) -> IntMatrix:
    """Basis change of L adapted to index ``i`` where ``l_i(R) = dZ``.

    Needs ``omega_i != 0``. Returns a unimodular ``B``; in the new coordinates ``B @ omega_i == (k, 0, ..., 0)``
    with gcd(k, d) = 1, and the omega_j (j != i) generate ``dZ + Z^n``.
    Postconditions are re-checked before returning.
    """
    if d <= 0:
        raise LatticeError("d must be positive (l_i = 0 has no adapted basis)")
    n1 = cok.basis_rank
    w = cok.omega[i]
    k = 0
    for x in w:
        k = gcd(k, x)
    if k == 0:
        raise LatticeError(f"omega_{i} is zero")
    prim = [x // k for x in w]
    b = _basis_completion(prim)
    others = [matvec(b, cok.omega[j]) for j in range(len(cok.omega)) if j != i]
    # shear e_2..e_{n+1} by multiples of e_1 so they land in the span of the others
    shear = identity(n1)
    for j in range(1, n1):
        ej = [int(t == j) for t in range(n1)]
        for c in range(d):
            cand = [x - c * int(t == 0) for t, x in enumerate(ej)]
            if in_row_lattice(others, cand):
                shear[0][j] = -c
                break
        else:
            raise AssertionError(f"no shear found for basis vector {j}")
    # shear is the new-basis matrix in old coords; coordinates transform by its inverse
    shear_inv = identity(n1)
    for j in range(1, n1):
        shear_inv[0][j] = -shear[0][j]
    change = matmul(shear_inv, b)
    _check_good_basis(cok, change, i, d)
    return change


def _check_good_basis(cok: CokernelPresentation, change: IntMatrix, i: int, d: int) -> None:
    n1 = cok.basis_rank
    if not is_unimodular(change):
        raise AssertionError("basis change is not unimodular")
    wi = matvec(change, cok.omega[i])
    if any(wi[1:]) or gcd(wi[0], d) != 1:
        raise AssertionError(f"omega_i = {wi} is not of the form (k, 0, ..., 0) with gcd(k, d) = 1")
    others = [matvec(change, cok.omega[j]) for j in range(len(cok.omega)) if j != i]
    if any(w[0] % d for w in others):
        raise AssertionError("first coordinate of some omega_j is not divisible by d")
    target = [[d if (a == 0 and b == 0) else int(a == b) for b in range(n1)] for a in range(n1)]
    if not same_row_lattice(others, target):
        raise AssertionError("omega_j (j != i) do not generate dZ + Z^n")


def maximal_minors(a: IntMatrix) -> list[int]:
    """All k x k minors of an r x k matrix."""
    k = len(a[0])
    return [det([a[i] for i in rows]) for rows in combinations(range(len(a)), k)]
