"""Matrices of polynomials: determinants, maximal minors, Jacobian and
eigenscheme matrices, and the determinant derivation."""

from __future__ import annotations

from itertools import combinations

from .derivation import Derivation, apply
from .polyring import Poly, Ring, gradient


class PolyMatrix:
    """Row-major matrix of polynomials over one ring."""

    def __init__(self, rows: list[list[Poly]], ring: Ring | None = None, row_degrees=None):
        rows = [list(r) for r in rows]
        if not rows:
            raise ValueError("empty matrix")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        if ring is None:
            ring = rows[0][0].ring
        self.ring = ring
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols
        if row_degrees is not None:
            row_degrees = list(row_degrees)
            for i, r in enumerate(rows):
                for e in r:
                    if e and (not e.is_homogeneous() or e.degree() != row_degrees[i]):
                        raise ValueError(f"row {i} is not homogeneous of degree {row_degrees[i]}")
        self.row_degrees = row_degrees

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix([[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)], self.ring)

    def submatrix(self, rows, cols) -> "PolyMatrix":
        return PolyMatrix([[self.rows[i][j] for j in cols] for i in rows], self.ring)

    def __repr__(self):
        return f"PolyMatrix({self.nrows}x{self.ncols})"


def _perm_sign(perm) -> int:
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


def _det_rows(rows: list[list[Poly]], ring: Ring) -> Poly:
    """Laplace expansion down the rows, memoized on the remaining columns."""
    size = len(rows)
    memo: dict = {}

    def rec(depth: int, cols: tuple) -> Poly:
        if depth == size:
            return ring.one()
        key = cols
        if key in memo:
            return memo[key]
        total = ring.zero()
        row = rows[depth]
        for k, c in enumerate(cols):
            entry = row[c]
            if not entry:
                continue
            minor = rec(depth + 1, cols[:k] + cols[k + 1:])
            if not minor:
                continue
            term = entry * minor
            total = total + term if k % 2 == 0 else total - term
        memo[key] = total
        return total

    return rec(0, tuple(range(size)))


def determinant(M: PolyMatrix) -> Poly:
    """Exact determinant; rows are expanded sparsest first."""
    if M.nrows != M.ncols:
        raise ValueError(f"determinant of a non-square {M.nrows}x{M.ncols} matrix")
    order = sorted(range(M.nrows), key=lambda i: (sum(1 for e in M.rows[i] if e), i))
    det = _det_rows([M.rows[i] for i in order], M.ring)
    return det if _perm_sign(order) > 0 else -det


def maximal_minors(M: PolyMatrix) -> list[Poly]:
    """Signed minors h_i (delete column i, sign (-1)^i) for r x (r+1) input;
    otherwise all maximal minors in lexicographic column order, unsigned."""
    r, c = M.nrows, M.ncols
    if r > c:
        raise ValueError(f"more rows ({r}) than columns ({c})")
    if c == r + 1:
        out = []
        for i in range(c):
            cols = [j for j in range(c) if j != i]
            h = determinant(M.submatrix(range(r), cols))
            out.append(h if i % 2 == 0 else -h)
        return out
    return [determinant(M.submatrix(range(r), cols)) for cols in combinations(range(c), r)]


def minors(M: PolyMatrix, size: int) -> list[Poly]:
    """All size x size minors, rows and columns in lexicographic order."""
    return [
        determinant(M.submatrix(rows, cols))
        for rows in combinations(range(M.nrows), size)
        for cols in combinations(range(M.ncols), size)
    ]


def jacobian_matrix(polys: list[Poly]) -> PolyMatrix:
    if not polys:
        raise ValueError("jacobian_matrix needs at least one polynomial")
    ring = polys[0].ring
    for f in polys:
        if f.ring != ring:
            raise ValueError("polynomials live in different rings")
        if not f.is_homogeneous():
            raise ValueError("jacobian_matrix expects homogeneous polynomials")
    return PolyMatrix([gradient(f) for f in polys], ring)


def coordinate_matrix(rows: list[list[Poly]], ring: Ring) -> PolyMatrix:
    """Matrix with (x_0, ..., x_n) on top of the given rows."""
    return PolyMatrix([ring.gens()] + [list(r) for r in rows], ring)


def determinant_derivation(f_list: list[Poly]) -> Derivation:
    """The derivation given by the determinant with d/dx_j in the top row.

    The coefficient of d/dx_j is (-1)^j times the minor of the gradient
    matrix that omits column j.
    """
    if not f_list:
        raise ValueError("no polynomials given")
    ring = f_list[0].ring
    if len(f_list) != ring.n:
        raise ValueError(f"need exactly n={ring.n} polynomials, got {len(f_list)}")
    J = jacobian_matrix(f_list)
    delta = Derivation(maximal_minors(J), ring)
    for f in f_list:
        if apply(delta, f):
            raise AssertionError("determinant derivation does not annihilate its inputs")
    return delta
