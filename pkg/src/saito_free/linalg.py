"""Exact dense linear algebra over Q and GF(p), backed by python-flint.

Vectors are sparse dicts ``{index: coefficient}``; results come back in the
caller's coefficient representation (``mpq`` or ``int`` residues).
"""

from __future__ import annotations

import math

import flint
from gmpy2 import mpq

from .polyring import Field


def _int_rows(rows: list[list], field: Field):
    """Scale each row to integers (Q) so flint's fmpz routines apply."""
    out = []
    for row in rows:
        den = 1
        for c in row:
            if c:
                den = math.lcm(den, int(mpq(c).denominator))
        out.append([int(mpq(c) * den) if c else 0 for c in row])
    return out


def _dense(vectors: list[dict], dim: int, as_columns: bool) -> list[list]:
    if as_columns:
        rows = [[0] * len(vectors) for _ in range(dim)]
        for j, v in enumerate(vectors):
            for i, c in v.items():
                rows[i][j] = c
        return rows
    rows = []
    for v in vectors:
        row = [0] * dim
        for i, c in v.items():
            row[i] = c
        rows.append(row)
    return rows


def _matrix(rows: list[list], ncols: int, field: Field):
    flat = [c for row in rows for c in row]
    if field.p is None:
        flat = [c for row in _int_rows(rows, field) for c in row]
        return flint.fmpz_mat(len(rows), ncols, flat)
    return flint.nmod_mat(len(rows), ncols, [int(c) for c in flat], field.p)


def kernel(columns: list[dict], nrows: int, field: Field) -> list[list]:
    """Basis of {a : sum_j a_j * columns[j] = 0} as dense coefficient lists."""
    ncols = len(columns)
    if ncols == 0:
        return []
    if nrows == 0:
        return [[field(1) if i == j else field(0) for i in range(ncols)] for j in range(ncols)]
    rows = _dense(columns, nrows, as_columns=True)
    X, nullity = _matrix(rows, ncols, field).nullspace()
    basis = []
    for k in range(nullity):
        vec = [X[i, k] for i in range(ncols)]
        if field.p is None:
            g = 0
            for c in vec:
                g = math.gcd(g, int(c))
            g = g or 1
            basis.append([mpq(int(c) // g) for c in vec])
        else:
            basis.append([int(c) for c in vec])
    return basis


def pivot_indices(vectors: list[dict], dim: int, field: Field) -> list[int]:
    """Indices of the greedy (left-to-right) maximal independent subset."""
    if not vectors or dim == 0:
        return []
    rows = _dense(vectors, dim, as_columns=True)
    M = _matrix(rows, len(vectors), field)
    R = M.rref()[0]
    pivots = []
    ncols = len(vectors)
    col = 0
    for i in range(dim):
        while col < ncols and R[i, col] == 0:
            col += 1
        if col >= ncols:
            break
        pivots.append(col)
        col += 1
    return pivots


def rank(vectors: list[dict], dim: int, field: Field) -> int:
    if not vectors or dim == 0:
        return 0
    rows = _dense(vectors, dim, as_columns=False)
    return _matrix(rows, dim, field).rank()
