"""Exact sparse linear algebra over QQ on top of sympy's SDM matrices.

Vectors are sparse rows ``{column: coefficient}``.
"""

import logging
from typing import Dict, List, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices.sdm import SDM

logger = logging.getLogger(__name__)

Row = Dict[int, object]


def to_sdm(rows: Sequence[Row], ncols: int) -> SDM:
    return SDM({i: dict(r) for i, r in enumerate(rows) if r}, (len(rows), ncols), QQ)


def echelon(rows: Sequence[Row], ncols: int) -> Tuple[List[Row], List[int]]:
    """Reduced row echelon form of the row space.

    Returns:
        Tuple of (nonzero echelon rows, pivot columns), aligned.
    """
    if ncols == 0 or not any(rows):
        return [], []
    reduced, pivots = to_sdm(rows, ncols).rref()
    return [dict(reduced[i]) for i in range(len(pivots))], list(pivots)


def rank(rows: Sequence[Row], ncols: int) -> int:
    return len(echelon(rows, ncols)[1])


def left_kernel(rows: Sequence[Row], ncols: int) -> List[Row]:
    """Basis of {v : v·M = 0} for the matrix whose rows are ``rows``."""
    nrows = len(rows)
    if nrows == 0:
        return []
    if ncols == 0 or not any(rows):
        return [{i: QQ.one} for i in range(nrows)]
    basis, _ = to_sdm(rows, ncols).transpose().nullspace()
    return [dict(basis[i]) for i in range(basis.shape[0]) if i in basis]


def reduce_vector(vector: Row, echelon_rows: Sequence[Row], pivots: Sequence[int]) -> Row:
    """Subtract multiples of reduced echelon rows until the vector vanishes on every pivot."""
    result = {j: c for j, c in vector.items() if c}
    for row, p in zip(echelon_rows, pivots):
        c = result.get(p)
        if not c:
            continue
        c = c / row[p]
        for j, a in row.items():
            value = result.get(j, QQ.zero) - c * a
            if value:
                result[j] = value
            else:
                result.pop(j, None)
    return result


def determinant(matrix: Sequence[Sequence[object]]) -> object:
    n = len(matrix)
    if n == 0:
        return QQ.one
    rows = {i: {j: c for j, c in enumerate(row) if c} for i, row in enumerate(matrix)}
    return SDM(rows, (n, n), QQ).det()


def invert(matrix: Sequence[Sequence[object]]) -> List[List[object]]:
    """Inverse of a nonsingular square matrix given densely."""
    n = len(matrix)
    if n == 0:
        return []
    rows = {i: {j: c for j, c in enumerate(row) if c} for i, row in enumerate(matrix)}
    inverse = SDM(rows, (n, n), QQ).inv()
    return [[inverse.get(i, {}).get(j, QQ.zero) for j in range(n)] for i in range(n)]
