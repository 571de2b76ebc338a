"""Two-factor splitting of the constraint matrix and its matrix-free products.

A sparse A with o nonzeros factors as A = U V^T where U is m-by-o with
the k-th nonzero value in column k (row i_k) and V is n-by-o with a
single 1 in column k (row j_k). Both Gram matrices U U^T and V V^T are
then diagonal, so the two linear solves inside the solver iteration
reduce to cached elementwise reciprocals, and every product with U, V
or their transposes is a gather or a scatter-add over the nonzero list.

Determinism contract: scatter-adds accumulate in canonical entry order
(column-major: sorted by column, then row), which is exactly the order
``np.bincount`` applies its weights. Gathers are order-free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import TripletMatrix, _triplet_violations

__all__ = [
    "UVFactors",
    "build_uv",
    "apply_U",
    "apply_Ut",
    "apply_V",
    "apply_Vt",
    "apply_y_factor",
]


@dataclass(frozen=True)
class UVFactors:
    """Factor data plus the cached inverted diagonals.

    fu_diag[i] = 1 / (1 + sum of squared values in row i)   -- diag (I+UU^T)^-1
    fv_diag[j] = 1 / (1 + number of nonzeros in column j)   -- diag (I+VV^T)^-1

    row_groups[i] / col_groups[j] list the entry indices k belonging to
    row i / column j, in canonical order; parallel scatter
    implementations must reduce within each group in that order.
    """

    m: int
    n: int
    o: int
    row_of: np.ndarray
    col_of: np.ndarray
    val: np.ndarray
    fu_diag: np.ndarray
    fv_diag: np.ndarray
    row_groups: tuple
    col_groups: tuple


def _groups(idx, count):
    order = np.argsort(idx, kind="stable")
    sizes = np.bincount(idx, minlength=count)
    return tuple(np.split(order, np.cumsum(sizes)[:-1]))


def build_uv(a: TripletMatrix) -> UVFactors:
    """Construct the factor pair for a valid triplet matrix.

    Entries are canonicalized to column-major order (sort by column,
    then row) so identical matrices always produce identical factors,
    whatever order the triplets arrived in.
    """
    problems = _triplet_violations(a)
    if problems:
        raise ValueError("invalid triplet matrix: " + "; ".join(problems[:3]))

    m, n, o = a.num_rows, a.num_cols, a.nnz
    order = np.lexsort((a.rows, a.cols))
    row_of = a.rows[order].copy()
    col_of = a.cols[order].copy()
    val = a.vals[order].copy()

    fu_diag = 1.0 / (1.0 + np.bincount(row_of, weights=val * val, minlength=m))
    fv_diag = 1.0 / (1.0 + np.bincount(col_of, minlength=n))

    for arr in (row_of, col_of, val, fu_diag, fv_diag):
        arr.setflags(write=False)

    return UVFactors(
        m=m,
        n=n,
        o=o,
        row_of=row_of,
        col_of=col_of,
        val=val,
        fu_diag=fu_diag,
        fv_diag=fv_diag,
        row_groups=_groups(row_of, m),
        col_groups=_groups(col_of, n),
    )


def _require_len(vec, length, what):
    if vec.shape != (length,):
        raise ValueError(f"{what}: expected shape ({length},), got {vec.shape}")


def apply_U(f: UVFactors, y) -> np.ndarray:
    """U @ y: scatter-add val[k] * y[k] into row i_k. Result length m."""
    y = np.asarray(y, dtype=np.float64)
    _require_len(y, f.o, "apply_U")
    return np.bincount(f.row_of, weights=f.val * y, minlength=f.m)


def apply_Ut(f: UVFactors, s) -> np.ndarray:
    """U^T @ s: pure gather val[k] * s[i_k]. Result length o."""
    s = np.asarray(s, dtype=np.float64)
    _require_len(s, f.m, "apply_Ut")
    return f.val * s[f.row_of]


def apply_V(f: UVFactors, g) -> np.ndarray:
    """V @ g: scatter-add g[k] into column j_k. Result length n."""
    g = np.asarray(g, dtype=np.float64)
    _require_len(g, f.o, "apply_V")
    return np.bincount(f.col_of, weights=g, minlength=f.n)


def apply_Vt(f: UVFactors, x) -> np.ndarray:
    """V^T @ x: pure gather x[j_k]. Result length o."""
    x = np.asarray(x, dtype=np.float64)
    _require_len(x, f.n, "apply_Vt")
    return x[f.col_of]


def apply_y_factor(f: UVFactors, t) -> np.ndarray:
    """(I + U^T U)^-1 @ t via the inversion identity.

    (I + U^T U)^-1 = I - U^T (I + U U^T)^-1 U, and the middle factor is
    the cached diagonal, so the solve costs one scatter, one elementwise
    product and one gather.
    """
    t = np.asarray(t, dtype=np.float64)
    _require_len(t, f.o, "apply_y_factor")
    return t - apply_Ut(f, f.fu_diag * apply_U(f, t))
