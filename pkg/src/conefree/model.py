"""Problem data containers and validation.

A problem instance is

    minimize    c.x
    subject to  A x = b,   x in K

where A is a sparse m-by-n matrix held in triplet (COO) form and K is a
product of Lorentz cones whose block sizes partition the n variables.
A size-1 block is the nonnegative half-line, so an LP over the
nonnegative orthant is simply n blocks of size 1.

All containers are immutable after construction (array buffers are
marked read-only), so they can be shared freely across workers.
Semantic checks live in :func:`validate`, which reports violations as
data instead of raising; every downstream operation assumes a
validated instance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "TripletMatrix",
    "ConeSpec",
    "ProblemInstance",
    "ValidationReport",
    "validate",
]


def _frozen_array(values, dtype):
    arr = np.array(values, dtype=dtype)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-d array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TripletMatrix:
    """Sparse matrix as parallel (row, col, value) triplet arrays.

    Indices are zero-based. The entry order is whatever the caller
    supplies; :func:`conefree.uv.build_uv` canonicalizes to
    column-major (sorted by column, then row).
    """

    num_rows: int
    num_cols: int
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rows", _frozen_array(self.rows, np.int64))
        object.__setattr__(self, "cols", _frozen_array(self.cols, np.int64))
        object.__setattr__(self, "vals", _frozen_array(self.vals, np.float64))
        if not (self.rows.size == self.cols.size == self.vals.size):
            raise ValueError("rows, cols, vals must have equal length")

    @property
    def nnz(self) -> int:
        return self.vals.size

    @classmethod
    def from_entries(cls, num_rows, num_cols, entries):
        """Build from an iterable of (i, j, value) tuples."""
        entries = list(entries)
        rows = [e[0] for e in entries]
        cols = [e[1] for e in entries]
        vals = [e[2] for e in entries]
        return cls(num_rows, num_cols, rows, cols, vals)

    @classmethod
    def from_dense(cls, a):
        """Build from a dense array, enumerating nonzeros column-major."""
        a = np.asarray(a, dtype=np.float64)
        m, n = a.shape
        cols, rows = np.nonzero(a.T)
        return cls(m, n, rows, cols, a[rows, cols])

    def to_dense(self):
        """Dense copy; intended for small matrices in tests and the oracle."""
        out = np.zeros((self.num_rows, self.num_cols))
        out[self.rows, self.cols] = self.vals
        return out


@dataclass(frozen=True)
class ConeSpec:
    """Ordered Lorentz-cone block sizes partitioning the variables.

    A block of size q constrains its slice w to w[0] >= ||w[1:]||; size 1
    degenerates to w[0] >= 0.
    """

    block_sizes: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "block_sizes", tuple(int(s) for s in self.block_sizes)
        )

    @property
    def dim(self) -> int:
        return sum(self.block_sizes)

    @classmethod
    def orthant(cls, n):
        """Nonnegative orthant: n blocks of size 1."""
        return cls((1,) * n)


@dataclass(frozen=True)
class ProblemInstance:
    """Full problem data: matrix, right-hand side, cost, cone layout."""

    A: TripletMatrix
    b: np.ndarray
    c: np.ndarray
    cones: ConeSpec

    def __post_init__(self):
        object.__setattr__(self, "b", _frozen_array(self.b, np.float64))
        object.__setattr__(self, "c", _frozen_array(self.c, np.float64))

    @property
    def m(self) -> int:
        return self.A.num_rows

    @property
    def n(self) -> int:
        return self.A.num_cols


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`validate`: violations are errors, warnings are not."""

    violations: tuple = ()
    warnings: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def _triplet_violations(a: TripletMatrix):
    out = []
    m, n, o = a.num_rows, a.num_cols, a.nnz
    bad = np.flatnonzero((a.rows < 0) | (a.rows >= m))
    for k in bad:
        out.append(f"entry {k}: row index {a.rows[k]} outside [0, {m})")
    bad = np.flatnonzero((a.cols < 0) | (a.cols >= n))
    for k in bad:
        out.append(f"entry {k}: column index {a.cols[k]} outside [0, {n})")
    bad = np.flatnonzero(~np.isfinite(a.vals))
    for k in bad:
        out.append(f"entry {k}: value {a.vals[k]} is not finite")
    bad = np.flatnonzero(a.vals == 0.0)
    for k in bad:
        out.append(f"entry {k}: zero value at ({a.rows[k]}, {a.cols[k]})")
    if o:
        # duplicates detected on the flattened position key
        key = a.rows * np.int64(max(n, 1)) + a.cols
        uniq, first = np.unique(key, return_index=True)
        if uniq.size != o:
            seen = np.zeros(o, dtype=bool)
            seen[first] = True
            for k in np.flatnonzero(~seen):
                out.append(f"duplicate entry at ({a.rows[k]}, {a.cols[k]})")
    return out


def validate(p: ProblemInstance) -> ValidationReport:
    """Check every invariant of a problem instance.

    Pure and deterministic. Returns a report rather than raising:
    malformed data is an answer, not a fault. Empty rows of A are
    reported as warnings only (they force b[i] = 0 for feasibility but
    are not structurally illegal).
    """
    violations = []
    warnings = []
    a = p.A
    m, n = a.num_rows, a.num_cols

    violations += _triplet_violations(a)

    if p.b.size != m:
        violations.append(f"b has length {p.b.size} != m={m}")
    if p.c.size != n:
        violations.append(f"c has length {p.c.size} != n={n}")
    for name, vec in (("b", p.b), ("c", p.c)):
        bad = np.flatnonzero(~np.isfinite(vec))
        for k in bad:
            violations.append(f"{name}[{k}] = {vec[k]} is not finite")

    sizes = p.cones.block_sizes
    for i, s in enumerate(sizes):
        if s < 1:
            violations.append(f"cone block {i} has size {s} < 1")
    total = sum(sizes)
    if total != n:
        violations.append(f"cone sizes sum {total} != n={n}")

    if m > 0:
        in_bounds = (a.rows >= 0) & (a.rows < m)
        filled = np.bincount(a.rows[in_bounds], minlength=m)
        for i in np.flatnonzero(filled == 0):
            warnings.append(f"row {i} of A has no nonzeros")

    return ValidationReport(tuple(violations), tuple(warnings))
