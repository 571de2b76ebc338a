"""Seeded random LP/SOCP instance generation.

Recipe (all draws from one numpy PCG64 generator seeded by ``seed``, in
this exact order, so instances are reproducible bit for bit):

1. nonzero positions: round(m*n*density) distinct cells, uniform
   without replacement over the m*n grid (row-major cell index);
2. nonzero values: i.i.d. standard normal, redrawn on the measure-zero
   event of an exact 0;
3. a standard-normal draw xdot of length n; its cone projection xhat
   is the primal witness and b = A @ xhat, so Ax = b is feasible by
   construction;
4. the cost: with bounded_mode (default), lamdot ~ N(0,1)^m and
   shat = proj_K(N(0,1)^n draw) give c = shat - A^T lamdot, making
   (lamdot, shat) a dual-feasibility witness that certifies a bounded
   optimal value; with bounded_mode=False, c is a raw N(0,1)^n draw.

Entries are stored canonically (column-major order).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cones import ConeWorkview, project_product
from .model import ConeSpec, ProblemInstance, TripletMatrix
from .uv import apply_U, apply_Ut, apply_V, apply_Vt, build_uv

__all__ = ["GenSpec", "GeneratedInstance", "generate", "generate_witnessed"]

CONE_KINDS = ("lp", "socp4")


@dataclass(frozen=True)
class GenSpec:
    """Shape, sparsity, cone family and seed of a random instance."""

    m: int
    n: int
    density: float
    cone_kind: str = "lp"
    seed: int = 0
    bounded_mode: bool = True

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("m and n must be >= 1")
        if not (0.0 < self.density <= 1.0):
            raise ValueError("density must be in (0, 1]")
        if self.cone_kind not in CONE_KINDS:
            raise ValueError(f"cone_kind must be one of {CONE_KINDS}")
        if self.cone_kind == "socp4" and self.n % 4 != 0:
            raise ValueError("socp4 requires n divisible by 4")
        if not (0 <= self.seed < 2**64):
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.nnz < 1:
            raise ValueError(f"m*n*density rounds to {self.nnz} < 1 nonzero")

    @property
    def nnz(self) -> int:
        return int(round(self.m * self.n * self.density))

    @property
    def cones(self) -> ConeSpec:
        if self.cone_kind == "lp":
            return ConeSpec.orthant(self.n)
        return ConeSpec((4,) * (self.n // 4))


@dataclass(frozen=True)
class GeneratedInstance:
    """Instance plus the feasibility witnesses used to build it."""

    problem: ProblemInstance
    x_feas: np.ndarray           # primal witness: A @ x_feas = b, x_feas in K
    lam_feas: np.ndarray | None  # dual witness (bounded_mode only)
    slack_feas: np.ndarray | None  # A^T lam_feas + c = slack_feas in K


def _sample_positions(rng, total, count):
    """First `count` distinct values of a uniform stream over [0, total).

    Equivalent to uniform sampling without replacement. Falls back to a
    full shuffle when count is a large fraction of the grid, where the
    stream would mostly collide.
    """
    if count > total:
        raise ValueError(f"cannot place {count} nonzeros in {total} cells")
    if 2 * count >= total:
        return np.sort(rng.permutation(total)[:count])
    kept = np.empty(0, dtype=np.int64)
    while kept.size < count:
        need = count - kept.size
        draw = rng.integers(0, total, size=max(16, need + need // 8 + 8))
        pool = np.concatenate([kept, draw])
        _, first = np.unique(pool, return_index=True)
        kept = pool[np.sort(first)]
    return np.sort(kept[:count])


def generate_witnessed(spec: GenSpec) -> GeneratedInstance:
    """Generate an instance and keep its feasibility witnesses."""
    rng = np.random.default_rng(spec.seed)
    m, n, nnz = spec.m, spec.n, spec.nnz

    pos = _sample_positions(rng, m * n, nnz)
    rows = pos // n
    cols = pos % n

    vals = rng.standard_normal(nnz)
    while True:
        zero = vals == 0.0
        if not zero.any():
            break
        vals[zero] = rng.standard_normal(int(zero.sum()))

    order = np.lexsort((rows, cols))
    a = TripletMatrix(m, n, rows[order], cols[order], vals[order])
    f = build_uv(a)
    view = ConeWorkview.from_spec(spec.cones)

    xdot = rng.standard_normal(n)
    x_feas = project_product(view, xdot)
    b = apply_U(f, apply_Vt(f, x_feas))

    if spec.bounded_mode:
        lam_feas = rng.standard_normal(m)
        slack_feas = project_product(view, rng.standard_normal(n))
        c = slack_feas - apply_V(f, apply_Ut(f, lam_feas))
    else:
        lam_feas = None
        slack_feas = None
        c = rng.standard_normal(n)

    problem = ProblemInstance(A=a, b=b, c=c, cones=spec.cones)
    return GeneratedInstance(
        problem=problem, x_feas=x_feas, lam_feas=lam_feas, slack_feas=slack_feas
    )


def generate(spec: GenSpec) -> ProblemInstance:
    """Generate a random instance (witnesses discarded)."""
    return generate_witnessed(spec).problem
