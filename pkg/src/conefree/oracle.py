"""Dense explicit-matrix mirror of the factored iteration, for tests.

Everything here trades efficiency for auditability: factors are
materialized as dense arrays, products go through numpy matmul, the
cone projection is a plain per-block loop, and the only inversions are
elementwise reciprocals of explicitly computed Gram diagonals. Capped
at 64 rows/columns; never used on the production solve path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ConeSpec, ProblemInstance
from .solver import SolverConfig, SolverState
from .uv import UVFactors

__all__ = ["DENSE_CAP", "DenseMirror", "dense_assemble", "dense_iterate"]

DENSE_CAP = 64


@dataclass(frozen=True)
class DenseMirror:
    """Dense A, U, V plus the problem vectors they mirror."""

    a: np.ndarray
    u: np.ndarray
    v: np.ndarray
    b: np.ndarray | None = None
    c: np.ndarray | None = None
    cones: ConeSpec | None = None


def dense_assemble(f: UVFactors, problem: ProblemInstance | None = None) -> DenseMirror:
    """Materialize the factors as dense arrays (entry-by-entry loop)."""
    if f.m > DENSE_CAP or f.n > DENSE_CAP:
        raise ValueError(f"dense mirror capped at {DENSE_CAP}, got {f.m}x{f.n}")
    a = np.zeros((f.m, f.n))
    u = np.zeros((f.m, f.o))
    v = np.zeros((f.n, f.o))
    for k in range(f.o):
        i, j, val = int(f.row_of[k]), int(f.col_of[k]), float(f.val[k])
        a[i, j] = val
        u[i, k] = val
        v[j, k] = 1.0
    if problem is None:
        return DenseMirror(a=a, u=u, v=v)
    return DenseMirror(
        a=a, u=u, v=v, b=problem.b.copy(), c=problem.c.copy(), cones=problem.cones
    )


def _project_block_ref(w):
    """Reference single-block projection: scalar branches, explicit loop."""
    head = float(w[0])
    ssq = 0.0
    for t in w[1:]:
        ssq += float(t) * float(t)
    alpha = math.sqrt(ssq)
    if alpha <= -head:
        return np.zeros(len(w))
    if alpha <= head:
        return np.array(w, dtype=np.float64)
    out = np.empty(len(w))
    out[0] = head / 2.0 + alpha / 2.0
    for i in range(1, len(w)):
        out[i] = w[i] / 2.0 + head * w[i] / (2.0 * alpha)
    return out


def _project_ref(cones: ConeSpec, w):
    out = np.empty(w.size)
    start = 0
    for size in cones.block_sizes:
        out[start : start + size] = _project_block_ref(w[start : start + size])
        start += size
    return out


def dense_iterate(mirror: DenseMirror, state: SolverState, cfg: SolverConfig) -> SolverState:
    """One full iteration in dense arithmetic, same update order as solve()."""
    if mirror.b is None or mirror.c is None or mirror.cones is None:
        raise ValueError("mirror lacks b/c/cones; assemble with a problem")
    u, v, b, c = mirror.u, mirror.v, mirror.b, mirror.c
    mu = cfg.mu

    fu = 1.0 / (1.0 + np.diag(u @ u.T))
    fv = 1.0 / (1.0 + np.diag(v @ v.T))

    x = fv * (v @ (state.y + state.gamma / mu) + state.z + state.delta / mu - c / mu)
    t = u.T @ (b - state.lam / mu) + v.T @ x - state.gamma / mu
    y = t - u.T @ (fu * (u @ t))
    z = _project_ref(mirror.cones, x - state.delta / mu)
    lam = state.lam + mu * (u @ y - b)
    gamma = state.gamma + mu * (y - v.T @ x)
    delta = state.delta + mu * (z - x)

    return SolverState(x=x, y=y, z=z, lam=lam, gamma=gamma, delta=delta, iter=state.iter + 1)
