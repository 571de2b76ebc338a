"""Three-block ADMM loop over the factored problem.

The problem min c.x s.t. Ax = b, x in K is rewritten with A = U V^T as

    minimize   c.x
    subject to U y = b          (multiplier lam)
               y = V^T x        (multiplier gamma)
               z = x,  z in K   (multiplier delta)

and solved by alternating minimization: x first, then (y, z) jointly
(they separate), then gradient ascent on the three multipliers. Both
linear solves hit diagonal-plus-identity Gram matrices, so one
iteration is a handful of gathers, scatter-adds and elementwise ops:
O(o + n + m) arithmetic, never an m-by-n object.

Residual conventions (reported and written to files):

    prim_res  = ||A x - b||          dual_res = ||A^T lam + c||
    gap       = c.x + b.lam          cone_gap = ||x - z||_inf

dual_res converges to the norm of the optimal conic dual slack, which
is nonzero whenever the cone constraint is active at the optimum, so
termination checks instead use the stationarity residual

    stat_res  = ||A^T lam + c - delta||

which vanishes at the fixed point (delta is the running dual-slack
estimate and lands in the cone after every iteration by construction).
Both quantities appear in every report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .cones import ConeWorkview, project_product
from .model import ProblemInstance, validate
from .uv import UVFactors, apply_U, apply_Ut, apply_V, apply_Vt, apply_y_factor, build_uv

__all__ = [
    "SolverConfig",
    "SolverState",
    "IterationReport",
    "SolveResult",
    "x_update",
    "y_update",
    "z_update",
    "dual_update",
    "compute_report",
    "check_termination",
    "solve",
]

TERM_MODES = ("osqp", "scs", "target")


@dataclass(frozen=True)
class SolverConfig:
    """Penalty parameter, iteration budget, and termination settings.

    term_mode:
      osqp   -- inf-norm residuals against eps_abs/eps_rel-scaled bounds
                (strict <).
      scs    -- 2-norm residuals and |gap| against eps_prim/eps_dual/
                eps_gap relative bounds (inclusive <=).
      target -- stop once prim_res_2 < target_prim_res and
                |gap| < target_gap; for matching an externally supplied
                reference solution.
    """

    mu: float = 1.0
    max_iters: int = 100_000
    check_every: int = 25
    term_mode: str = "scs"
    eps_abs: float = 1e-4
    eps_rel: float = 1e-3
    eps_prim: float = 1e-3
    eps_dual: float = 1e-3
    eps_gap: float = 1e-3
    target_prim_res: float | None = None
    target_gap: float | None = None

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError("mu must be > 0")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.check_every < 1:
            raise ValueError("check_every must be >= 1")
        if self.term_mode not in TERM_MODES:
            raise ValueError(f"term_mode must be one of {TERM_MODES}")
        for name in ("eps_abs", "eps_rel", "eps_prim", "eps_dual", "eps_gap"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.term_mode == "target":
            if self.target_prim_res is None or self.target_gap is None:
                raise ValueError(
                    "target mode needs target_prim_res and target_gap"
                )


@dataclass
class SolverState:
    """Current iterates and multipliers."""

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    lam: np.ndarray
    gamma: np.ndarray
    delta: np.ndarray
    iter: int = 0

    @classmethod
    def zeros(cls, f: UVFactors) -> "SolverState":
        return cls(
            x=np.zeros(f.n),
            y=np.zeros(f.o),
            z=np.zeros(f.n),
            lam=np.zeros(f.m),
            gamma=np.zeros(f.o),
            delta=np.zeros(f.n),
        )

    def copy(self) -> "SolverState":
        return SolverState(
            x=self.x.copy(),
            y=self.y.copy(),
            z=self.z.copy(),
            lam=self.lam.copy(),
            gamma=self.gamma.copy(),
            delta=self.delta.copy(),
            iter=self.iter,
        )


@dataclass(frozen=True)
class IterationReport:
    """Residual norms, objective values and status at one iteration."""

    iter: int
    prim_res_inf: float
    prim_res_2: float
    dual_res_inf: float
    dual_res_2: float
    stat_res_inf: float
    stat_res_2: float
    ax_inf: float       # ||A x||_inf, needed by the osqp-style bound
    atl_inf: float      # ||A^T lam||_inf
    cone_gap: float
    pobj: float
    dobj: float
    gap: float
    status: str = "running"


class SolveResult(NamedTuple):
    x: np.ndarray
    lam: np.ndarray
    report: IterationReport
    trace: tuple


def x_update(f: UVFactors, state: SolverState, cfg: SolverConfig, c) -> np.ndarray:
    """Closed-form minimization over x (diagonal I + VV^T solve)."""
    mu = cfg.mu
    return f.fv_diag * (
        apply_V(f, state.y + state.gamma / mu)
        + state.z
        + state.delta / mu
        - c / mu
    )


def y_update(f: UVFactors, state: SolverState, cfg: SolverConfig, b) -> np.ndarray:
    """Closed-form minimization over y; consumes this iteration's x."""
    mu = cfg.mu
    t = apply_Ut(f, b - state.lam / mu) + apply_Vt(f, state.x) - state.gamma / mu
    return apply_y_factor(f, t)


def z_update(view: ConeWorkview, state: SolverState, cfg: SolverConfig) -> np.ndarray:
    """Cone projection of x - delta/mu; consumes this iteration's x."""
    return project_product(view, state.x - state.delta / cfg.mu)


def dual_update(f: UVFactors, state: SolverState, cfg: SolverConfig, b):
    """Gradient ascent on the three multipliers; consumes x, y, z."""
    mu = cfg.mu
    lam = state.lam + mu * (apply_U(f, state.y) - b)
    gamma = state.gamma + mu * (state.y - apply_Vt(f, state.x))
    delta = state.delta + mu * (state.z - state.x)
    return lam, gamma, delta


def _norms(v):
    if v.size == 0:
        return 0.0, 0.0
    return float(np.max(np.abs(v))), float(math.sqrt(np.dot(v, v)))


def compute_report(p: ProblemInstance, f: UVFactors, state: SolverState) -> IterationReport:
    """Matrix-free residual and objective evaluation at the current state."""
    finite = all(
        np.isfinite(v).all()
        for v in (state.x, state.y, state.z, state.lam, state.gamma, state.delta)
    )

    ax = apply_U(f, apply_Vt(f, state.x))
    prim = ax - p.b
    atl = apply_V(f, apply_Ut(f, state.lam))
    dual = atl + p.c
    stat = dual - state.delta

    prim_inf, prim_2 = _norms(prim)
    dual_inf, dual_2 = _norms(dual)
    stat_inf, stat_2 = _norms(stat)

    pobj = float(np.dot(p.c, state.x))
    blam = float(np.dot(p.b, state.lam))
    cone_gap = float(np.max(np.abs(state.x - state.z))) if state.x.size else 0.0

    return IterationReport(
        iter=state.iter,
        prim_res_inf=prim_inf,
        prim_res_2=prim_2,
        dual_res_inf=dual_inf,
        dual_res_2=dual_2,
        stat_res_inf=stat_inf,
        stat_res_2=stat_2,
        ax_inf=_norms(ax)[0],
        atl_inf=_norms(atl)[0],
        cone_gap=cone_gap,
        pobj=pobj,
        dobj=-blam,
        gap=pobj + blam,
        status="running" if finite else "diverged",
    )


def check_termination(report: IterationReport, cfg: SolverConfig, p: ProblemInstance) -> str:
    """Map a report onto solved/running/diverged for the configured mode."""
    if report.status == "diverged":
        return "diverged"
    if report.status != "running":
        return report.status

    if cfg.term_mode == "osqp":
        eps_prim = cfg.eps_abs + cfg.eps_rel * max(
            report.ax_inf, _norms(p.b)[0]
        )
        eps_dual = cfg.eps_abs + cfg.eps_rel * max(
            report.atl_inf, _norms(p.c)[0]
        )
        ok = report.prim_res_inf < eps_prim and report.stat_res_inf < eps_dual
    elif cfg.term_mode == "scs":
        ok = (
            report.prim_res_2 <= cfg.eps_prim * (1.0 + _norms(p.b)[1])
            and report.stat_res_2 <= cfg.eps_dual * (1.0 + _norms(p.c)[1])
            and abs(report.gap)
            <= cfg.eps_gap * (1.0 + abs(report.pobj) + abs(report.dobj))
        )
    else:  # target
        ok = (
            report.prim_res_2 < cfg.target_prim_res
            and abs(report.gap) < cfg.target_gap
        )
    return "solved" if ok else "running"


def solve(
    p: ProblemInstance,
    cfg: SolverConfig | None = None,
    init: SolverState | None = None,
) -> SolveResult:
    """Run the ADMM loop until a terminal status.

    Parameters
    ----------
    p : ProblemInstance
        Must pass :func:`conefree.model.validate`.
    cfg : SolverConfig, optional
        Defaults to scs-style termination at 1e-3.
    init : SolverState, optional
        Warm start; the cold start is all zeros.

    Returns
    -------
    SolveResult
        (x, lam, final report, trace of every evaluated report).
        Residuals are evaluated every ``cfg.check_every`` iterations and
        at the final iteration, so termination is detected up to
        check_every - 1 iterations late.
    """
    cfg = cfg or SolverConfig()
    report = validate(p)
    if not report.ok:
        raise ValueError("invalid problem: " + "; ".join(report.violations[:3]))

    f = build_uv(p.A)
    view = ConeWorkview.from_spec(p.cones)
    if view.n != f.n:
        raise ValueError(f"cone sizes sum {view.n} != n={f.n}")

    state = init.copy() if init is not None else SolverState.zeros(f)
    trace = []

    for k in range(1, cfg.max_iters + 1):
        state.x = x_update(f, state, cfg, p.c)
        state.y = y_update(f, state, cfg, p.b)
        state.z = z_update(view, state, cfg)
        state.lam, state.gamma, state.delta = dual_update(f, state, cfg, p.b)
        state.iter = k

        if k % cfg.check_every == 0 or k == cfg.max_iters:
            rep = compute_report(p, f, state)
            status = check_termination(rep, cfg, p)
            if status == "running" and k == cfg.max_iters:
                status = "max_iters"
            rep = replace(rep, status=status)
            trace.append(rep)
            if status != "running":
                break

    return SolveResult(
        x=state.x.copy(),
        lam=state.lam.copy(),
        report=trace[-1],
        trace=tuple(trace),
    )
