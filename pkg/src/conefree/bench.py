"""Benchmark sweep: generate, solve, one CSV row per instance.

Rows are deterministic except the time_ms column. Instances may run in
a process pool; each row equals what a serial run would produce, and
rows are written in instance_id order. The CONEFREE_THREADS environment
variable caps the worker count (default: available parallelism).
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .generate import GenSpec, generate
from .solver import SolverConfig, solve

__all__ = ["BENCH_COLUMNS", "BenchJob", "shape_for_nnz", "run_job", "run_bench", "bench_csv"]

BENCH_COLUMNS = (
    "instance_id",
    "m",
    "n",
    "nnz",
    "density",
    "cone_kind",
    "mu",
    "term_mode",
    "iters",
    "time_ms",
    "prim_res_2",
    "dual_res_2",
    "gap",
    "cone_gap",
    "status",
)


@dataclass(frozen=True)
class BenchJob:
    instance_id: int
    gen: GenSpec
    cfg: SolverConfig


def shape_for_nnz(nnz: int, density: float, cone_kind: str = "lp"):
    """Pick (m, n) with n ~ 4m so that round(m*n*density) ~ nnz."""
    cells = nnz / density
    m = max(1, round(math.sqrt(cells / 4.0)))
    n = max(1, round(cells / m))
    if cone_kind == "socp4":
        n = max(4, 4 * round(n / 4))
    return m, n


def run_job(job: BenchJob) -> dict:
    """Generate and solve one instance; returns the row as a dict."""
    problem = generate(job.gen)
    start = time.perf_counter()
    result = solve(problem, job.cfg)
    elapsed_ms = (time.perf_counter() - start) * 1e3
    rep = result.report
    return {
        "instance_id": job.instance_id,
        "m": job.gen.m,
        "n": job.gen.n,
        "nnz": problem.A.nnz,
        "density": job.gen.density,
        "cone_kind": job.gen.cone_kind,
        "mu": job.cfg.mu,
        "term_mode": job.cfg.term_mode,
        "iters": rep.iter,
        "time_ms": elapsed_ms,
        "prim_res_2": rep.prim_res_2,
        "dual_res_2": rep.dual_res_2,
        "gap": rep.gap,
        "cone_gap": rep.cone_gap,
        "status": rep.status,
    }


def _worker_count(n_jobs: int) -> int:
    env = os.environ.get("CONEFREE_THREADS")
    if env is not None:
        try:
            cap = int(env)
        except ValueError:
            raise ValueError(f"CONEFREE_THREADS must be an integer, got {env!r}")
    else:
        cap = os.cpu_count() or 1
    return max(1, min(cap, n_jobs))


def run_bench(jobs, workers: int | None = None) -> list:
    """Run all jobs and return rows sorted by instance_id."""
    jobs = list(jobs)
    if workers is None:
        workers = _worker_count(len(jobs))
    if workers <= 1 or len(jobs) <= 1:
        rows = [run_job(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run_job, jobs))
    return sorted(rows, key=lambda r: r["instance_id"])


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def bench_csv(rows) -> str:
    lines = [",".join(BENCH_COLUMNS)]
    for row in rows:
        lines.append(",".join(_cell(row[col]) for col in BENCH_COLUMNS))
    return "\n".join(lines) + "\n"
