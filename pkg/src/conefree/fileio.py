"""Problem and solution text formats, and the solve trace CSV.

Problem files (UTF-8, '#' lines are comments):

    CONEPROB 1
    <m> <n> <nnz>
    CONES <num_blocks> <size_1> ... <size_k>
    <nnz entry lines: "i j value", zero-based, canonical column-major>
    <m lines of b>
    <n lines of c>

Floats are written as their shortest round-tripping decimal (repr), so
write -> parse reproduces every value bit for bit.

Solution files:

    STATUS <solved|max_iters|diverged>
    POBJ <v> / DOBJ <v> / ITERS <n>
    <n lines of x>
    <m lines of lam>

Sign conventions match the solver's reports: the dual residual is
A^T lam + c and the gap is c.x + b.lam, so lam from a solution file
can be used in those formulas without flipping signs.
"""

from __future__ import annotations

import numpy as np

from .model import ConeSpec, ProblemInstance, TripletMatrix, validate

__all__ = [
    "ParseError",
    "write_problem",
    "parse_problem",
    "write_solution",
    "parse_solution",
    "trace_csv",
]


class ParseError(ValueError):
    """Malformed file; carries the 1-based offending line number."""

    def __init__(self, line: int, message: str):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}")


def _fmt(v: float) -> str:
    return repr(float(v))


def write_problem(p: ProblemInstance) -> str:
    """Serialize an instance; entries are emitted in canonical order."""
    a = p.A
    order = np.lexsort((a.rows, a.cols))
    lines = [
        "CONEPROB 1",
        f"{a.num_rows} {a.num_cols} {a.nnz}",
        "CONES "
        + str(len(p.cones.block_sizes))
        + "".join(f" {s}" for s in p.cones.block_sizes),
    ]
    rows, cols, vals = a.rows[order], a.cols[order], a.vals[order]
    for k in range(a.nnz):
        lines.append(f"{rows[k]} {cols[k]} {_fmt(vals[k])}")
    lines.extend(_fmt(v) for v in p.b)
    lines.extend(_fmt(v) for v in p.c)
    return "\n".join(lines) + "\n"


def _content_lines(text):
    """(line_number, stripped_text) for non-comment, non-blank lines."""
    for num, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield num, stripped


def _parse_int(tok, line, what):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(line, f"expected integer {what}, got {tok!r}") from None


def _parse_float(tok, line, what):
    try:
        return float(tok)
    except ValueError:
        raise ParseError(line, f"expected number {what}, got {tok!r}") from None


def parse_problem(text: str) -> ProblemInstance:
    """Parse a problem file, reporting the offending line on error."""
    lines = _content_lines(text)

    def take(what):
        try:
            return next(lines)
        except StopIteration:
            raise ParseError(0, f"file ended before {what}") from None

    num, header = take("header")
    if header != "CONEPROB 1":
        raise ParseError(num, f"expected 'CONEPROB 1' header, got {header!r}")

    num, dims = take("dimensions")
    toks = dims.split()
    if len(toks) != 3:
        raise ParseError(num, f"expected 'm n nnz', got {dims!r}")
    m = _parse_int(toks[0], num, "m")
    n = _parse_int(toks[1], num, "n")
    nnz = _parse_int(toks[2], num, "nnz")
    if m < 1 or n < 1 or nnz < 0:
        raise ParseError(num, f"bad dimensions m={m} n={n} nnz={nnz}")

    num, cone_line = take("CONES line")
    toks = cone_line.split()
    if not toks or toks[0] != "CONES":
        raise ParseError(num, f"expected 'CONES ...', got {cone_line!r}")
    if len(toks) < 2:
        raise ParseError(num, "CONES line missing block count")
    count = _parse_int(toks[1], num, "cone block count")
    if len(toks) != 2 + count:
        raise ParseError(
            num, f"CONES declares {count} blocks but lists {len(toks) - 2}"
        )
    sizes = [_parse_int(t, num, "cone size") for t in toks[2:]]
    for s in sizes:
        if s < 1:
            raise ParseError(num, f"cone size {s} < 1")
    if sum(sizes) != n:
        raise ParseError(num, f"cone sizes sum {sum(sizes)} != n={n}")

    rows = np.empty(nnz, dtype=np.int64)
    cols = np.empty(nnz, dtype=np.int64)
    vals = np.empty(nnz, dtype=np.float64)
    seen = set()
    for k in range(nnz):
        num, entry = take(f"entry {k}")
        toks = entry.split()
        if len(toks) != 3:
            raise ParseError(num, f"expected 'i j value', got {entry!r}")
        i = _parse_int(toks[0], num, "row index")
        j = _parse_int(toks[1], num, "column index")
        v = _parse_float(toks[2], num, "value")
        if not 0 <= i < m:
            raise ParseError(num, f"row index {i} outside [0, {m})")
        if not 0 <= j < n:
            raise ParseError(num, f"column index {j} outside [0, {n})")
        if not np.isfinite(v):
            raise ParseError(num, f"value {toks[2]} is not finite")
        if v == 0.0:
            raise ParseError(num, f"zero value at ({i}, {j})")
        if (i, j) in seen:
            raise ParseError(num, f"duplicate entry at ({i}, {j})")
        seen.add((i, j))
        rows[k], cols[k], vals[k] = i, j, v

    def read_vector(length, name):
        out = np.empty(length)
        for idx in range(length):
            num, tok = take(f"{name}[{idx}]")
            v = _parse_float(tok, num, f"{name}[{idx}]")
            if not np.isfinite(v):
                raise ParseError(num, f"{name}[{idx}] = {tok} is not finite")
            out[idx] = v
        return out

    b = read_vector(m, "b")
    c = read_vector(n, "c")

    for num, extra in lines:
        raise ParseError(num, f"unexpected trailing content {extra!r}")

    p = ProblemInstance(
        A=TripletMatrix(m, n, rows, cols, vals),
        b=b,
        c=c,
        cones=ConeSpec(tuple(sizes)),
    )
    rep = validate(p)
    if not rep.ok:
        raise ParseError(0, "; ".join(rep.violations[:3]))
    return p


def write_solution(status: str, pobj: float, dobj: float, iters: int, x, lam) -> str:
    lines = [
        f"STATUS {status}",
        f"POBJ {_fmt(pobj)} / DOBJ {_fmt(dobj)} / ITERS {iters}",
    ]
    lines.extend(_fmt(v) for v in x)
    lines.extend(_fmt(v) for v in lam)
    return "\n".join(lines) + "\n"


def parse_solution(text: str, n: int, m: int):
    """Read a solution file back; returns (status, pobj, dobj, iters, x, lam)."""
    lines = list(_content_lines(text))
    if len(lines) != 2 + n + m:
        raise ParseError(0, f"expected {2 + n + m} lines, got {len(lines)}")
    num, status_line = lines[0]
    toks = status_line.split()
    if len(toks) != 2 or toks[0] != "STATUS":
        raise ParseError(num, f"expected 'STATUS <status>', got {status_line!r}")
    status = toks[1]
    num, obj_line = lines[1]
    toks = obj_line.split()
    if len(toks) != 8 or toks[0] != "POBJ" or toks[3] != "DOBJ" or toks[6] != "ITERS":
        raise ParseError(num, f"expected 'POBJ v / DOBJ v / ITERS n', got {obj_line!r}")
    pobj = _parse_float(toks[1], num, "POBJ")
    dobj = _parse_float(toks[4], num, "DOBJ")
    iters = _parse_int(toks[7], num, "ITERS")
    values = [
        _parse_float(tok, num, "solution value") for num, tok in lines[2:]
    ]
    x = np.array(values[:n])
    lam = np.array(values[n:])
    return status, pobj, dobj, iters, x, lam


TRACE_COLUMNS = (
    "iter",
    "prim_res_inf",
    "prim_res_2",
    "dual_res_inf",
    "dual_res_2",
    "stat_res_inf",
    "stat_res_2",
    "cone_gap",
    "pobj",
    "dobj",
    "gap",
    "status",
)


def trace_csv(trace) -> str:
    """Deterministic per-report CSV (no timing columns)."""
    lines = [",".join(TRACE_COLUMNS)]
    for rep in trace:
        lines.append(
            ",".join(
                [
                    str(rep.iter),
                    _fmt(rep.prim_res_inf),
                    _fmt(rep.prim_res_2),
                    _fmt(rep.dual_res_inf),
                    _fmt(rep.dual_res_2),
                    _fmt(rep.stat_res_inf),
                    _fmt(rep.stat_res_2),
                    _fmt(rep.cone_gap),
                    _fmt(rep.pobj),
                    _fmt(rep.dobj),
                    _fmt(rep.gap),
                    rep.status,
                ]
            )
        )
    return "\n".join(lines) + "\n"
