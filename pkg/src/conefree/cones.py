"""Euclidean projection onto a product of Lorentz cones, and membership.

For one block w of size q with alpha = ||w[1:]||:

    alpha <= -w[0]  ->  0            (polar case)
    alpha <=  w[0]  ->  w            (already inside)
    otherwise       ->  w/2 + (alpha/2, w[0]*w[1]/(2 alpha), ...)

Size-1 blocks have alpha = 0, so the first two cases reduce them to
max(w[0], 0). The product projection runs one vectorized pass over all
blocks (segmented tail norms via bincount), with a shortcut when every
block has size 1. Branch order follows the case list above, so boundary
ties alpha = |w[0]| resolve identically everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .model import ConeSpec

__all__ = ["ConeWorkview", "project_block", "project_product", "in_cone"]


@dataclass(frozen=True)
class ConeWorkview:
    """Precomputed block layout for an n-vector partitioned by a ConeSpec."""

    spec: ConeSpec
    offsets: np.ndarray   # start of each block
    sizes: np.ndarray
    block_id: np.ndarray  # block index of every position
    n: int
    all_unit: bool        # every block has size 1

    @classmethod
    def from_spec(cls, spec: ConeSpec) -> "ConeWorkview":
        sizes = np.asarray(spec.block_sizes, dtype=np.int64)
        if sizes.size and sizes.min() < 1:
            raise ValueError("cone block sizes must be >= 1")
        if sizes.size:
            offsets = np.concatenate(([0], np.cumsum(sizes)[:-1])).astype(np.int64)
        else:
            offsets = np.zeros(0, dtype=np.int64)
        block_id = np.repeat(np.arange(sizes.size, dtype=np.int64), sizes)
        n = int(sizes.sum())
        for arr in (sizes, offsets, block_id):
            arr.setflags(write=False)
        return cls(
            spec=spec,
            offsets=offsets,
            sizes=sizes,
            block_id=block_id,
            n=n,
            all_unit=bool(sizes.size == 0 or sizes.max() == 1),
        )


@lru_cache(maxsize=64)
def _single_block_view(q: int) -> ConeWorkview:
    return ConeWorkview.from_spec(ConeSpec((q,)))


def _heads_and_alpha(view: ConeWorkview, w):
    """Per-block leading entries and tail norms (sequential tail sums)."""
    w1 = w[view.offsets]
    sq = w * w
    sq[view.offsets] = 0.0
    alpha = np.sqrt(np.bincount(view.block_id, weights=sq, minlength=view.sizes.size))
    return w1, alpha


def _project_segments(view: ConeWorkview, w):
    w1, alpha = _heads_and_alpha(view, w)
    zero_blk = alpha <= -w1
    keep_blk = ~zero_blk & (alpha <= w1)
    scale_blk = ~(zero_blk | keep_blk)

    factor = np.zeros(alpha.shape)
    factor[scale_blk] = w1[scale_blk] / (2.0 * alpha[scale_blk])
    out = 0.5 * w + factor[view.block_id] * w

    keep_pos = keep_blk[view.block_id]
    out[keep_pos] = w[keep_pos]
    out[zero_blk[view.block_id]] = 0.0

    scale_heads = view.offsets[scale_blk]
    out[scale_heads] = 0.5 * w1[scale_blk] + 0.5 * alpha[scale_blk]
    return out


def project_block(w) -> np.ndarray:
    """Project a single block onto its Lorentz cone."""
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 1 or w.size < 1:
        raise ValueError("block must be a 1-d vector of size >= 1")
    return _project_segments(_single_block_view(w.size), w)


def project_product(view: ConeWorkview, w) -> np.ndarray:
    """Project an n-vector onto the product cone, block by block."""
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (view.n,):
        raise ValueError(f"expected shape ({view.n},), got {w.shape}")
    if view.all_unit:
        return np.where(w > 0.0, w, 0.0)
    return _project_segments(view, w)


def in_cone(view: ConeWorkview, w, tol: float = 0.0) -> bool:
    """True iff every block satisfies w[0] >= ||w[1:]|| - tol."""
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (view.n,):
        raise ValueError(f"expected shape ({view.n},), got {w.shape}")
    w1, alpha = _heads_and_alpha(view, w)
    return bool(np.all(alpha - w1 <= tol))
