"""Batched sufficient statistics for many partitions at once.

For every block and ideal type, the triplets a generator would emit reduce
to five weighted sums::

    sw1   sum of w over triplets with y == 1
    swx1  sum of w*x over triplets with y == 1
    sw0   sum of w over triplets with y == 0
    swx0  sum of w*x over triplets with y == 0
    swxx  sum of w*x*x over all triplets

Summing them over blocks and applying ``corr_from_stats`` gives the same
weighted correlation as the triplet path, up to rounding. Penalties reduce to
integer counts the same way. Search and permutation tests run on this module;
``criteria.evaluate`` stays the reference implementation.
"""

from __future__ import annotations

import numpy as np

from .model import BlockType, Network

TYPE_ORDER = list(BlockType)
TYPE_INDEX = {t: i for i, t in enumerate(TYPE_ORDER)}
NSTAT = 5
_MAX_CHUNK_ELEMS = 4_000_000


class StatsEngine:
    """Per-block statistics for a fixed network and number of positions."""

    def __init__(self, network: Network, k: int):
        self.network = network
        self.k = k
        self.n = network.n
        a = network.checkable_values()
        self.a = a
        self.a2 = a * a
        self.diag = 0 if network.self_ties_defined else 1
        self.binary = network.is_binary

    def chunk_size(self, extra: int = 1) -> int:
        per = self.n * self.n * self.k * max(extra, 1)
        return max(1, _MAX_CHUNK_ELEMS // max(per, 1))

    def _onehot(self, labels: np.ndarray) -> np.ndarray:
        return (labels[:, :, None] == np.arange(self.k)).astype(float)

    def _actor_stats(self, oh, need_max: bool, need_sq: bool = True):
        a = self.a
        out = {"rsum": np.matmul(a, oh)}         # B,n,k : sum_c in Pj a[r,c]
        if need_sq:
            out["rsq"] = np.matmul(self.a2, oh)
        if need_max and self.binary:
            # 0/1 values: the maximum is 1 exactly when the sum is positive
            out["rmax"] = (out["rsum"] > 0).astype(float)
            out["cmax"] = (np.matmul(a.T, oh) > 0).astype(float)
        elif need_max:
            out["rmax"] = (a[None, :, :, None] * oh[:, None, :, :]).max(axis=2)
            out["cmax"] = (a.T[None, :, :, None] * oh[:, None, :, :]).max(axis=2)
        return out

    def compute(self, labels, types, penalties: bool = False, stats: bool = True):
        """Statistics for a batch of label vectors.

        Parameters
        ----------
        labels : (B, n) int array
        types : iterable of BlockType
            Types to compute; others are left at zero.
        penalties : bool
            Also return integer inconsistency counts (binary networks).
        stats : bool
            With False only penalties are computed and ``stats`` is None.

        Returns
        -------
        stats : (B, T, k, k, 5) float array indexed by ``TYPE_INDEX``
        pen : (B, T, k, k) float array or None
        """
        labels = np.atleast_2d(np.asarray(labels))
        B, k = labels.shape[0], self.k
        types = {BlockType.parse(t) for t in types}
        oh = self._onehot(labels)
        ohT = oh.transpose(0, 2, 1)
        sizes = oh.sum(axis=1)                                   # B,k
        eye = np.eye(k)
        ncols = sizes[:, None, :] - self.diag * eye              # cells per row of block ij
        nrows = sizes[:, :, None] - self.diag * eye              # cells per column
        cells = sizes[:, :, None] * ncols
        need_max = bool(types & {BlockType.REG, BlockType.RRE, BlockType.CRE,
                                 BlockType.RFN, BlockType.CFN}) or penalties
        want = stats
        act = self._actor_stats(oh, need_max, need_sq=want)
        S = ohT @ act["rsum"]
        Q = ohT @ act["rsq"] if want else None
        stats = np.zeros((B, len(TYPE_ORDER), k, k, NSTAT)) if want else None
        pen = np.zeros((B, len(TYPE_ORDER), k, k)) if penalties else None

        def put(t, sw1, swx1, sw0, swx0, swxx):
            s = stats[:, TYPE_INDEX[t]]
            s[..., 0], s[..., 1], s[..., 2], s[..., 3], s[..., 4] = sw1, swx1, sw0, swx0, swxx

        zero = np.zeros_like(S)
        if want:
            put(BlockType.COM, cells, S, zero, zero, Q)
            put(BlockType.NUL, zero, zero, cells, S, Q)
        if penalties:
            pen[:, TYPE_INDEX[BlockType.COM]] = cells - S
            pen[:, TYPE_INDEX[BlockType.NUL]] = S
        if not need_max:
            return stats, pen

        rmax, cmax = act["rmax"], act["cmax"]
        live = cells > 0
        # rows of Pi with no tie into Pj, columns of Pj with no tie from Pi
        zr = (ohT @ (rmax == 0).astype(float)) * live
        zc = ((cmax == 0).astype(float).transpose(0, 2, 1) @ oh) * live
        nzr = sizes[:, :, None] * live - zr
        nzc = sizes[:, None, :] * live - zc

        if want:
            RM1 = ohT @ rmax
            RM2 = ohT @ (rmax * rmax)
            CM1 = cmax.transpose(0, 2, 1) @ oh
            CM2 = (cmax * cmax).transpose(0, 2, 1) @ oh
            with np.errstate(divide="ignore", invalid="ignore"):
                wreg = np.where(live, cells / (sizes[:, :, None] + sizes[:, None, :]), 0.0)
            put(BlockType.REG, cells, wreg * (RM1 + CM1), zero, zero, wreg * (RM2 + CM2))
            wr = ncols * live
            put(BlockType.RRE, cells, wr * RM1, zero, zero, wr * RM2)
            wc = nrows * live
            put(BlockType.CRE, cells, wc * CM1, zero, zero, wc * CM2)
            put(BlockType.RFN, nzr + zr * ncols, RM1 * live, nzr * (ncols - 1),
                (S - RM1) * live, Q)
            put(BlockType.CFN, nzc + zc * nrows, CM1 * live, nzc * (nrows - 1),
                (S - CM1) * live, Q)

        if penalties:
            # actors that are both an empty row and an empty column of their
            # own diagonal block share no cell there
            both = (oh * ((rmax == 0) & (cmax == 0))).sum(axis=1)
            overlap = zr * zc - self.diag * eye * both[:, :, None]
            pen[:, TYPE_INDEX[BlockType.REG]] = np.where(
                live, zr * ncols + zc * nrows - overlap, 0)
            pen[:, TYPE_INDEX[BlockType.RRE]] = zr * ncols
            pen[:, TYPE_INDEX[BlockType.CRE]] = zc * nrows
            pen[:, TYPE_INDEX[BlockType.RFN]] = np.where(live, zr * ncols + S - nzr, 0)
            pen[:, TYPE_INDEX[BlockType.CFN]] = np.where(live, zc * nrows + S - nzc, 0)
        return stats, pen


def corr_from_stats(s: np.ndarray) -> np.ndarray:
    """Weighted correlation from pooled statistics ``(..., 5)``; NaN where undefined."""
    s = np.asarray(s, dtype=float)
    sw1, swx1, sw0, swx0, swxx = (s[..., i] for i in range(NSTAT))
    W = sw1 + sw0
    with np.errstate(divide="ignore", invalid="ignore"):
        p = sw1 / W
        mx = (swx1 + swx0) / W
        ex2 = swxx / W
        cov = swx1 / W - mx * p
        vx = ex2 - mx * mx
        vy = p * (1.0 - p)
        r = cov / np.sqrt(vx * vy)
        bad = (vy <= 0) | (vx <= 1e-12 * np.maximum(ex2, 1e-300)) | ~np.isfinite(r)
    return np.where(bad, np.nan, np.clip(r, -1.0, 1.0))


def type_onehot(grids, k: int) -> np.ndarray:
    """(M, T*k*k) selector matrix for a list of fixed type grids."""
    M = len(grids)
    T = len(TYPE_ORDER)
    sel = np.zeros((M, T, k, k))
    for m, g in enumerate(grids):
        for i in range(k):
            for j in range(k):
                sel[m, TYPE_INDEX[BlockType.parse(g[i][j])], i, j] = 1.0
    return sel.reshape(M, T * k * k)


def pooled(stats: np.ndarray, selector: np.ndarray) -> np.ndarray:
    """Pool per-block statistics under each blockimage: (B, M, 5)."""
    B = stats.shape[0]
    flat = stats.reshape(B, -1, NSTAT)                  # B, T*k*k, 5
    return np.einsum("bfs,mf->bms", flat, selector, optimize=True)


def pooled_penalty(pen: np.ndarray, selector: np.ndarray) -> np.ndarray:
    B = pen.shape[0]
    return pen.reshape(B, -1) @ selector.T
