"""Permutation significance tests for a fixed blockmodel."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import _engine as E
from .criteria import evaluate
from .errors import DataError, SearchLimitExceeded
from .model import BlockImage, Network, Partition

EXACT_MAX_N = 8
GE_TOL = 1e-12


@dataclass(frozen=True)
class QapResult:
    observed: float
    iterations: int
    count_ge: int
    p_value: float
    null_mean: float
    null_sd: float
    null_min: float
    null_max: float
    n_undefined: int
    seed: int | None
    exact: bool

    @property
    def null_summary(self) -> dict:
        return {"mean": self.null_mean, "sd": self.null_sd, "min": self.null_min,
                "max": self.null_max, "undefined": self.n_undefined}


def _perm_batches(n, iterations, seed, exact, batch):
    if exact:
        perms = itertools.permutations(range(n))
        next(perms)  # the identity is the observed arrangement
        while True:
            chunk = list(itertools.islice(perms, batch))
            if not chunk:
                return
            yield np.array(chunk, dtype=np.intp)
    else:
        seed = int(seed) % (1 << 64)
        for start in range(0, iterations, batch):
            stop = min(iterations, start + batch)
            yield np.array([np.random.default_rng([seed, i]).permutation(n)
                            for i in range(start, stop)], dtype=np.intp)


def qap_test(network: Network, partition: Partition, blockimage, iterations: int = 9999,
             seed: int = 0, exact: bool | None = None) -> QapResult:
    """Upper-tail permutation test of the correlation of a fixed arrangement.

    Each draw permutes the rows and columns of the matrix together while
    the partition stays put. ``p = (count_ge + 1) / (iterations + 1)``.
    With ``exact`` (the default for n <= 8) every non-identity permutation
    is used once and ``iterations`` becomes n! - 1.

    Raises
    ------
    UndefinedCriterionError
        If the observed correlation is undefined.
    SearchLimitExceeded
        If ``exact`` is requested for more than 8 actors.
    """
    if not isinstance(blockimage, BlockImage):
        blockimage = BlockImage.of(blockimage)
    observed = evaluate(network, partition, blockimage).correlation
    n = network.n
    if exact is None:
        exact = n <= EXACT_MAX_N
    if exact:
        if n > EXACT_MAX_N:
            raise SearchLimitExceeded(f"exact mode is limited to n <= {EXACT_MAX_N}")
        iterations = math.factorial(n) - 1
    elif iterations < 1:
        raise DataError("iterations must be at least 1")
    k = partition.k
    engine = E.StatsEngine(network, k)
    grid = blockimage.types()
    sel = E.type_onehot([grid], k)
    types = {t for row in grid for t in row}
    labels = np.asarray(partition.assignment, dtype=np.intp)
    batch = max(1, min(engine.chunk_size(), 2000))
    # permuting the matrix by s is the same as giving actor s[i] the label of actor i
    count_ge = n_undef = 0
    total = total_sq = 0.0
    lo, hi = math.inf, -math.inf
    for perms in _perm_batches(n, iterations, seed, exact, batch):
        lab = np.empty_like(perms)
        np.put_along_axis(lab, perms, labels[None, :].repeat(len(perms), 0), axis=1)
        st, _ = engine.compute(lab, types)
        r = E.corr_from_stats(E.pooled(st, sel))[:, 0]
        ok = ~np.isnan(r)
        n_undef += int((~ok).sum())
        rv = r[ok]
        count_ge += int((rv >= observed - GE_TOL).sum())
        total += float(rv.sum())
        total_sq += float((rv * rv).sum())
        if len(rv):
            lo, hi = min(lo, float(rv.min())), max(hi, float(rv.max()))
    m = iterations - n_undef
    mean = total / m if m else math.nan
    sd = math.sqrt(max(total_sq / m - mean * mean, 0.0)) if m else math.nan
    return QapResult(observed, iterations, count_ge, (count_ge + 1) / (iterations + 1),
                     mean, sd, lo if m else math.nan, hi if m else math.nan, n_undef,
                     None if exact else seed, exact)
