"""Goodness of fit: weighted correlation, point-biserial form and penalties."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .blockfit import TripletList, triplets_for
from .errors import DataError, NotApplicableError, UndefinedCriterionError
from .model import BlockImage, BlockType, Network, Partition, block_view

# relative floor below which a weighted variance counts as zero
_VAR_EPS = 1e-12


def _as_arrays(triplets):
    if isinstance(triplets, TripletList):
        return triplets.x, triplets.y, triplets.w
    if isinstance(triplets, (list, tuple)) and triplets and isinstance(triplets[0], TripletList):
        t = TripletList.concat(triplets)
        return t.x, t.y, t.w
    t = TripletList.from_tuples(triplets)
    return t.x, t.y, t.w


def _degenerate(v, scale) -> bool:
    return v <= _VAR_EPS * max(scale, 1e-300)


def weighted_correlation(triplets) -> float:
    """Weighted Pearson correlation between observed and ideal values.

    Parameters
    ----------
    triplets : TripletList, list of TripletList, or iterable of (x, y, w)

    Raises
    ------
    UndefinedCriterionError
        If fewer than two triplets carry weight, or X or Y has zero
        weighted variance.
    """
    x, y, w = _as_arrays(triplets)
    if len(x) < 2 or w.sum() <= 0:
        raise UndefinedCriterionError("xy", "fewer than two weighted triplets")
    W = w.sum()
    mx = (w * x).sum() / W
    my = (w * y).sum() / W
    dx, dy = x - mx, y - my
    sxx = (w * dx * dx).sum()
    syy = (w * dy * dy).sum()
    bad_x = _degenerate(sxx, (w * x * x).sum())
    bad_y = _degenerate(syy, (w * y * y).sum())
    if bad_x or bad_y:
        raise UndefinedCriterionError("xy" if bad_x and bad_y else ("x" if bad_x else "y"))
    r = (w * dx * dy).sum() / (math.sqrt(sxx) * math.sqrt(syy))
    return float(min(1.0, max(-1.0, r)))


@dataclass(frozen=True)
class PointBiserialParts:
    M1: float
    M0: float
    s_n: float
    n1: int
    n0: int
    n: int

    @property
    def separation_factor(self) -> float:
        return (self.M1 - self.M0) / self.s_n

    @property
    def balance_factor(self) -> float:
        return math.sqrt(self.n1 * self.n0 / self.n ** 2)

    @property
    def correlation(self) -> float:
        return self.separation_factor * self.balance_factor


def point_biserial(x, y) -> tuple[float, PointBiserialParts]:
    """Unweighted correlation between a real vector and a binary one.

    Returns the coefficient and its separation and balance factors.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y)
    if x.shape != y.shape or x.ndim != 1:
        raise DataError("x and y must be one-dimensional and of equal length")
    if not np.all((y == 0) | (y == 1)):
        raise DataError("y must be binary")
    ones = y == 1
    n1 = int(ones.sum())
    n = len(y)
    n0 = n - n1
    s_n = float(x.std())
    bad_y = n1 == 0 or n0 == 0
    bad_x = _degenerate(s_n * s_n, float((x * x).mean()) if n else 0.0)
    if bad_x or bad_y:
        raise UndefinedCriterionError("xy" if bad_x and bad_y else ("x" if bad_x else "y"))
    parts = PointBiserialParts(float(x[ones].mean()), float(x[~ones].mean()), s_n, n1, n0, n)
    return parts.correlation, parts


@dataclass(frozen=True)
class BlockDiagnostics:
    i: int
    j: int
    chosen_type: BlockType
    triplet_count: int
    weight_sum: float
    block_density: float
    penalty: int | None = None


@dataclass(frozen=True)
class Evaluation:
    """Fit of one (partition, blockimage) arrangement.

    ``correlation`` is None when undefined, with the reason in
    ``undefined``. ``penalty`` is None for valued networks; with ``dnc``
    cells present it covers the remaining blocks and ``has_dnc`` is set.
    """

    correlation: float | None
    penalty: int | None
    per_block: list[BlockDiagnostics] = field(default_factory=list)
    n_triplets: int = 0
    has_dnc: bool = False
    undefined: str | None = None

    @property
    def defined(self) -> bool:
        return self.correlation is not None


def _fixed_types(blockimage, k) -> list[list[BlockType]]:
    if isinstance(blockimage, BlockImage):
        types = blockimage.types()
    else:
        types = BlockImage.of(blockimage).types()
    if len(types) != k:
        raise DataError(f"blockimage is {len(types)}x{len(types)} but the partition has {k} positions")
    return types


def block_penalty(network: Network, view, block_type) -> int:
    """Inconsistency count of one block against one ideal type (binary data)."""
    t = BlockType.parse(block_type)
    if view.checkable_cells == 0 or t is BlockType.DNC:
        return 0
    a = network.values
    rows = [[int(a[r, c]) for c in view.cells_in_row(r)] for r in view.row_actors]
    ones = sum(map(sum, rows))
    n_c = len(view.col_actors) - int(view.skips_diagonal)
    n_r = len(view.row_actors) - int(view.skips_diagonal)
    if t is BlockType.COM:
        return view.checkable_cells - ones
    if t is BlockType.NUL:
        return ones
    s_r = sum(1 for row in rows if not any(row))
    cols = [[int(a[r, c]) for r in view.cells_in_col(c)] for c in view.col_actors]
    s_c = sum(1 for col in cols if not any(col))
    if t is BlockType.REG:
        # cells in an empty row or an empty column; on a diagonal block an
        # actor that is both owns no shared cell, since self-ties are skipped
        both = 0
        if view.skips_diagonal:
            empty_r = {r for r, row in zip(view.row_actors, rows) if not any(row)}
            empty_c = {c for c, col in zip(view.col_actors, cols) if not any(col)}
            both = len(empty_r & empty_c)
        return s_r * n_c + s_c * n_r - (s_r * s_c - both)
    if t is BlockType.RRE:
        return s_r * n_c
    if t is BlockType.CRE:
        return s_c * n_r
    if t is BlockType.RFN:
        return sum(n_c if not any(row) else sum(row) - 1 for row in rows)
    if t is BlockType.CFN:
        return sum(n_r if not any(col) else sum(col) - 1 for col in cols)
    raise AssertionError(t)  # pragma: no cover


def _require_binary(network: Network):
    if not network.is_binary:
        raise NotApplicableError("the penalty criterion needs a binary network")


def penalty(network: Network, partition: Partition, blockimage) -> int:
    """Total inconsistencies; ``dnc`` blocks contribute nothing."""
    _require_binary(network)
    types = _fixed_types(blockimage, partition.k)
    return sum(block_penalty(network, block_view(network, partition, i, j), types[i][j])
               for i in range(partition.k) for j in range(partition.k))


def per_block_best_penalty(network: Network, partition: Partition, allowed,
                           priority=None) -> tuple[BlockImage, int]:
    """Pick, block by block, the allowed type with the fewest inconsistencies.

    Ties go to the type listed first in ``priority`` (default: the order of
    ``allowed``).
    """
    _require_binary(network)
    allowed = [BlockType.parse(t) for t in allowed]
    order = [BlockType.parse(t) for t in (priority or allowed)]
    order += [t for t in allowed if t not in order]
    candidates = [t for t in order if t in allowed]
    if not candidates:
        raise DataError("no allowed block types")
    k = partition.k
    grid, total = [], 0
    for i in range(k):
        row = []
        for j in range(k):
            view = block_view(network, partition, i, j)
            best = min(candidates, key=lambda t: (block_penalty(network, view, t),
                                                  candidates.index(t)))
            total += block_penalty(network, view, best)
            row.append(best)
        grid.append(row)
    return BlockImage.of(grid), total


def evaluate(network: Network, partition: Partition, blockimage,
             strict: bool = True) -> Evaluation:
    """Correlation, penalty and per-block diagnostics for a fixed arrangement.

    Raises UndefinedCriterionError when the correlation is undefined, unless
    ``strict`` is false; then ``correlation`` is None and ``undefined`` names
    the degenerate vector.
    """
    if partition.n != network.n:
        raise DataError(f"partition covers {partition.n} actors, network has {network.n}")
    k = partition.k
    types = _fixed_types(blockimage, k)
    binary = network.is_binary
    a = network.values
    parts, diags, pen = [], [], 0
    has_dnc = False
    for i in range(k):
        for j in range(k):
            t = types[i][j]
            has_dnc |= t is BlockType.DNC
            view = block_view(network, partition, i, j)
            trip = triplets_for(t, network, view)
            parts.append(trip)
            cells = view.checkable_cells
            total = sum(a[r, c] for r in view.row_actors for c in view.cells_in_row(r))
            bp = block_penalty(network, view, t) if binary else None
            if binary:
                pen += bp
            diags.append(BlockDiagnostics(i, j, t, len(trip), trip.weight_sum,
                                          float(total / cells) if cells else 0.0, bp))
    all_trip = TripletList.concat(parts)
    try:
        corr, why = weighted_correlation(all_trip), None
    except UndefinedCriterionError as exc:
        if strict:
            raise
        corr, why = None, exc.which
    return Evaluation(corr, pen if binary else None, diags, len(all_trip), has_dnc, why)
