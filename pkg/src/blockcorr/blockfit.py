"""Observed/ideal/weight triplets comparing one empirical block to one ideal block.

Each generator walks the block row by row, then column by column where
columns matter, so triplet order is deterministic. Weights are set so that, for every type but
``dnc``, the weights of a block sum to its number of checkable cells.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .errors import DataError
from .model import BlockType, BlockView, Network, Partition, block_view


@dataclass(frozen=True, eq=False)
class TripletList:
    x: np.ndarray
    y: np.ndarray
    w: np.ndarray
    source_block: tuple | None = None

    def __len__(self):
        return len(self.x)

    def __iter__(self):
        return iter(zip(self.x.tolist(), self.y.tolist(), self.w.tolist()))

    @property
    def weight_sum(self) -> float:
        return float(self.w.sum())

    def as_tuples(self) -> list[tuple[float, int, float]]:
        return [(x, int(y), w) for x, y, w in self]

    @classmethod
    def from_tuples(cls, triplets: Iterable, source_block=None) -> "TripletList":
        t = list(triplets)
        if not t:
            return cls(np.empty(0), np.empty(0), np.empty(0), source_block)
        x, y, w = zip(*t)
        return cls(np.asarray(x, float), np.asarray(y, float), np.asarray(w, float),
                   source_block)

    @classmethod
    def concat(cls, parts: Iterable["TripletList"]) -> "TripletList":
        parts = list(parts)
        if not parts:
            return cls.from_tuples([])
        return cls(np.concatenate([p.x for p in parts]),
                   np.concatenate([p.y for p in parts]),
                   np.concatenate([p.w for p in parts]))


def _row_max(a, view, r):
    cells = view.cells_in_row(r)
    return max(a[r, c] for c in cells) if cells else None


def _col_max(a, view, c):
    cells = view.cells_in_col(c)
    return max(a[r, c] for r in cells) if cells else None


def _pack(out, view, t):
    return TripletList.from_tuples(out, (view.i, view.j, t))


def triplets_complete(network: Network, view: BlockView) -> TripletList:
    a = network.values
    out = [(a[r, c], 1, 1.0) for r in view.row_actors for c in view.cells_in_row(r)]
    return _pack(out, view, BlockType.COM)


def triplets_null(network: Network, view: BlockView) -> TripletList:
    a = network.values
    out = [(a[r, c], 0, 1.0) for r in view.row_actors for c in view.cells_in_row(r)]
    return _pack(out, view, BlockType.NUL)


def triplets_regular(network: Network, view: BlockView) -> TripletList:
    """Row maxima then column maxima, each weighted |Pi|(|Pj|-[i=j])/(|Pi|+|Pj|)."""
    if view.checkable_cells == 0:
        return _pack([], view, BlockType.REG)
    a = network.values
    w = view.checkable_cells / (len(view.row_actors) + len(view.col_actors))
    out = [(_row_max(a, view, r), 1, w) for r in view.row_actors]
    out += [(_col_max(a, view, c), 1, w) for c in view.col_actors]
    return _pack(out, view, BlockType.REG)


def triplets_row_regular(network: Network, view: BlockView) -> TripletList:
    if view.checkable_cells == 0:
        return _pack([], view, BlockType.RRE)
    w = float(len(view.col_actors) - int(view.skips_diagonal))
    out = [(_row_max(network.values, view, r), 1, w) for r in view.row_actors]
    return _pack(out, view, BlockType.RRE)


def triplets_column_regular(network: Network, view: BlockView) -> TripletList:
    if view.checkable_cells == 0:
        return _pack([], view, BlockType.CRE)
    w = float(len(view.row_actors) - int(view.skips_diagonal))
    out = [(_col_max(network.values, view, c), 1, w) for c in view.col_actors]
    return _pack(out, view, BlockType.CRE)


def triplets_row_functional(network: Network, view: BlockView) -> TripletList:
    """One tie per row: the last cell holding the row maximum is ideal 1.

    An all-zero row emits a single (0; 1; row length) triplet.
    """
    if view.checkable_cells == 0:
        return _pack([], view, BlockType.RFN)
    a = network.values
    w = float(len(view.col_actors) - int(view.skips_diagonal))
    out = []
    for r in view.row_actors:
        cells = view.cells_in_row(r)
        top = max(a[r, c] for c in cells)
        if top == 0:
            out.append((0.0, 1, w))
            continue
        index = -1
        for c in cells:
            if a[r, c] == top:
                index = c
        out += [(a[r, c], int(c == index), 1.0) for c in cells]
    return _pack(out, view, BlockType.RFN)


def triplets_column_functional(network: Network, view: BlockView) -> TripletList:
    if view.checkable_cells == 0:
        return _pack([], view, BlockType.CFN)
    a = network.values
    w = float(len(view.row_actors) - int(view.skips_diagonal))
    out = []
    for c in view.col_actors:
        cells = view.cells_in_col(c)
        top = max(a[r, c] for r in cells)
        if top == 0:
            out.append((0.0, 1, w))
            continue
        index = -1
        for r in cells:
            if a[r, c] == top:
                index = r
        out += [(a[r, c], int(r == index), 1.0) for r in cells]
    return _pack(out, view, BlockType.CFN)


def triplets_do_not_care(network: Network, view: BlockView) -> TripletList:
    return _pack([], view, BlockType.DNC)


GENERATORS: dict[BlockType, Callable[[Network, BlockView], TripletList]] = {
    BlockType.COM: triplets_complete,
    BlockType.NUL: triplets_null,
    BlockType.REG: triplets_regular,
    BlockType.RRE: triplets_row_regular,
    BlockType.CRE: triplets_column_regular,
    BlockType.RFN: triplets_row_functional,
    BlockType.CFN: triplets_column_functional,
    BlockType.DNC: triplets_do_not_care,
}


def triplets_for(block_type, network: Network, view: BlockView) -> TripletList:
    try:
        gen = GENERATORS[BlockType.parse(block_type)]
    except KeyError:  # pragma: no cover - parse already rejects unknown codes
        raise DataError(f"unknown block type {block_type!r}")
    return gen(network, view)


def blockmodel_triplets(network: Network, partition: Partition, types) -> list[TripletList]:
    """Triplet lists for every block, in row-major block order."""
    k = partition.k
    return [triplets_for(types[i][j], network, block_view(network, partition, i, j))
            for i in range(k) for j in range(k)]
