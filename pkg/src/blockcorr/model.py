"""Networks, partitions, blockimages and block views."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .errors import DataError


class BlockType(str, Enum):
    """Ideal block types, keyed by their three-letter code."""

    COM = "com"
    NUL = "nul"
    REG = "reg"
    RRE = "rre"
    CRE = "cre"
    RFN = "rfn"
    CFN = "cfn"
    DNC = "dnc"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, code: "str | BlockType") -> "BlockType":
        if isinstance(code, BlockType):
            return code
        try:
            return cls(code.strip().lower())
        except ValueError:
            raise DataError(f"unknown block type {code!r}") from None


BLOCK_NAMES = {
    BlockType.COM: "complete",
    BlockType.NUL: "null",
    BlockType.REG: "regular",
    BlockType.RRE: "row-regular",
    BlockType.CRE: "column-regular",
    BlockType.RFN: "row-functional",
    BlockType.CFN: "column-functional",
    BlockType.DNC: "do-not-care",
}


@dataclass(frozen=True, eq=False)
class Network:
    """A square matrix of non-negative tie values with actor labels.

    ``values[r, c]`` is the tie from actor ``r`` to actor ``c``. When
    ``self_ties_defined`` is false the diagonal is never read by any
    criterion, whatever it stores.
    """

    labels: tuple[str, ...]
    values: np.ndarray
    directed: bool = True
    self_ties_defined: bool = False

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def is_binary(self) -> bool:
        v = self.checkable_values()
        return bool(np.all((v == 0) | (v == 1)))

    def checkable_values(self) -> np.ndarray:
        """Copy of the matrix with undefined self-ties zeroed."""
        v = self.values.copy()
        if not self.self_ties_defined:
            np.fill_diagonal(v, 0.0)
        return v

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise DataError(f"unknown actor label {label!r}") from None

    @property
    def _index(self) -> dict[str, int]:
        idx = self.__dict__.get("_label_index")
        if idx is None:
            idx = {lab: i for i, lab in enumerate(self.labels)}
            object.__setattr__(self, "_label_index", idx)
        return idx

    def permuted(self, order: Sequence[int]) -> "Network":
        """Network with actors reordered so that new actor ``i`` is old ``order[i]``."""
        order = np.asarray(order)
        return build_network([self.labels[i] for i in order],
                             self.values[np.ix_(order, order)],
                             directed=self.directed,
                             self_ties_defined=self.self_ties_defined)


def build_network(labels: Iterable, matrix, directed: bool = True,
                  self_ties_defined: bool = False) -> Network:
    """Validate and freeze a network.

    Raises
    ------
    DataError
        On a dimension mismatch, a negative value, duplicate labels, or an
        asymmetric matrix when ``directed`` is false.
    """
    labels = tuple(str(lab) for lab in labels)
    m = np.array(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DataError(f"matrix must be square, got shape {m.shape}")
    if m.shape[0] != len(labels):
        raise DataError(f"{len(labels)} labels for a {m.shape[0]}x{m.shape[0]} matrix")
    if len(set(labels)) != len(labels):
        dup = sorted({lab for lab in labels if labels.count(lab) > 1})
        raise DataError(f"duplicate labels: {', '.join(dup)}")
    if not self_ties_defined:
        np.fill_diagonal(m, 0.0)
    if np.isnan(m).any():
        r, c = np.argwhere(np.isnan(m))[0]
        raise DataError(f"missing value at ({r},{c})")
    if (m < 0).any():
        r, c = np.argwhere(m < 0)[0]
        raise DataError(f"negative value at ({r},{c})")
    if not directed:
        bad = np.argwhere(m != m.T)
        if len(bad):
            r, c = sorted(bad[0])
            raise DataError(f"asymmetry at ({r},{c})")
    m.setflags(write=False)
    return Network(labels, m, bool(directed), bool(self_ties_defined))


@dataclass(frozen=True, eq=False)
class Partition:
    """Assignment of every actor to one of ``k`` non-empty positions."""

    assignment: np.ndarray
    k: int

    def __post_init__(self):
        a = np.asarray(self.assignment, dtype=np.intp)
        if a.ndim != 1:
            raise DataError("assignment must be one-dimensional")
        if self.k < 2:
            raise DataError("a partition needs at least two positions")
        if len(a) and (a.min() < 0 or a.max() >= self.k):
            raise DataError(f"position index out of range 0..{self.k - 1}")
        missing = sorted(set(range(self.k)) - set(a.tolist()))
        if missing:
            raise DataError(f"empty position(s): {missing}")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "assignment", a)

    @property
    def n(self) -> int:
        return len(self.assignment)

    def members(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == i)

    def sizes(self) -> np.ndarray:
        return np.bincount(self.assignment, minlength=self.k)

    def groups(self) -> list[list[int]]:
        return [self.members(i).tolist() for i in range(self.k)]

    def relabeled(self, perm: Sequence[int]) -> "Partition":
        """Position ``i`` becomes position ``perm[i]``."""
        return Partition(np.asarray(perm)[self.assignment], self.k)

    def canonical(self) -> tuple["Partition", np.ndarray]:
        """Relabel positions in order of first appearance.

        Returns the canonical partition and the permutation ``perm`` with
        ``canonical = self.relabeled(perm)``.
        """
        perm = np.full(self.k, -1)
        nxt = 0
        for p in self.assignment:
            if perm[p] < 0:
                perm[p] = nxt
                nxt += 1
        return self.relabeled(perm), perm

    def key(self) -> tuple[int, ...]:
        return tuple(self.assignment.tolist())

    def __eq__(self, other):
        return (isinstance(other, Partition) and self.k == other.k
                and np.array_equal(self.assignment, other.assignment))

    def __hash__(self):
        return hash((self.k, self.key()))

    def __repr__(self):
        return f"Partition(k={self.k}, groups={self.groups()})"


def make_partition(groups: Sequence[Sequence[str]], network: Network) -> Partition:
    """Build a partition from lists of actor labels; group order fixes positions."""
    assignment = np.full(network.n, -1)
    for pos, group in enumerate(groups):
        if len(group) == 0:
            raise DataError(f"group {pos} is empty")
        for lab in group:
            i = network.index(str(lab))
            if assignment[i] >= 0:
                raise DataError(f"actor {lab!r} appears in more than one group")
            assignment[i] = pos
    uncovered = [network.labels[i] for i in np.flatnonzero(assignment < 0)]
    if uncovered:
        raise DataError(f"actors not in any group: {', '.join(uncovered)}")
    return Partition(assignment, len(groups))


def _cell(value) -> tuple[BlockType, ...]:
    if isinstance(value, (str, BlockType)):
        value = str(value).split("|")
    cell = tuple(BlockType.parse(v) for v in value)
    if not cell:
        raise DataError("empty blockimage cell")
    if len(set(cell)) != len(cell):
        raise DataError(f"duplicate type in cell {'|'.join(map(str, cell))}")
    return cell


@dataclass(frozen=True)
class BlockImage:
    """A k-by-k grid of ideal block types.

    Each cell holds an ordered tuple of alternatives. A single entry is a
    fixed cell; several entries make the image an ensemble.
    """

    cells: tuple[tuple[tuple[BlockType, ...], ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(_cell(c) for c in row) for row in self.cells)
        k = len(rows)
        if k == 0 or any(len(r) != k for r in rows):
            raise DataError("blockimage must be a non-empty square grid")
        object.__setattr__(self, "cells", rows)

    @classmethod
    def of(cls, grid) -> "BlockImage":
        """From nested codes, e.g. ``[["com", "nul"], ["nul", "nul"]]``, or ``"com nul; nul nul"``."""
        if isinstance(grid, BlockImage):
            return grid
        if isinstance(grid, str):
            from .io import parse_blockimage
            return parse_blockimage(grid)
        return cls(tuple(tuple(row) for row in grid))

    @property
    def k(self) -> int:
        return len(self.cells)

    @property
    def is_fixed(self) -> bool:
        return all(len(c) == 1 for row in self.cells for c in row)

    def types(self) -> list[list[BlockType]]:
        """The fixed grid; raises if any cell is an ensemble."""
        if not self.is_fixed:
            raise DataError("blockimage has ensemble cells")
        return [[c[0] for c in row] for row in self.cells]

    def __getitem__(self, ij) -> BlockType:
        i, j = ij
        return self.types()[i][j]

    def n_alternatives(self) -> int:
        total = 1
        for row in self.cells:
            for c in row:
                total *= len(c)
        return total

    def relabeled(self, perm: Sequence[int]) -> "BlockImage":
        """Blockimage matching ``partition.relabeled(perm)``."""
        k = self.k
        out = [[None] * k for _ in range(k)]
        for i in range(k):
            for j in range(k):
                out[perm[i]][perm[j]] = self.cells[i][j]
        return BlockImage(tuple(tuple(r) for r in out))

    def codes(self) -> list[list[str]]:
        return [["|".join(map(str, c)) for c in row] for row in self.cells]

    def __str__(self):
        return ",".join("[" + ",".join(row) + "]" for row in self.codes())


@dataclass(frozen=True)
class BlockView:
    """Actors delimiting the empirical block between positions i and j."""

    i: int
    j: int
    row_actors: tuple[int, ...]
    col_actors: tuple[int, ...]
    self_ties_defined: bool = False
    diagonal: bool = field(init=False)
    checkable_cells: int = field(init=False)

    def __post_init__(self):
        diag = self.i == self.j
        object.__setattr__(self, "diagonal", diag)
        skip = diag and not self.self_ties_defined
        object.__setattr__(self, "checkable_cells",
                           len(self.row_actors) * (len(self.col_actors) - int(skip)))

    @property
    def skips_diagonal(self) -> bool:
        return self.diagonal and not self.self_ties_defined

    def cells_in_row(self, r: int) -> list[int]:
        if self.skips_diagonal:
            return [c for c in self.col_actors if c != r]
        return list(self.col_actors)

    def cells_in_col(self, c: int) -> list[int]:
        if self.skips_diagonal:
            return [r for r in self.row_actors if r != c]
        return list(self.row_actors)


def block_view(network: Network, partition: Partition, i: int, j: int) -> BlockView:
    if not (0 <= i < partition.k and 0 <= j < partition.k):
        raise IndexError(f"block ({i},{j}) outside a {partition.k}-position partition")
    return BlockView(i, j, tuple(partition.members(i).tolist()),
                     tuple(partition.members(j).tolist()),
                     network.self_ties_defined)
