"""Reading networks, blockimages and partitions; result documents; text rendering."""

from __future__ import annotations

import hashlib
import json
import math
import re
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .blockfit import triplets_for
from .criteria import Evaluation, block_penalty
from .errors import DataError
from .model import BlockImage, Network, Partition, block_view, build_network, make_partition

_MISSING = {"", "na", "nan", "."}


def _read_text(source, inline: bool = True) -> str:
    """File contents for a path, or the string itself when it is inline data."""
    if isinstance(source, Path):
        if not source.exists():
            raise DataError(f"no such file: {source}")
        return source.read_text()
    if "\n" not in source and len(source) < 4096 and Path(source).is_file():
        return Path(source).read_text()
    if not inline and "\n" not in source:
        raise DataError(f"no such file: {source}")
    return source


def _split(line: str, delimiter) -> list[str]:
    if delimiter is None:
        return line.split()
    return [t.strip() for t in line.split(delimiter)]


def _is_number(tok: str) -> bool:
    try:
        float(tok)
        return True
    except ValueError:
        return False


def parse_network(source, directed: bool = True, self_ties: bool = False,
                  delimiter: str | None = None) -> Network:
    """Parse a delimiter-separated square matrix.

    Commas, tabs or runs of whitespace are detected from the first line
    unless ``delimiter`` is given. A header row and a leading label column
    are optional. Diagonal cells may be blank or ``NA`` unless
    ``self_ties`` is set.

    Raises
    ------
    DataError
        On ragged rows, non-numeric cells, duplicate labels, or a missing
        diagonal when self-ties are requested.
    """
    text = _read_text(source, inline=False)
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise DataError("empty network file")
    if delimiter is None:
        first = lines[0]
        delimiter = "," if "," in first else ("\t" if "\t" in first else None)
    rows = [_split(ln, delimiter) for ln in lines]
    header = None
    first = rows[0]
    # a header has an empty corner cell, a non-numeric label, or one field
    # fewer than the labelled rows below it
    if (first[0] == "" and delimiter is not None) \
            or not all(_is_number(t) or t.lower() in _MISSING for t in first[1:]) \
            or (len(rows) > 1 and len(first) == len(rows[1]) - 1):
        header = first
        rows = rows[1:]
    if not rows:
        raise DataError("network file has a header but no rows")
    n = len(rows)
    has_labels = any(len(r) == n + 1 for r in rows) or any(
        not _is_number(r[0]) and r[0].lower() not in _MISSING for r in rows)
    labels, cells = [], []
    for idx, r in enumerate(rows):
        want = n + 1 if has_labels else n
        if len(r) != want:
            raise DataError(f"ragged rows: row {idx + 1} has {len(r)} fields, expected {want}")
        if has_labels:
            labels.append(r[0])
            r = r[1:]
        cells.append(r)
    if header is not None:
        head = header[1:] if len(header) == n + 1 else header
        if len(head) != n:
            raise DataError(f"header has {len(head)} labels for {n} rows")
        if has_labels and list(head) != labels:
            raise DataError("header labels differ from row labels")
        labels = labels or list(head)
    if not labels:
        labels = [str(i + 1) for i in range(n)]
    m = np.zeros((n, n))
    diag_missing = False
    for i, r in enumerate(cells):
        for j, tok in enumerate(r):
            if tok.lower() in _MISSING:
                if i != j:
                    raise DataError(f"non-numeric cell at ({i},{j}): {tok!r}")
                diag_missing = True
                continue
            try:
                m[i, j] = float(tok)
            except ValueError:
                raise DataError(f"non-numeric cell at ({i},{j}): {tok!r}") from None
            if math.isnan(m[i, j]) or math.isinf(m[i, j]):
                raise DataError(f"non-numeric cell at ({i},{j}): {tok!r}")
    if self_ties and diag_missing:
        raise DataError("self-ties requested but diagonal missing")
    return build_network(labels, m, directed=directed, self_ties_defined=self_ties)


def parse_blockimage(text: str) -> BlockImage:
    """Parse ``"com nul; nul nul"``, a multi-line grid, or ``"[com,nul],[nul,nul]"``.

    Ensemble cells list alternatives as ``"com|reg"``.
    """
    text = _read_text(text).strip()
    if text.startswith("["):
        rows = re.findall(r"\[([^\[\]]*)\]", text)
        grid = [[c.strip() for c in r.split(",")] for r in rows]
    else:
        rows = [r for r in re.split(r"[;\n]", text) if r.strip()]
        grid = [r.replace(",", " ").split() for r in rows]
    if not grid or any(len(r) != len(grid) for r in grid):
        raise DataError("blockimage must be a square grid")
    return BlockImage.of(grid)


def parse_partition(source, network: Network) -> Partition:
    """Parse ``label<TAB>position`` lines or one line of ``;``-separated groups.

    Positions are ordered numerically when all are integers, otherwise by
    first appearance.
    """
    text = _read_text(source).strip()
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if len(lines) == 1 and ";" in lines[0]:
        groups = [[t.strip() for t in g.split(",") if t.strip()] for g in lines[0].split(";")]
        return make_partition(groups, network)
    pairs = []
    for ln in lines:
        parts = ln.split("\t") if "\t" in ln else ln.split()
        if len(parts) != 2:
            raise DataError(f"bad partition line: {ln!r}")
        pairs.append((parts[0].strip(), parts[1].strip()))
    keys = list(dict.fromkeys(p for _, p in pairs))
    if all(re.fullmatch(r"-?\d+", k) for k in keys):
        keys.sort(key=int)
    groups = [[lab for lab, p in pairs if p == key] for key in keys]
    return make_partition(groups, network)


def format_partition(network: Network, partition: Partition) -> str:
    return ";".join(",".join(network.labels[a] for a in g) for g in partition.groups())


def network_digest(network: Network) -> str:
    h = hashlib.sha256()
    h.update(json.dumps([list(network.labels), network.directed,
                         network.self_ties_defined]).encode())
    h.update(np.ascontiguousarray(network.values, dtype="<f8").tobytes())
    return h.hexdigest()


# -- result documents --------------------------------------------------------

@dataclass
class SolutionRecord:
    correlation: float | None
    correlation_4dp: str | None
    penalty: int | None
    partition: list[list[str]]
    blockimage: list[list[str]]
    per_block: list[dict] = field(default_factory=list)
    provenance: str | None = None


@dataclass
class ResultDocument:
    command: str
    params: dict
    seed: int | None
    network_digest: str | None
    solutions: list[SolutionRecord] = field(default_factory=list)
    qap: dict | None = None
    extra: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True, allow_nan=False,
                          default=_json_default)

    @classmethod
    def from_json(cls, text: str) -> "ResultDocument":
        d = json.loads(text)
        d["solutions"] = [SolutionRecord(**s) for s in d.get("solutions", [])]
        return cls(**d)


def _json_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return str(obj)


def fmt4(x: float | None) -> str | None:
    return None if x is None else f"{x:.4f}"


def solution_record(network: Network, partition: Partition, blockimage: BlockImage,
                    evaluation: Evaluation, provenance: str | None = None) -> SolutionRecord:
    per_block = [{"i": b.i, "j": b.j, "type": str(b.chosen_type), "triplets": b.triplet_count,
                  "weight_sum": b.weight_sum, "density": b.block_density, "penalty": b.penalty}
                 for b in evaluation.per_block]
    return SolutionRecord(evaluation.correlation, fmt4(evaluation.correlation), evaluation.penalty,
                          [[network.labels[a] for a in g] for g in partition.groups()],
                          blockimage.codes(), per_block, provenance)


# -- rendering ---------------------------------------------------------------

def render_blockmodel(network: Network, partition: Partition, blockimage) -> str:
    """Text blockmodel: rows and columns sorted by position, with block annotations.

    Binary inconsistencies against the ideal block are marked with ``*``
    for complete and null blocks. Undefined self-ties print as ``.``.
    """
    if not isinstance(blockimage, BlockImage):
        blockimage = BlockImage.of(blockimage)
    types = blockimage.types()
    order = [a for g in partition.groups() for a in g]
    bounds = set(np.cumsum(partition.sizes())[:-1].tolist())
    labels = [network.labels[a] for a in order]
    lw = max(len(s) for s in labels)
    a = network.values
    cw = max(3, max(len(_fmt_val(v)) for v in a.ravel()) + 1)
    pos_of = partition.assignment
    lines = ["order: " + format_partition(network, partition)]
    head = " " * lw + " |"
    for idx, lab in enumerate(labels):
        if idx in bounds:
            head += " |"
        head += f"{lab[:cw - 1]:>{cw}}"
    lines.append(head)
    sep = "-" * len(head)
    lines.append(sep)
    for ri, r in enumerate(order):
        if ri in bounds:
            lines.append(sep)
        row = f"{labels[ri]:>{lw}} |"
        for ci, c in enumerate(order):
            if ci in bounds:
                row += " |"
            if r == c and not network.self_ties_defined:
                cell = "."
            else:
                cell = _fmt_val(a[r, c])
                t = types[pos_of[r]][pos_of[c]]
                if network.is_binary and ((t.value == "com" and a[r, c] == 0)
                                          or (t.value == "nul" and a[r, c] == 1)):
                    cell += "*"
            row += f"{cell:>{cw}}"
        lines.append(row)
    lines.append(sep)
    lines.append("blocks:")
    for i in range(partition.k):
        for j in range(partition.k):
            view = block_view(network, partition, i, j)
            if view.checkable_cells == 0:
                lines.append(f"  ({i + 1},{j + 1}) -")
                continue
            trip = triplets_for(types[i][j], network, view)
            dens = sum(a[r, c] for r in view.row_actors for c in view.cells_in_row(r)) \
                / view.checkable_cells
            note = f"  ({i + 1},{j + 1}) {types[i][j]} density={dens:.4f} weight={trip.weight_sum:g}"
            if network.is_binary:
                note += f" penalty={block_penalty(network, view, types[i][j])}"
            lines.append(note)
    return "\n".join(lines) + "\n"


def _fmt_val(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else f"{v:g}"


def parse_rendered_order(text: str) -> list[list[str]]:
    """Recover the position groups from the ``order:`` line of a rendering."""
    for ln in text.splitlines():
        if ln.startswith("order: "):
            return [g.split(",") for g in ln[len("order: "):].split(";")]
    raise DataError("no order line in rendered blockmodel")
