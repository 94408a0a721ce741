"""Exhaustive and local search over partitions and blockimages."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _engine as E
from .criteria import evaluate
from .errors import DataError, SearchLimitExceeded, UndefinedCriterionError
from .model import BlockImage, BlockType, Network, Partition

TIE_TOL = 1e-9
IMPROVE_TOL = 1e-12
ENSEMBLE_ENUM_LIMIT = 100_000
_POOLED_ELEMS = 2_500_000

_Y_VALUES = {
    BlockType.COM: {1}, BlockType.REG: {1}, BlockType.RRE: {1}, BlockType.CRE: {1},
    BlockType.NUL: {0}, BlockType.RFN: {0, 1}, BlockType.CFN: {0, 1}, BlockType.DNC: set(),
}


@dataclass(frozen=True)
class SearchParams:
    """Search settings.

    ``allowed_types`` doubles as the priority order used to break ties
    between equally fitting blockimages. ``max_no_improve`` stops local
    search after that many consecutive restarts fail to improve the best
    score (None runs every restart).
    """

    k: int
    allowed_types: tuple = (BlockType.COM, BlockType.NUL)
    criterion: str = "correlation"
    restarts: int = 50
    max_no_improve: int | None = None
    seed: int = 0
    epsilon_near: float = 0.01
    pool_cap: int = 100
    exhaustive_limit: int = 5_000_000
    blockimage_limit: int = 100_000

    def __post_init__(self):
        object.__setattr__(self, "allowed_types",
                           tuple(dict.fromkeys(BlockType.parse(t) for t in self.allowed_types)))
        if self.k < 2:
            raise DataError("k must be at least 2")
        if self.restarts < 1:
            raise DataError("restarts must be at least 1")
        if not 0 <= self.epsilon_near < 1:
            raise DataError("epsilon_near must lie in [0, 1)")
        if self.criterion not in ("correlation", "penalty"):
            raise DataError(f"unknown criterion {self.criterion!r}")
        if not self.allowed_types:
            raise DataError("allowed_types is empty")
        if self.pool_cap < 1:
            raise DataError("pool_cap must be at least 1")


@dataclass(frozen=True)
class Solution:
    partition: Partition
    blockimage: BlockImage
    correlation: float | None
    penalty: int | None
    provenance: str

    def score(self, criterion: str) -> float:
        if criterion == "penalty":
            return -float(self.penalty)
        return -math.inf if self.correlation is None else self.correlation


@dataclass
class SolutionPool:
    criterion: str
    best_score: float | None
    solutions: list[Solution] = field(default_factory=list)
    optimum_is_proven: bool = False

    @property
    def best(self) -> Solution | None:
        return self.solutions[0] if self.solutions else None

    def __len__(self):
        return len(self.solutions)


# -- counting and enumeration ------------------------------------------------

@lru_cache(maxsize=None)
def stirling(n: int, k: int) -> int:
    """Stirling number of the second kind: partitions of n items into k blocks."""
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling(n - 1, k) + stirling(n - 1, k - 1)


def _rgs_extend(cur, top, start, stop, n, k):
    """Extend RGS prefixes in ``cur`` from position ``start`` to ``stop``, keeping order.

    Prefixes that cannot reach ``k`` positions by length ``n`` are pruned.
    """
    for pos in range(start, stop):
        remaining = n - pos - 1
        parts, tops = [], []
        for v in range(min(pos + 1, k)):
            ok = top + 1 >= v
            new_top = np.maximum(top, v)
            ok &= new_top + 1 + remaining >= k
            idx = np.flatnonzero(ok)
            parts.append((idx, v))
            tops.append(new_top[idx])
        order = np.concatenate([idx for idx, _ in parts])
        vals = np.concatenate([np.full(len(idx), v, dtype=cur.dtype) for idx, v in parts])
        nxt = np.concatenate([cur[order], vals[:, None]], axis=1)
        tnew = np.concatenate(tops)
        # restore lexicographic order: stable sort on the parent index
        srt = np.argsort(order, kind="stable")
        cur, top = nxt[srt], tnew[srt]
    return cur, top


def _check_rgs(n, k):
    if k > n:
        raise DataError(f"cannot split {n} actors into {k} non-empty positions")
    if k < 1:
        raise DataError("k must be positive")
    return np.int8 if k < 127 else np.int16


def _rgs_array(n: int, k: int) -> np.ndarray:
    """All restricted-growth strings of length n with maximum k-1, in lexicographic order."""
    dtype = _check_rgs(n, k)
    cur, top = _rgs_extend(np.zeros((1, 1), dtype=dtype), np.zeros(1, dtype=np.int16), 1, n, n, k)
    return cur[top == k - 1]


def _rgs_chunks(n: int, k: int, rows: int = 1 << 20):
    """The strings of ``_rgs_array`` in the same order, as blocks of roughly ``rows``."""
    dtype = _check_rgs(n, k)
    if stirling(n, k) <= rows:
        yield _rgs_array(n, k)
        return
    # split into a prefix and a suffix whose completions depend only on the prefix maximum
    tail = max(1, min(n - 1, int(np.log(max(rows, 2)) / np.log(max(k, 2)))))
    head, htop = _rgs_extend(np.zeros((1, 1), dtype=dtype), np.zeros(1, dtype=np.int16),
                             1, n - tail, n, k)
    suffix = {}
    for t in np.unique(htop).tolist():
        cur, top = _rgs_extend(np.zeros((1, n - tail), dtype=dtype),
                               np.full(1, t, dtype=np.int16), n - tail, n, n, k)
        suffix[t] = cur[top == k - 1][:, n - tail:]
    buf, size = [], 0
    for h, t in zip(head, htop.tolist()):
        suf = suffix[t]
        block = np.empty((len(suf), n), dtype=dtype)
        block[:, :n - tail] = h
        block[:, n - tail:] = suf
        buf.append(block)
        size += len(block)
        if size >= rows:
            yield np.concatenate(buf)
            buf, size = [], 0
    if buf:
        yield np.concatenate(buf)


def enumerate_partitions(n: int, k: int):
    """Yield every partition of ``n`` actors into ``k`` non-empty positions once.

    Positions are numbered by first appearance, so each unlabeled partition
    appears as exactly one label vector.
    """
    if k < 2:
        raise DataError("k must be at least 2")
    for row in _rgs_array(n, k):
        yield Partition(row.astype(np.intp), k)


def _trivial(types) -> bool:
    ys = set()
    for t in types:
        ys |= _Y_VALUES[BlockType.parse(t)]
    return len(ys) < 2


def _degenerate_grid(grid) -> bool:
    g = np.asarray(grid)
    k = len(g)
    for p in range(k):
        for q in range(p + 1, k):
            if np.array_equal(g[p], g[q]) and np.array_equal(g[:, p], g[:, q]):
                return True
    return False


def _relabel_grid(grid, perm):
    g = np.asarray(grid)
    out = np.empty_like(g)
    perm = np.asarray(perm)
    out[np.ix_(perm, perm)] = g
    return out


def _orbit_key(grid) -> tuple:
    g = np.asarray(grid)
    return min(tuple(_relabel_grid(g, p).ravel().tolist())
               for p in itertools.permutations(range(len(g))))


def _grid_codes(k, allowed, dedupe_relabeling=False, drop_trivial=True,
                drop_degenerate=False, limit=None) -> np.ndarray:
    """(M, k, k) array of global type indices in priority product order."""
    ids = [E.TYPE_INDEX[BlockType.parse(t)] for t in allowed]
    total = len(ids) ** (k * k)
    if limit is not None and total > limit:
        raise SearchLimitExceeded(
            f"{total} blockimages exceed the limit of {limit}; fix the blockimage or use local search")
    combos = np.array(list(itertools.product(range(len(ids)), repeat=k * k)), dtype=np.int16)
    codes = np.asarray(ids, dtype=np.int16)[combos].reshape(-1, k, k)
    keep = np.ones(len(codes), dtype=bool)
    if drop_trivial:
        for m, g in enumerate(codes):
            keep[m] = not _trivial(E.TYPE_ORDER[t] for t in set(g.ravel().tolist()))
    if drop_degenerate:
        for m in np.flatnonzero(keep):
            keep[m] = not _degenerate_grid(codes[m])
    if dedupe_relabeling:
        seen = set()
        for m in np.flatnonzero(keep):
            key = _orbit_key(codes[m])
            keep[m] = key not in seen
            seen.add(key)
    return codes[keep]


def _to_blockimage(grid) -> BlockImage:
    return BlockImage.of([[E.TYPE_ORDER[t] for t in row] for row in np.asarray(grid).tolist()])


def _from_blockimage(bi: BlockImage) -> np.ndarray:
    return np.array([[E.TYPE_INDEX[t] for t in row] for row in bi.types()], dtype=np.int16)


def enumerate_blockimages(k: int, allowed_types, dedupe_relabeling: bool = False,
                          drop_trivial: bool = True, drop_degenerate: bool = False,
                          limit: int | None = 1_000_000) -> list[BlockImage]:
    """All k-by-k blockimages over ``allowed_types`` in priority product order.

    ``drop_trivial`` removes images whose ideal values cannot vary,
    ``dedupe_relabeling`` keeps the first member of each orbit under
    position relabeling and ``drop_degenerate`` removes images in which two
    positions have identical row and column type vectors.
    """
    allowed = [BlockType.parse(t) for t in allowed_types]
    if not allowed:
        raise DataError("allowed_types is empty")
    codes = _grid_codes(k, allowed, dedupe_relabeling, drop_trivial, drop_degenerate, limit)
    return [_to_blockimage(g) for g in codes]


def expand_ensemble(blockimage: BlockImage) -> list[BlockImage]:
    """Every fixed blockimage an ensemble allows, varying the last cell fastest."""
    cells = [c for row in blockimage.cells for c in row]
    k = blockimage.k
    out = []
    for combo in itertools.product(*cells):
        out.append(BlockImage.of([list(combo[i * k:(i + 1) * k]) for i in range(k)]))
    return out


def _distinct_relabelings(grids: np.ndarray) -> np.ndarray:
    k = grids.shape[1]
    seen, out = set(), []
    for g in grids:
        for p in itertools.permutations(range(k)):
            r = _relabel_grid(g, p)
            key = r.tobytes()
            if key not in seen:
                seen.add(key)
                out.append(r)
    return np.array(out, dtype=np.int16)


# -- batched scoring ---------------------------------------------------------

class _Scorer:
    def __init__(self, network: Network, k: int, criterion: str, types):
        self.network = network
        self.k = k
        self.criterion = criterion
        self.engine = E.StatsEngine(network, k)
        self.types = sorted({E.TYPE_INDEX[BlockType.parse(t)] for t in types})
        self.penalties = criterion == "penalty"
        if self.penalties and not network.is_binary:
            from .errors import NotApplicableError
            raise NotApplicableError("the penalty criterion needs a binary network")

    def selector(self, grids: np.ndarray) -> np.ndarray:
        k = self.k
        slot = {t: s for s, t in enumerate(self.types)}
        M = len(grids)
        sel = np.zeros((M, len(self.types) * k * k))
        g = np.asarray(grids).reshape(M, k * k)
        cols = np.vectorize(slot.__getitem__, otypes=[np.intp])(g) * k * k + np.arange(k * k)
        sel[np.arange(M)[:, None], cols] = 1.0
        return sel

    def stats(self, labels):
        st, pen = self.engine.compute(labels, [E.TYPE_ORDER[t] for t in self.types],
                                      penalties=self.penalties)
        st = st[:, self.types]
        pen = pen[:, self.types] if pen is not None else None
        return st, pen

    def penalties_only(self, labels):
        _, pen = self.engine.compute(labels, [E.TYPE_ORDER[t] for t in self.types],
                                     penalties=True, stats=False)
        return pen[:, self.types]

    def chunk(self, M: int) -> int:
        return max(1, min(self.engine.chunk_size(), _POOLED_ELEMS // max(M, 1)))

    def scores(self, labels, sel) -> np.ndarray:
        """(B, M) scores to maximize; -inf where undefined."""
        st, pen = self.stats(labels)
        B = st.shape[0]
        if self.penalties:
            return -(pen.reshape(B, -1) @ sel.T)
        flat = st.reshape(B, -1, E.NSTAT).transpose(0, 2, 1).reshape(B * E.NSTAT, -1)
        pooled = (flat @ sel.T).reshape(B, E.NSTAT, -1).transpose(0, 2, 1)
        r = E.corr_from_stats(pooled)
        return np.where(np.isnan(r), -np.inf, r)


def _near_threshold(best: float, eps: float) -> float:
    """Lowest score within relative slack ``eps`` of ``best`` (penalties enter negated)."""
    if not np.isfinite(best):
        return best
    return best - eps * abs(best) - IMPROVE_TOL


def _canonical(labels, grid):
    labels = np.asarray(labels)
    perm = np.full(int(labels.max()) + 1, -1)
    nxt = 0
    for p in labels:
        if perm[p] < 0:
            perm[p] = nxt
            nxt += 1
    return perm[labels], _relabel_grid(grid, perm)


class _PoolBuilder:
    """Keeps the best arrangements seen so far, keyed up to relabeling."""

    def __init__(self, params: SearchParams, canonical: bool = True, rank=None):
        self.params = params
        self.canonical = canonical
        self.rank = rank or (lambda g: tuple(np.asarray(g).ravel().tolist()))
        self.best = -np.inf
        self.items: dict[bytes, tuple] = {}

    def threshold(self):
        return _near_threshold(self.best, self.params.epsilon_near)

    def add(self, score, labels, grid, order_key=()):
        if score < self.threshold() or not np.isfinite(score):
            return
        cl, cg = _canonical(labels, grid)
        key = cl.astype(np.int16).tobytes() + np.asarray(cg, dtype=np.int16).tobytes()
        if key in self.items:
            return
        if self.canonical:
            labels, grid = cl, cg
        # equal fits on one partition collapse to the priority-first image
        part = np.asarray(labels, dtype=np.int16).tobytes()
        for other, (s2, _, l2, g2) in list(self.items.items()):
            if abs(s2 - score) <= TIE_TOL and np.asarray(l2, dtype=np.int16).tobytes() == part:
                if self.rank(grid) >= self.rank(g2):
                    return
                del self.items[other]
        self.items[key] = (float(score), order_key, np.asarray(labels).copy(), np.asarray(grid).copy())
        if score > self.best:
            self.best = float(score)
        if len(self.items) > 4 * self.params.pool_cap:
            self._prune()

    def _prune(self):
        thr = self.threshold()
        kept = sorted((v for v in self.items.items() if v[1][0] >= thr),
                      key=lambda kv: (-kv[1][0], kv[1][1], kv[0]))
        self.items = dict(kept[: self.params.pool_cap])

    def finish(self, network, provenance, proven) -> SolutionPool:
        self._prune()
        crit = self.params.criterion
        sols = []
        for score, _, labels, grid in self.items.values():
            sols.append(_solution(network, self.params.k, labels, grid, provenance))
        sols.sort(key=lambda s: (-s.score(crit), -s.score("correlation"), _sort_key(s)))
        if not sols:
            raise UndefinedCriterionError(
                "y", "no arrangement has a defined correlation; the blockimage may be trivial")
        best = sols[0].penalty if crit == "penalty" else sols[0].correlation
        return SolutionPool(crit, best, sols, proven)


def _sort_key(sol: Solution):
    return (sol.partition.key(), str(sol.blockimage))


def _solution(network, k, labels, grid, provenance) -> Solution:
    part = Partition(np.asarray(labels, dtype=np.intp), k)
    bi = _to_blockimage(grid)
    ev = evaluate(network, part, bi, strict=False)
    return Solution(part, bi, ev.correlation, ev.penalty, provenance)


def _check_network(network: Network, k: int):
    if k > network.n:
        raise DataError(f"k={k} exceeds the number of actors ({network.n})")


def _candidate_grids(params: SearchParams, fixed_blockimage) -> tuple[np.ndarray, bool]:
    """Blockimage grids to pair with canonical partitions, and whether they are user-oriented."""
    k = params.k
    if fixed_blockimage is None:
        drop = params.criterion == "correlation"
        return _grid_codes(k, params.allowed_types, drop_trivial=drop,
                           limit=params.blockimage_limit), False
    bi = _as_blockimage(fixed_blockimage, k)
    if bi.n_alternatives() > params.blockimage_limit:
        raise SearchLimitExceeded(
            f"ensemble has {bi.n_alternatives()} members, above the limit of {params.blockimage_limit}")
    grids = np.array([_from_blockimage(b) for b in expand_ensemble(bi)], dtype=np.int16)
    return _distinct_relabelings(grids), True


def _as_blockimage(bi, k) -> BlockImage:
    if not isinstance(bi, BlockImage):
        bi = BlockImage.of(bi)
    if bi.k != k:
        raise DataError(f"blockimage is {bi.k}x{bi.k} but k={k}")
    return bi


def _types_of(grids) -> set:
    return {E.TYPE_ORDER[t] for t in np.unique(grids).tolist()}


def _orient(labels, grid, targets):
    """Relabel so the blockimage matches one of the user's own orientations."""
    k = len(grid)
    for p in itertools.permutations(range(k)):
        g = _relabel_grid(grid, p)
        for t in targets:
            if np.array_equal(g, t):
                return np.asarray(p)[labels], g
    return labels, grid  # pragma: no cover


def _exhaustive(network, params, fixed_blockimage, count: bool, drop_degenerate=False):
    k = params.k
    _check_network(network, k)
    n_part = stirling(network.n, k)
    if n_part > params.exhaustive_limit:
        raise SearchLimitExceeded(
            f"{n_part} partitions exceed the exhaustive limit of {params.exhaustive_limit}; "
            "use local search")
    grids, oriented = _candidate_grids(params, fixed_blockimage)
    if drop_degenerate:
        grids = grids[[not _degenerate_grid(g) for g in grids]]
    if len(grids) == 0:
        raise DataError("no candidate blockimages")
    targets = None
    if oriented:
        bi = _as_blockimage(fixed_blockimage, k)
        targets = [_from_blockimage(b) for b in expand_ensemble(bi)]
    scorer = _Scorer(network, k, params.criterion, _types_of(grids))
    sel = scorer.selector(grids)
    pool = _PoolBuilder(params, canonical=not oriented)
    best_raw, n_best = -np.inf, 0
    B = scorer.chunk(len(grids))
    # penalties are separable, so per-block minima bound every image of a partition
    bound = scorer.penalties and not oriented
    step = scorer.chunk(1) if bound else B
    offset = 0
    for parts in _rgs_chunks(network.n, k, max(step, 1 << 16)):
        for start in range(0, len(parts), step):
            lab = parts[start:start + step].astype(np.intp)
            rows = np.arange(len(lab))
            if bound:
                pen = scorer.penalties_only(lab)
                upper = -pen.min(axis=1).sum(axis=(1, 2))
                floor = min(pool.threshold(), best_raw - TIE_TOL) if count else pool.threshold()
                rows = np.flatnonzero(upper >= floor)
            for s0 in range(0, len(rows), B):
                sub = rows[s0:s0 + B]
                sc = scorer.scores(lab[sub], sel)
                cmax = sc.max()
                if count and np.isfinite(cmax) and cmax >= best_raw - TIE_TOL:
                    if cmax > best_raw + TIE_TOL:
                        best_raw, n_best = cmax, 0
                    n_best += int((sc >= best_raw - TIE_TOL).sum())
                _add_batch(pool, sc, lab[sub], grids, sub + offset + start,
                           targets if oriented else None)
        offset += len(parts)
    result = pool.finish(network, "exhaustive", True)
    return (n_best if count else None), result


def _add_batch(pool, sc, lab, grids, index, targets):
    cmax = sc.max()
    if cmax > pool.best:
        pool.best = float(cmax)
    bs, ms = np.nonzero(sc >= pool.threshold())
    last_b, kept = -1, []
    for b, m in sorted(zip(bs.tolist(), ms.tolist()), key=lambda t: (t[0], -sc[t], t[1])):
        if b != last_b:
            last_b, kept = b, []
        s = sc[b, m]
        # equal fits on one partition collapse to the priority-first image
        if any(abs(s - o) <= TIE_TOL for o in kept):
            continue
        kept.append(s)
        L, G = lab[b], grids[m]
        if targets is not None:
            L, G = _orient(L, G, targets)
        pool.add(s, L, G, (int(index[b]), m))


def exhaustive_search(network: Network, params: SearchParams, fixed_blockimage=None) -> SolutionPool:
    """Score every partition against every candidate blockimage.

    With ``fixed_blockimage`` (which may be an ensemble) only its members
    are paired with partitions; otherwise every blockimage over
    ``params.allowed_types`` is.

    Raises
    ------
    SearchLimitExceeded
        If the number of partitions exceeds ``params.exhaustive_limit`` or
        the number of blockimages exceeds ``params.blockimage_limit``.
    """
    return _exhaustive(network, params, fixed_blockimage, count=False)[1]


def count_optima(network: Network, params: SearchParams, fixed_blockimage=None,
                 drop_degenerate: bool = False) -> tuple[int, SolutionPool]:
    """Number of (partition, blockimage) arrangements attaining the optimum.

    Arrangements that differ only by renumbering positions are counted once.
    Correlations within 1e-9 of the optimum count as ties.
    """
    n, pool = _exhaustive(network, params, fixed_blockimage, count=True,
                          drop_degenerate=drop_degenerate)
    return n, pool


# -- local search ------------------------------------------------------------

def _random_labels(rng, n, k, fixed=None):
    if fixed is not None:
        return np.asarray(fixed.assignment, dtype=np.intp).copy()
    while True:
        lab = rng.integers(0, k, n)
        if len(np.unique(lab)) == k:
            return lab.astype(np.intp)


def _neighbors(labels, k):
    """Relocations then swaps, as a (B, n) array of label vectors."""
    n = len(labels)
    sizes = np.bincount(labels, minlength=k)
    out = []
    for a in range(n):
        if sizes[labels[a]] < 2:
            continue
        for p in range(k):
            if p != labels[a]:
                nl = labels.copy()
                nl[a] = p
                out.append(nl)
    for a in range(n):
        for b in range(a + 1, n):
            if labels[a] != labels[b]:
                nl = labels.copy()
                nl[a], nl[b] = labels[b], labels[a]
                out.append(nl)
    return np.array(out, dtype=np.intp).reshape(-1, n)


class _LocalProblem:
    def __init__(self, network, params, fixed_partition, fixed_blockimage):
        self.network = network
        self.params = params
        self.k = params.k
        k = self.k
        self.fixed_partition = fixed_partition
        if fixed_blockimage is not None:
            bi = _as_blockimage(fixed_blockimage, k)
            self.alts = [[[E.TYPE_INDEX[t] for t in bi.cells[i][j]] for j in range(k)]
                         for i in range(k)]
        else:
            ids = [E.TYPE_INDEX[t] for t in params.allowed_types]
            self.alts = [[list(ids) for _ in range(k)] for _ in range(k)]
        self.free_cells = [(i, j) for i in range(k) for j in range(k) if len(self.alts[i][j]) > 1]
        types = {E.TYPE_ORDER[t] for row in self.alts for c in row for t in c}
        self.scorer = _Scorer(network, k, params.criterion, types)
        self.slot = {t: s for s, t in enumerate(self.scorer.types)}
        # penalties are separable: the best blockimage follows from the partition
        self.separable = params.criterion == "penalty"

    def rank(self, grid):
        k = self.k
        return tuple(self.alts[i][j].index(int(grid[i][j])) for i in range(k) for j in range(k))

    def n_images(self):
        total = 1
        for row in self.alts:
            for c in row:
                total *= len(c)
        return total

    def all_grids(self):
        k = self.k
        cells = [self.alts[i][j] for i in range(k) for j in range(k)]
        return np.array(list(itertools.product(*cells)), dtype=np.int16).reshape(-1, k, k)

    def random_grid(self, rng):
        k = self.k
        for _ in range(1000):
            g = np.array([[self.alts[i][j][rng.integers(len(self.alts[i][j]))]
                           for j in range(k)] for i in range(k)], dtype=np.int16)
            if self.params.criterion == "penalty" or not _trivial(
                    E.TYPE_ORDER[t] for t in set(g.ravel().tolist())):
                return g
        return g

    def best_separable(self, labels):
        """Per-block best alternative (priority on ties) and total penalty, batched."""
        _, pen = self.scorer.stats(labels)
        B, k = pen.shape[0], self.k
        grid = np.zeros((B, k, k), dtype=np.int16)
        total = np.zeros(B)
        for i in range(k):
            for j in range(k):
                alts = self.alts[i][j]
                vals = np.stack([pen[:, self.slot[t], i, j] for t in alts], axis=1)
                arg = vals.argmin(axis=1)
                grid[:, i, j] = np.asarray(alts, dtype=np.int16)[arg]
                total += vals[np.arange(B), arg]
        return grid, -total

    def score_labels(self, labels, grid):
        sel = self.scorer.selector(grid[None])
        out = np.empty(len(labels))
        B = self.scorer.chunk(1)
        for s in range(0, len(labels), B):
            out[s:s + B] = self.scorer.scores(labels[s:s + B], sel)[:, 0]
        return out

    def flip_scores(self, labels, grid):
        """Scores of every single-cell alternative for the current partition."""
        moves, grids = [], []
        for (i, j) in self.free_cells:
            for t in self.alts[i][j]:
                if t != grid[i, j]:
                    g = grid.copy()
                    g[i, j] = t
                    moves.append((i, j, t))
                    grids.append(g)
        if not grids:
            return [], np.empty(0)
        sel = self.scorer.selector(np.array(grids))
        return moves, self.scorer.scores(labels[None], sel)[0]


def _climb(prob: _LocalProblem, labels, grid, max_steps=100_000):
    k = prob.k
    if prob.separable:
        g, s = prob.best_separable(labels[None])
        grid, score = g[0], s[0]
    else:
        score = prob.score_labels(labels[None], grid)[0]
    for _ in range(max_steps):
        best_score, best = score, None
        if prob.fixed_partition is None:
            nb = _neighbors(labels, k)
            if len(nb):
                if prob.separable:
                    ng, ns = prob.best_separable(nb)
                else:
                    ns = prob.score_labels(nb, grid)
                m = int(np.argmax(ns))
                if ns[m] > best_score + IMPROVE_TOL:
                    best_score = ns[m]
                    best = ("move", nb[m], ng[m] if prob.separable else grid)
        if not prob.separable and prob.free_cells:
            moves, fs = prob.flip_scores(labels, grid)
            if len(fs):
                m = int(np.argmax(fs))
                if fs[m] > best_score + IMPROVE_TOL:
                    best_score = fs[m]
                    i, j, t = moves[m]
                    g = grid.copy()
                    g[i, j] = t
                    best = ("flip", labels, g)
        if best is None:
            break
        _, labels, grid = best
        score = best_score
    return labels, grid, score


def local_search(network: Network, params: SearchParams, fixed_partition=None,
                 fixed_blockimage=None) -> SolutionPool:
    """Multi-restart steepest ascent over partitions and blockimages.

    Each step takes the best of all single-actor relocations, pairwise
    swaps and, when the blockimage is free, single-cell type changes.
    Restart ``r`` draws its start from a generator seeded with
    ``(seed, r)``, so results depend only on ``params``.

    With a fixed partition and at most 100,000 candidate blockimages every
    candidate is scored directly and the result is proven optimal.
    """
    k = params.k
    _check_network(network, k)
    if fixed_partition is not None:
        if fixed_partition.k != k or fixed_partition.n != network.n:
            raise DataError("fixed partition does not match k or the network size")
    prob = _LocalProblem(network, params, fixed_partition, fixed_blockimage)
    if fixed_partition is not None and prob.n_images() <= ENSEMBLE_ENUM_LIMIT:
        return _score_fixed(network, params, prob, fixed_partition, proven=True)
    pool = _PoolBuilder(params, canonical=fixed_blockimage is None and fixed_partition is None,
                        rank=prob.rank)
    stale = 0
    seed = int(params.seed) % (1 << 64)
    for r in range(params.restarts):
        rng = np.random.default_rng([seed, r])
        labels = _random_labels(rng, network.n, k, fixed_partition)
        grid = prob.random_grid(rng)
        labels, grid, score = _climb(prob, labels, grid)
        before = pool.best
        pool.add(score, labels, grid, (r,))
        if pool.best > before + IMPROVE_TOL:
            stale = 0
        else:
            stale += 1
            if params.max_no_improve is not None and stale >= params.max_no_improve:
                break
    return pool.finish(network, "local-search", False)


def _score_fixed(network, params, prob, partition, proven):
    labels = np.asarray(partition.assignment, dtype=np.intp)
    pool = _PoolBuilder(params, canonical=False, rank=prob.rank)
    if prob.separable:
        g, s = prob.best_separable(labels[None])
        pool.add(s[0], labels, g[0], (0,))
    else:
        grids = prob.all_grids()
        sc = np.concatenate([prob.scorer.scores(labels[None], prob.scorer.selector(grids[s:s + 20000]))[0]
                             for s in range(0, len(grids), 20000)])
        if np.isfinite(sc.max()):
            pool.best = float(sc.max())
        kept = []
        for m in np.argsort(-sc, kind="stable"):
            if sc[m] < pool.threshold():
                break
            if any(abs(sc[m] - o) <= TIE_TOL for o in kept):
                continue
            kept.append(sc[m])
            pool.add(sc[m], labels, grids[m], (int(m),))
    return pool.finish(network, "exhaustive" if proven else "local-search", proven)
