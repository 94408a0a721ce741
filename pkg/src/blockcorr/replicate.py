"""Published reference values and a harness that recomputes them.

Each :class:`Case` recomputes one group of related numbers from a fixture
and returns :class:`Row` objects pairing the computed value with the
reference value and its tolerance. Cases on external fixtures report SKIP
when the data is absent or fails its digest check.
"""

from __future__ import annotations

import itertools
import os
import time
from dataclasses import dataclass, field
from typing import Callable

from .criteria import PointBiserialParts, evaluate, per_block_best_penalty
from .errors import BlockmodelError
from .fixtures import (FixtureUnavailable, fixture_status, load_fixture,
                       load_sidecar_blockimage, load_sidecar_partition)
from .model import BlockImage, Network, Partition, make_partition
from .qap import qap_test
from .search import (SearchParams, count_optima, exhaustive_search, expand_ensemble,
                     local_search)

CORR_TOL = 5e-4
SLOW_ENV = "BLOCKCORR_SLOW"


@dataclass(frozen=True)
class Row:
    """One compared quantity.

    ``kind`` is ``"close"`` (absolute tolerance), ``"exact"``, ``"le"``
    (computed must not exceed the reference) or ``"multiset"`` (sorted
    sequences compared element-wise within the tolerance).
    """

    name: str
    expected: object
    computed: object
    kind: str = "close"
    tol: float = CORR_TOL

    @property
    def passed(self) -> bool:
        c, e = self.computed, self.expected
        if c is None:
            return False
        if self.kind == "close":
            return abs(c - e) <= self.tol
        if self.kind == "le":
            return c <= e
        if self.kind == "multiset":
            return len(c) == len(e) and all(
                abs(a - b) <= self.tol for a, b in zip(sorted(c), sorted(e)))
        return c == e

    def describe(self) -> str:
        if self.kind == "close":
            return f"±{self.tol:g}"
        if self.kind == "multiset":
            return f"each ±{self.tol:g}"
        return {"le": "<=", "exact": "exact"}.get(self.kind, "equal")


@dataclass(frozen=True)
class Case:
    criterion: int
    name: str
    fixtures: tuple[str, ...]
    run: Callable[[dict], list[Row]]
    slow: bool = False


@dataclass
class CaseResult:
    case: Case
    status: str                     # PASS, FAIL, SKIP or ERROR
    rows: list[Row] = field(default_factory=list)
    reason: str = ""
    seconds: float = 0.0


# -- label helpers -----------------------------------------------------------

def _label_for(network: Network, key: str) -> str:
    """The label equal to ``key`` or having it as an ``_``-separated token."""
    if key in network.labels:
        return key
    hits = [lab for lab in network.labels if key in lab.split("_")]
    if len(hits) != 1:
        raise BlockmodelError(f"cannot resolve actor {key!r} in {network.n}-actor network")
    return hits[0]


def groups_partition(network: Network, groups) -> Partition:
    """Partition from groups of actor keys; a final ``None`` collects the rest."""
    groups = [list(g) if g is not None else None for g in groups]
    named = [[_label_for(network, str(a)) for a in g] for g in groups if g is not None]
    if groups and groups[-1] is None:
        used = {lab for g in named for lab in g}
        named.append([lab for lab in network.labels if lab not in used])
    return make_partition(named, network)


def attribute_partition(network: Network, attr: Callable[[str], str], order) -> Partition:
    """Partition actors by an attribute derived from the label."""
    groups = [[lab for lab in network.labels if attr(lab) == v] for v in order]
    return make_partition(groups, network)


def same_groups(a: Partition, b: Partition) -> bool:
    return sorted(map(sorted, a.groups())) == sorted(map(sorted, b.groups()))


def same_up_to_relabeling(a: BlockImage, b: BlockImage) -> bool:
    return a.k == b.k and any(a.relabeled(p) == b for p in itertools.permutations(range(a.k)))


def _cn(mask) -> list[list[str]]:
    return [["com" if x else "nul" for x in r] for r in mask]


# -- criterion 1: point-biserial arithmetic ----------------------------------

def _worked_example(_ctx) -> list[Row]:
    opt = PointBiserialParts(0.6275, 0.0476, 0.4254, 51, 105, 156)
    var = PointBiserialParts(0.6522, 0.0636, 0.4254, 46, 110, 156)
    return [Row("separation factor, com", 1.3632, opt.separation_factor),
            Row("balance factor, com", 0.4691, opt.balance_factor),
            Row("r_pb with B12=com", 0.6395, opt.correlation),
            Row("r_pb with B12=nul", 0.6309, var.correlation)]


# -- criterion 2: BEfig1 -----------------------------------------------------

def _befig1(_ctx) -> list[Row]:
    net = load_fixture("befig1")
    core = groups_partition(net, [[1, 2, 3, 4], None])
    rows = []
    ev = evaluate(net, core, [["com", "dnc"], ["dnc", "nul"]])
    rows += [Row("dnc core-periphery corr", 1.0, ev.correlation),
             Row("dnc core-periphery penalty", 0, ev.penalty, "exact")]

    pool = exhaustive_search(net, SearchParams(2, ("com", "nul"), epsilon_near=0.05))
    best = pool.best
    rows += [Row("{com,nul} k=2 best corr", 0.5837, best.correlation),
             Row("{com,nul} k=2 best penalty", 16, best.penalty, "exact"),
             Row("{com,nul} k=2 best core is {1,2,3,4}", True,
                 same_groups(best.partition, core), "equal")]
    runners = [s.correlation for s in pool.solutions[1:3]]
    rows.append(Row("five-actor cores", [0.5645, 0.5645], runners, "multiset"))

    cp = [["com", "com"], ["com", "nul"]]
    best = exhaustive_search(net, SearchParams(2, epsilon_near=0), cp).best
    rows += [Row("[com,com;com,nul] corr-optimum", 0.5324, best.correlation),
             Row("[com,com;com,nul] corr-optimum penalty", 24, best.penalty, "exact"),
             Row("[com,com;com,nul] corr-optimum core {2,3,4}", True,
                 same_groups(best.partition, groups_partition(net, [[2, 3, 4], None])), "equal")]

    n, pool = count_optima(net, SearchParams(2, ("com", "nul"), criterion="penalty",
                                             epsilon_near=0), [["com", "nul"], ["nul", "nul"]])
    rows += [Row("[com,nul;nul,nul] penalty optimum", 16, pool.best.penalty, "exact"),
             Row("[com,nul;nul,nul] penalty-optimal count", 3, n, "exact")]
    n, pool = count_optima(net, SearchParams(2, criterion="penalty", epsilon_near=0), cp)
    rows += [Row("[com,com;com,nul] penalty optimum", 22, pool.best.penalty, "exact"),
             Row("[com,com;com,nul] penalty-optimal count", 3, n, "exact"),
             Row("[com,com;com,nul] penalty-optimal corrs", [0.4664, 0.4664, 0.3840],
                 [s.correlation for s in pool.solutions], "multiset")]

    pool = exhaustive_search(net, SearchParams(2, ("com", "reg", "nul"), epsilon_near=0))
    rows += [Row("{com,reg,nul} perfect fits", [1.0, 1.0],
                 [s.correlation for s in pool.solutions], "multiset"),
             Row("{com,reg,nul} perfect-fit penalties", [0, 0],
                 sorted(s.penalty for s in pool.solutions), "exact")]
    return rows


# -- criterion 3: Transatlantic ----------------------------------------------

_TA_H = [[1, 2, 3, 4, 5, 11], [6, 10, 12, 13], [7, 8, 9]]
_TA_I = [[1, 3, 4, 5, 11], [2], [6, 10, 12, 13], [7, 8, 9]]
_TA_I_BI = [["com", "com", "nul", "nul"], ["com", "com", "nul", "nul"],
            ["nul", "nul", "com", "nul"], ["nul", "com", "nul", "com"]]


def _ta_pair(net, k, exhaustive, restarts=300, seed=7):
    out = []
    for crit in ("correlation", "penalty"):
        p = SearchParams(k, ("com", "nul"), criterion=crit, epsilon_near=0,
                         restarts=restarts, seed=seed)
        out.append(exhaustive_search(net, p) if exhaustive else local_search(net, p))
    return out


def _transatlantic_k23(_ctx) -> list[Row]:
    net = load_fixture("transatlantic")
    rows = []
    c, p = _ta_pair(net, 2, True)
    rows += [Row("k=2 corr-optimum", 0.4046, c.best.correlation),
             Row("k=2 corr-optimum penalty", 29, c.best.penalty, "exact"),
             Row("k=2 penalty-optimum", 29, p.best.penalty, "exact")]
    c, p = _ta_pair(net, 3, True)
    rows += [Row("k=3 corr-optimum", 0.5752, c.best.correlation),
             Row("k=3 corr-optimum penalty", 27, c.best.penalty, "exact"),
             Row("k=3 penalty-optimum", 23, p.best.penalty, "exact"),
             Row("k=3 penalty-optimal corrs", [0.5559, 0.5534],
                 [s.correlation for s in p.solutions], "multiset")]
    h = groups_partition(net, _TA_H)
    ev = evaluate(net, h, _cn([[1, 0, 0], [0, 0, 0], [0, 0, 1]]))
    rows.append(Row("k=3 variant B33=nul", 0.5173, ev.correlation))
    return rows


def _transatlantic_k45(_ctx) -> list[Row]:
    net = load_fixture("transatlantic")
    rows = []
    c, p = _ta_pair(net, 4, False)
    rows += [Row("k=4 corr-optimum", 0.6395, c.best.correlation),
             Row("k=4 corr-optimum penalty", 24, c.best.penalty, "exact"),
             Row("k=4 penalty-optimum", 20, p.best.penalty, "exact"),
             Row("k=4 penalty-optimum corr", 0.6191, p.best.correlation)]
    bi = [r[:] for r in _TA_I_BI]
    bi[0][1] = "nul"
    ev = evaluate(net, groups_partition(net, _TA_I), bi)
    rows.append(Row("k=4 variant I12=nul", 0.6309, ev.correlation))
    c, p = _ta_pair(net, 5, False)
    rows += [Row("k=5 corr-optimum", 0.7080, c.best.correlation),
             Row("k=5 corr-optimum penalty", 17, c.best.penalty, "exact"),
             Row("k=5 penalty-optimum", 17, p.best.penalty, "exact"),
             Row("k=5 penalty-optimal corrs", [0.7080, 0.6871, 0.6812],
                 [s.correlation for s in p.solutions], "multiset")]
    return rows


def _transatlantic_regular(_ctx) -> list[Row]:
    net = load_fixture("transatlantic")
    rows = []
    arr = [([[7, 8, 9], None], [["com", "nul"], ["nul", "reg"]], 0.9598, "P1={7,8,9}"),
           ([[13], None], [["dnc", "nul"], ["nul", "reg"]], 0.9250, "P1={13}")]
    for s in ([1, 2, 7, 12, 13], [1, 2, 8, 12, 13], [1, 3, 7, 12, 13], [1, 3, 9, 12, 13]):
        arr.append(([s, None], [["nul", "reg"], ["reg", "reg"]], 0.9120,
                    "P1={" + ",".join(map(str, s)) + "}"))
    for groups, bi, corr, tag in arr:
        ev = evaluate(net, groups_partition(net, groups), bi)
        rows += [Row(f"{tag} corr", corr, ev.correlation),
                 Row(f"{tag} penalty", 3, ev.penalty, "exact")]
    part = groups_partition(net, [[7, 8, 9], None])
    img, pen = per_block_best_penalty(net, part, ("com", "reg", "nul"))
    rows.append(Row("P1={7,8,9} per-block best image", "[com,nul],[nul,reg]", str(img), "equal"))
    return rows


# -- criterion 4: Kansas SAR -------------------------------------------------

_KS_CONCOR = [list("AE"), list("CFGIK"), list("DLN"), list("BHJS"), list("MOPQRT")]
_KS_COMMON = [list("AE"), list("BDKP"), list("CFGI"), list("HJLMRT"), list("O")]
_KS_EXTRA = {1: {1: "NQ", 3: "S"}, 2: {1: "NS", 3: "Q"}, 3: {1: "NQS"},
             4: {1: "S", 2: "Q", 4: "N"}}
_KS_BI = [["com", "com", "com", "nul", "nul"], ["com", "nul", "com", "nul", "nul"],
          ["com", "nul", "com", "nul", "nul"], ["com", "nul", "nul", "nul", "nul"],
          ["com", "com", "com", "com", "nul"]]


def _ks_solution(net, s):
    groups = [g + list(_KS_EXTRA[s].get(i, "")) for i, g in enumerate(_KS_COMMON)]
    bi = [r[:] for r in _KS_BI]
    if s == 4:
        bi[4][1] = "nul"
    return groups_partition(net, groups), bi


def _kansas_structural(_ctx) -> list[Row]:
    net = load_fixture("kansas_sar")
    rows = []
    concor = groups_partition(net, _KS_CONCOR)
    img, pen = per_block_best_penalty(net, concor, ("com", "nul"))
    rows += [Row("CONCOR penalty", 79, pen, "exact"),
             Row("CONCOR corr", 0.5608, evaluate(net, concor, img).correlation)]
    for s, corr in ((1, 0.6856), (2, 0.6811), (3, 0.6831), (4, 0.6813)):
        part, bi = _ks_solution(net, s)
        ev = evaluate(net, part, bi)
        rows += [Row(f"structural optimum {s} penalty", 57, ev.penalty, "exact"),
                 Row(f"structural optimum {s} corr", corr, ev.correlation)]
    for s in (1, 4):
        part, bi = _ks_solution(net, s)
        best = local_search(net, SearchParams(5, restarts=300, seed=11), fixed_blockimage=bi).best
        rows.append(Row(f"prespecified search recovers solution {s}", True,
                        same_groups(best.partition, part), "equal"))
    return rows


_KS_REG2 = [list("ADEFGIKNPQBCJLMRT"), list("HOS")]
_KS_REG3 = [list("ADEFGIKNPQ"), list("BCJLMRT"), list("HOS")]
_KS_ALT3 = [list("ABFGIJNQ"), list("CDEKLMOPRT"), list("HS")]


def _kansas_regular(_ctx) -> list[Row]:
    net = load_fixture("kansas_sar")
    rows = []
    reg2 = groups_partition(net, _KS_REG2)
    img, pen = per_block_best_penalty(net, reg2, ("reg", "nul"))
    rows += [Row("regular k=2 per-block best image", "[reg,nul],[reg,nul]", str(img), "equal"),
             Row("regular k=2 per-block best penalty", 2, pen, "exact")]
    ev = evaluate(net, reg2, [["reg", "nul"], ["reg", "nul"]])
    rows += [Row("regular k=2 arrangement corr", 0.9793, ev.correlation),
             Row("regular k=2 arrangement penalty", 2, ev.penalty, "exact")]
    best = exhaustive_search(net, SearchParams(2, ("reg", "nul"), epsilon_near=0)).best
    rows += [Row("regular k=2 corr-optimum", 0.9793, best.correlation),
             Row("regular k=2 corr-optimum penalty", 2, best.penalty, "exact")]
    bi3 = [["reg", "reg", "nul"], ["reg", "nul", "nul"], ["reg", "reg", "nul"]]
    ev = evaluate(net, groups_partition(net, _KS_REG3), bi3)
    rows += [Row("regular k=3 arrangement corr", 0.9727, ev.correlation),
             Row("regular k=3 arrangement penalty", 4, ev.penalty, "exact")]
    alt = [["reg", "reg", "nul"], ["reg", "reg", "nul"], ["reg", "nul", "nul"]]
    ev = evaluate(net, groups_partition(net, _KS_ALT3), alt)
    rows += [Row("regular k=3 alternative corr", 0.9633, ev.correlation),
             Row("regular k=3 alternative penalty", 4, ev.penalty, "exact")]
    best = local_search(net, SearchParams(3, ("reg", "nul"), restarts=200, seed=3)).best
    rows += [Row("regular k=3 corr-optimum", 0.9727, best.correlation),
             Row("regular k=3 corr-optimum penalty", 4, best.penalty, "exact")]
    return rows


def _kansas_count(_ctx) -> list[Row]:
    net = load_fixture("kansas_sar")
    p = SearchParams(3, ("reg", "nul"), criterion="penalty", epsilon_near=0,
                     exhaustive_limit=10 ** 9)
    n, pool = count_optima(net, p)
    n_nd, pool_nd = count_optima(net, p, drop_degenerate=True)
    return [Row("regular k=3 penalty-optimal count", 2947, n, "exact"),
            Row("regular k=3 optimum penalty", 4, pool.best.penalty, "exact"),
            Row("non-degenerate penalty-optimal count", 2, n_nd, "exact"),
            Row("non-degenerate optimal corrs", [0.9727, 0.9633],
                [s.correlation for s in pool_nd.solutions], "multiset")]


# -- criterion 5: Hlebec -----------------------------------------------------

def _hlebec(_ctx) -> list[Row]:
    net = load_fixture("hlebec")
    part = load_sidecar_partition("hlebec", "reference", net)
    bi = load_sidecar_blockimage("hlebec", "reference")
    rows = [Row("reference arrangement corr", 0.8189, evaluate(net, part, bi).correlation)]
    best = exhaustive_search(net, SearchParams(3, ("reg", "nul"), epsilon_near=0)).best
    rows.append(Row("k=3 {reg,nul} optimal image matches reference", True,
                    same_up_to_relabeling(best.blockimage, bi), "equal"))
    best = local_search(net, SearchParams(4, ("reg", "nul"), restarts=200, seed=5)).best
    rows.append(Row("k=4 {reg,nul} corr-optimum", 0.8967, best.correlation))
    return rows


# -- criterion 6: primates ---------------------------------------------------

def _sex(label: str) -> str:
    return label[0].upper()


def _primates_hypotheses(_ctx) -> list[Row]:
    net = load_fixture("primates")
    cp = [["com", "com"], ["com", "nul"]]
    mf = attribute_partition(net, _sex, ("M", "F"))
    rows = [Row("male core hypothesis", 0.2058, evaluate(net, mf, cp).correlation)]
    best = exhaustive_search(net, SearchParams(2, epsilon_near=0), cp).best
    rows.append(Row("optimal prespecified core-periphery", 0.5463, best.correlation))
    for bi, corr in (([["com", "cre"], ["rre", "nul"]], 0.7556),
                     ([["com", "reg"], ["reg", "nul"]], 0.7836),
                     ([["com", "rre"], ["cre", "nul"]], 0.8903)):
        best = exhaustive_search(net, SearchParams(2, epsilon_near=0), bi).best
        rows.append(Row(f"prespecified {BlockImage.of(bi)}", corr, best.correlation))
    return rows


def _primates_free(_ctx) -> list[Row]:
    net = load_fixture("primates")
    rows = []
    for types, k, corr in ((("com", "nul"), 2, 0.5821), (("com", "nul"), 3, 0.6637),
                           (("com", "nul"), 4, 0.7058), (("reg", "nul"), 2, 0.8894),
                           (("reg", "nul"), 3, 0.8777)):
        p = SearchParams(k, types, epsilon_near=0, restarts=200, seed=k)
        best = (exhaustive_search(net, p) if k == 2 else local_search(net, p)).best
        rows.append(Row(f"{{{','.join(types)}}} k={k} corr-optimum", corr, best.correlation))
    return rows


# -- criterion 7: EIES -------------------------------------------------------

EIES_ENSEMBLE = [["com|reg", "nul|cre", "reg|rre", "nul|rre"],
                 ["nul|rre", "com", "cre", "nul|rre"],
                 ["nul|rre|cre", "nul", "com", "nul"],
                 ["reg", "reg", "nul", "reg|nul"]]
EIES_BEST = [["reg", "nul", "reg", "nul"], ["nul", "com", "cre", "nul"],
             ["rre", "nul", "com", "nul"], ["reg", "reg", "nul", "nul"]]


def _discipline(label: str) -> str:
    return label.rsplit("_", 1)[-1].upper()


def _eies(name, cohesive, regular, best_corr, p_max):
    def run(_ctx) -> list[Row]:
        net = load_fixture(name)
        part = attribute_partition(net, _discipline, ("S", "A", "M", "O"))
        coh = [["com" if i == j else "nul" for j in range(4)] for i in range(4)]
        reg = [["reg" if i == j else "nul" for j in range(4)] for i in range(4)]
        rows = [Row("cohesive discipline hypothesis", cohesive, evaluate(net, part, coh).correlation),
                Row("regular-diagonal variant", regular, evaluate(net, part, reg).correlation),
                Row("ensemble size", 384, len(expand_ensemble(BlockImage.of(EIES_ENSEMBLE))), "exact")]
        pool = local_search(net, SearchParams(4, epsilon_near=0), fixed_partition=part,
                            fixed_blockimage=BlockImage.of(EIES_ENSEMBLE))
        rows.append(Row("best ensemble member corr", best_corr, pool.best.correlation))
        if name == "eies_t1":
            rows.append(Row("best ensemble member image", str(BlockImage.of(EIES_BEST)),
                            str(pool.best.blockimage), "equal"))
        q = qap_test(net, part, coh, iterations=9999, seed=1)
        rows.append(Row("cohesive hypothesis QAP p (9999 permutations)", p_max, q.p_value, "le"))
        return rows
    return run


CASES = [
    Case(1, "point-biserial decomposition", (), _worked_example),
    Case(2, "befig1 core-periphery fits", ("befig1",), _befig1),
    Case(3, "Transatlantic k=2,3 exhaustive", ("transatlantic",), _transatlantic_k23),
    Case(3, "Transatlantic k=4,5 local search", ("transatlantic",), _transatlantic_k45),
    Case(3, "Transatlantic regular arrangements", ("transatlantic",), _transatlantic_regular),
    Case(4, "Kansas SAR structural", ("kansas_sar",), _kansas_structural),
    Case(4, "Kansas SAR regular", ("kansas_sar",), _kansas_regular),
    Case(4, "Kansas SAR penalty-optimal count", ("kansas_sar",), _kansas_count, slow=True),
    Case(5, "Hlebec notesharing", ("hlebec",), _hlebec),
    Case(6, "primates hypotheses", ("primates",), _primates_hypotheses),
    Case(6, "primates free search", ("primates",), _primates_free),
    Case(7, "EIES time 1", ("eies_t1",), _eies("eies_t1", 0.2522, 0.7129, 0.7232, 0.001)),
    Case(7, "EIES time 2", ("eies_t2",), _eies("eies_t2", 0.1770, 0.6920, 0.7076, 0.01)),
]

FIXTURE_CASES = {f for c in CASES for f in c.fixtures}


def select_cases(fixture: str | None = None, criterion: int | None = None) -> list[Case]:
    """Cases touching ``fixture`` (``"all"`` or None for every case) and/or ``criterion``."""
    out = list(CASES)
    if fixture not in (None, "all"):
        if fixture not in FIXTURE_CASES and fixture != "arithmetic":
            raise BlockmodelError(f"no reference values for fixture {fixture!r}")
        out = [c for c in out if fixture in c.fixtures or (fixture == "arithmetic" and not c.fixtures)]
    if criterion is not None:
        out = [c for c in out if c.criterion == criterion]
    return out


def slow_enabled() -> bool:
    return os.environ.get(SLOW_ENV, "") not in ("", "0")


def run_case(case: Case, include_slow: bool | None = None) -> CaseResult:
    if include_slow is None:
        include_slow = slow_enabled()
    if case.slow and not include_slow:
        return CaseResult(case, "SKIP", reason=f"expensive; set {SLOW_ENV}=1 to run")
    for f in case.fixtures:
        ok, why = fixture_status(f)
        if not ok:
            return CaseResult(case, "SKIP", reason=why)
    t = time.perf_counter()
    try:
        rows = case.run({})
    except FixtureUnavailable as exc:
        return CaseResult(case, "SKIP", reason=str(exc))
    except BlockmodelError as exc:
        return CaseResult(case, "ERROR", reason=f"{type(exc).__name__}: {exc}",
                          seconds=time.perf_counter() - t)
    status = "PASS" if all(r.passed for r in rows) else "FAIL"
    return CaseResult(case, status, rows, seconds=time.perf_counter() - t)


def replicate(fixture: str | None = None, criterion: int | None = None,
              include_slow: bool | None = None) -> list[CaseResult]:
    return [run_case(c, include_slow) for c in select_cases(fixture, criterion)]


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.4f}"
    if isinstance(v, list):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def report(results: list[CaseResult]) -> str:
    lines = []
    for res in results:
        head = f"[{res.case.criterion}] {res.status:5s} {res.case.name}"
        if res.seconds:
            head += f" ({res.seconds:.1f}s)"
        if res.reason:
            head += f": {res.reason}"
        lines.append(head)
        for r in res.rows:
            mark = "ok  " if r.passed else "FAIL"
            lines.append(f"    {mark} {r.name}: computed {_fmt(r.computed)}, "
                         f"reference {_fmt(r.expected)} ({r.describe()})")
    return "\n".join(lines) + "\n"


def results_to_dict(results: list[CaseResult]) -> list[dict]:
    return [{"criterion": r.case.criterion, "case": r.case.name, "status": r.status,
             "reason": r.reason,
             "rows": [{"name": x.name, "reference": x.expected, "computed": x.computed,
                       "tolerance": x.describe(), "passed": x.passed} for x in r.rows]}
            for r in results]
