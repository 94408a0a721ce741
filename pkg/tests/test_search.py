import itertools
import math

import numpy as np
import pytest

from blockcorr import (BlockImage, SearchLimitExceeded, SearchParams, UndefinedCriterionError,
                       build_network, count_optima, enumerate_blockimages, enumerate_partitions,
                       evaluate, exhaustive_search, expand_ensemble, local_search, penalty,
                       stirling)
from blockcorr import BlockType, block_penalty, block_view
from blockcorr.model import Partition
from blockcorr.search import _rgs_array, _rgs_chunks
from blockcorr.replicate import EIES_ENSEMBLE

from conftest import groups


def core_of(net, sol, pos=0):
    return sorted(net.labels[a] for a in sol.partition.groups()[pos])


def surjections_over_factorial(n, k):
    # inclusion-exclusion count of onto maps, divided by k!
    onto = sum((-1) ** j * math.comb(k, j) * (k - j) ** n for j in range(k + 1))
    return onto // math.factorial(k)


@pytest.mark.parametrize("n,k,count", [(4, 2, 7), (10, 2, 511), (5, 5, 1), (6, 3, 90)])
def test_enumerate_partitions_counts(n, k, count):
    parts = list(enumerate_partitions(n, k))
    assert len(parts) == count == stirling(n, k)
    assert len({p.key() for p in parts}) == count
    assert all(p.canonical()[0] == p for p in parts)


def test_partition_count_n13_k3():
    assert sum(1 for _ in enumerate_partitions(13, 3)) == surjections_over_factorial(13, 3)


def test_enumerate_partitions_k_above_n():
    with pytest.raises(Exception):
        list(enumerate_partitions(3, 4))


def test_blockimage_counts():
    assert len(enumerate_blockimages(2, ["com", "nul"], drop_trivial=True)) == 14
    assert len(enumerate_blockimages(2, ["reg", "nul"], drop_trivial=True)) == 14
    assert len(enumerate_blockimages(2, ["com", "nul"], drop_trivial=False)) == 16


def test_blockimage_dedupe_matches_orbit_oracle():
    grids = [((a, b), (c, d)) for a, b, c, d in itertools.product(["com", "nul"], repeat=4)]
    grids = [g for g in grids if len({x for r in g for x in r}) > 1]
    orbits = {frozenset([g, ((g[1][1], g[1][0]), (g[0][1], g[0][0]))]) for g in grids}
    got = enumerate_blockimages(2, ["com", "nul"], dedupe_relabeling=True)
    assert len(got) == len(orbits) == 8
    seen = {frozenset([tuple(map(tuple, b.codes())), tuple(map(tuple, b.relabeled([1, 0]).codes()))])
            for b in got}
    assert seen == orbits


def test_drop_degenerate():
    keep = {str(b) for b in enumerate_blockimages(3, ["reg", "nul"], drop_degenerate=True)}
    every = {str(b) for b in enumerate_blockimages(3, ["reg", "nul"])}
    # positions 2 and 3 identical in both rows and columns
    assert "[reg,reg,nul],[reg,reg,nul],[reg,reg,nul]" in every - keep
    assert "[reg,reg,nul],[reg,nul,nul],[reg,reg,nul]" in keep
    assert len(every) - len(keep) > 0


def test_expand_ensemble():
    assert len(expand_ensemble(BlockImage.of(EIES_ENSEMBLE))) == 384
    bi = BlockImage.of([["com", "nul"], ["reg", "nul"]])
    assert expand_ensemble(bi) == [bi]
    assert len(expand_ensemble(BlockImage.of([["com|nul"] * 2] * 2))) == 16


def test_befig1_exhaustive_structural(befig1):
    pool = exhaustive_search(befig1, SearchParams(2, ("com", "nul"), epsilon_near=0.05))
    assert pool.optimum_is_proven
    best = pool.best
    assert best.correlation == pytest.approx(0.5837, abs=5e-4)
    assert core_of(befig1, best) == ["1", "2", "3", "4"]
    assert best.blockimage.codes() == [["com", "nul"], ["nul", "nul"]]
    near = {tuple(core_of(befig1, s)): s.correlation for s in pool.solutions[1:3]}
    assert set(near) == {("1", "2", "3", "4", "5"), ("1", "2", "3", "4", "8")}
    assert all(c == pytest.approx(0.5645, abs=5e-4) for c in near.values())


def test_befig1_exhaustive_generalized(befig1):
    pool = exhaustive_search(befig1, SearchParams(2, ("com", "reg", "nul"), epsilon_near=0))
    assert len(pool) == 2
    assert all(s.correlation == pytest.approx(1.0) and s.penalty == 0 for s in pool.solutions)
    found = {}
    for s in pool.solutions:
        types = s.blockimage.codes()
        core = next(i for i in range(2) if types[i][i] != "nul")
        found[tuple(core_of(befig1, s, core))] = types[core][core]
    assert found == {("1", "2", "3", "4"): "com", ("2", "3", "4", "5"): "reg"}


def test_befig1_fixed_blockimage_orientation(befig1):
    # the image is given with the periphery first; results keep that orientation
    bi = [["nul", "com"], ["com", "com"]]
    best = exhaustive_search(befig1, SearchParams(2, epsilon_near=0), bi).best
    assert best.blockimage.codes() == bi
    assert core_of(befig1, best, pos=1) == ["2", "3", "4"]
    assert best.correlation == pytest.approx(0.5324, abs=5e-4)


def test_count_optima_befig1(befig1):
    n, pool = count_optima(befig1, SearchParams(2, criterion="penalty", epsilon_near=0),
                           [["com", "nul"], ["nul", "nul"]])
    assert n == 3 and pool.best.penalty == 16
    cores = sorted(tuple(core_of(befig1, s)) for s in pool.solutions)
    assert cores == [("1", "2", "3", "4"), ("1", "2", "3", "4", "5"), ("1", "2", "3", "4", "8")]


def dyads():
    m = np.zeros((4, 4))
    m[0, 1] = m[1, 0] = m[2, 3] = m[3, 2] = 1
    return build_network("1234", m, directed=False)


def brute_force_optimal_orbits(net, image):
    """Optimal (labels, image) arrangements up to simultaneous relabeling."""
    k = len(image)
    arrangements = []
    for lab in itertools.product(range(k), repeat=net.n):
        if len(set(lab)) < k:
            continue
        for p in itertools.permutations(range(k)):
            img = BlockImage.of(image).relabeled(p)
            arrangements.append((lab, img))
    scored = [(penalty(net, Partition(np.array(lab), k), img), lab, img) for lab, img in arrangements]
    best = min(s for s, _, _ in scored)
    orbits = set()
    for s, lab, img in scored:
        if s != best:
            continue
        orbit = frozenset((tuple(q[a] for a in lab), str(img.relabeled(q)))
                          for q in itertools.permutations(range(k)))
        orbits.add(orbit)
    return best, len(orbits)


def test_count_optima_two_dyads_matches_brute_force():
    net = dyads()
    image = [["com", "nul"], ["nul", "nul"]]
    best, orbits = brute_force_optimal_orbits(net, image)
    n, pool = count_optima(net, SearchParams(2, criterion="penalty", epsilon_near=0), image)
    assert (pool.best.penalty, n) == (best, orbits)
    assert n == 2


def per_block_optimal_count(net, k, types):
    # penalties add over blocks: ties multiply within a partition
    best, total = None, 0
    for part in enumerate_partitions(net.n, k):
        cost, ties = 0, 1
        for i in range(k):
            for j in range(k):
                view = block_view(net, part, i, j)
                ps = [block_penalty(net, view, BlockType.parse(t)) for t in types]
                cost += min(ps)
                ties *= ps.count(min(ps))
        if best is None or cost < best:
            best, total = cost, ties
        elif cost == best:
            total += ties
    return best, total


@pytest.mark.parametrize("seed,k,types", [(0, 2, ["com", "reg", "nul"]), (1, 3, ["reg", "nul"]),
                                          (2, 3, ["com", "reg", "nul"])])
def test_count_optima_penalty_matches_per_block_oracle(seed, k, types):
    rng = np.random.default_rng(seed)
    net = build_network([str(i) for i in range(7)], (rng.random((7, 7)) < 0.35).astype(float))
    n, pool = count_optima(net, SearchParams(k, allowed_types=types, criterion="penalty"))
    assert (pool.best.penalty, n) == per_block_optimal_count(net, k, types)


def test_rgs_chunks_preserve_order():
    for n, k, rows in [(8, 3, 50), (9, 4, 100), (10, 2, 7), (7, 7, 1)]:
        whole = _rgs_array(n, k)
        chunks = list(_rgs_chunks(n, k, rows))
        assert len(chunks) > 1 or len(whole) <= rows
        assert np.array_equal(np.concatenate(chunks), whole)


def test_exhaustive_limit(transatlantic):
    with pytest.raises(SearchLimitExceeded):
        exhaustive_search(transatlantic, SearchParams(3, exhaustive_limit=1000))


def test_trivial_fixed_blockimage_is_undefined(befig1):
    nul = [["nul", "nul"], ["nul", "nul"]]
    with pytest.raises(UndefinedCriterionError):
        exhaustive_search(befig1, SearchParams(2), nul)
    with pytest.raises(UndefinedCriterionError):
        local_search(befig1, SearchParams(2, restarts=3), fixed_blockimage=nul)


def test_transatlantic_k2(transatlantic):
    c = exhaustive_search(transatlantic, SearchParams(2, epsilon_near=0))
    p = exhaustive_search(transatlantic, SearchParams(2, criterion="penalty", epsilon_near=0))
    assert c.best.correlation == pytest.approx(0.4046, abs=5e-4)
    assert c.best.penalty == 29 and p.best.penalty == 29


def test_local_search_deterministic(transatlantic):
    params = SearchParams(3, restarts=8, seed=42)
    a = local_search(transatlantic, params)
    b = local_search(transatlantic, params)
    assert [(s.partition, str(s.blockimage)) for s in a.solutions] == \
           [(s.partition, str(s.blockimage)) for s in b.solutions]
    assert not a.optimum_is_proven


def test_local_search_matches_exhaustive_on_befig1(befig1):
    ls = local_search(befig1, SearchParams(2, restarts=20, seed=1))
    ex = exhaustive_search(befig1, SearchParams(2))
    assert ls.best.correlation == pytest.approx(ex.best.correlation, abs=1e-12)
    assert ls.best.partition == ex.best.partition


def test_local_search_fixed_partition_enumerates(befig1):
    p = groups(befig1, [1, 2, 3, 4], "...")
    pool = local_search(befig1, SearchParams(2, ("com", "reg", "nul")), fixed_partition=p)
    assert pool.optimum_is_proven
    assert pool.best.partition == p
    assert pool.best.correlation == pytest.approx(1.0)
    assert str(pool.best.blockimage) == "[com,reg],[reg,nul]"


def test_local_search_fixed_partition_and_ensemble(befig1):
    p = groups(befig1, [1, 2, 3, 4], "...")
    ens = BlockImage.of([["com", "nul|reg"], ["nul|reg", "nul"]])
    pool = local_search(befig1, SearchParams(2, epsilon_near=0), fixed_partition=p,
                        fixed_blockimage=ens)
    assert str(pool.best.blockimage) == "[com,reg],[reg,nul]"


def test_penalty_local_search_uses_separable_choice(transatlantic):
    pool = local_search(transatlantic, SearchParams(2, ("com", "reg", "nul"), criterion="penalty",
                                                    restarts=20, seed=3))
    best = pool.best
    assert best.penalty == penalty(transatlantic, best.partition, best.blockimage)
    assert best.penalty <= 3


def test_pool_epsilon_band(befig1):
    pool = exhaustive_search(befig1, SearchParams(2, epsilon_near=0.05))
    top = pool.solutions[0].correlation
    assert all(s.correlation >= top * 0.95 - 1e-12 for s in pool.solutions)
    tight = exhaustive_search(befig1, SearchParams(2, epsilon_near=0))
    assert len(tight) == 1


def test_pool_cap(befig1):
    pool = exhaustive_search(befig1, SearchParams(2, epsilon_near=0.9, pool_cap=5))
    assert len(pool) == 5
    scores = [s.correlation for s in pool.solutions]
    assert scores == sorted(scores, reverse=True)


def test_solutions_rescored_by_reference(befig1):
    pool = exhaustive_search(befig1, SearchParams(2, ("com", "reg", "nul"), epsilon_near=0.1))
    for s in pool.solutions:
        ev = evaluate(befig1, s.partition, s.blockimage)
        assert s.correlation == ev.correlation and s.penalty == ev.penalty


@pytest.mark.parametrize("bad", [dict(k=1), dict(k=2, restarts=0), dict(k=2, epsilon_near=1.5),
                                 dict(k=2, criterion="bogus"), dict(k=2, allowed_types=())])
def test_params_validation(bad):
    with pytest.raises(Exception):
        SearchParams(**bad)
