import itertools

import numpy as np
import pytest

from blockcorr import (DataError, SearchLimitExceeded, UndefinedCriterionError, build_network,
                       evaluate, qap_test)
from blockcorr.model import Partition


def enumeration_oracle(net, part, bi):
    """Correlations of every non-identity simultaneous row/column permutation."""
    obs = evaluate(net, part, bi).correlation
    ge = undefined = 0
    for s in itertools.permutations(range(net.n)):
        if list(s) == sorted(s):
            continue
        m = net.values[np.ix_(s, s)]
        ev = evaluate(build_network(net.labels, m, net.directed), part, bi, strict=False)
        if not ev.defined:
            undefined += 1
        elif ev.correlation >= obs - 1e-12:
            ge += 1
    return obs, ge, undefined


def small_network():
    m = np.array([[0, 1, 1, 0], [1, 0, 0, 0], [0, 1, 0, 1], [0, 0, 1, 0]], float)
    return build_network("abcd", m), Partition(np.array([0, 0, 1, 1]), 2)


def test_exact_four_actors_matches_enumeration():
    net, part = small_network()
    bi = [["com", "nul"], ["nul", "com"]]
    obs, ge, undefined = enumeration_oracle(net, part, bi)
    res = qap_test(net, part, bi)
    assert res.exact and res.iterations == 23
    assert res.observed == pytest.approx(obs)
    assert (res.count_ge, res.n_undefined) == (ge, undefined)
    assert res.p_value == (ge + 1) / 24


def test_undefined_draws_are_tallied():
    m = np.zeros((4, 4))
    m[0, 1] = 1
    net = build_network("abcd", m)
    part = Partition(np.array([0, 0, 1, 1]), 2)
    bi = [["com", "dnc"], ["dnc", "nul"]]
    obs, ge, undefined = enumeration_oracle(net, part, bi)
    res = qap_test(net, part, bi)
    assert undefined > 0
    assert (res.count_ge, res.n_undefined) == (ge, undefined)
    assert res.null_summary["undefined"] == undefined


def test_monte_carlo_is_seeded():
    net, part = small_network()
    bi = [["com", "nul"], ["nul", "com"]]
    a = qap_test(net, part, bi, iterations=300, seed=5, exact=False)
    b = qap_test(net, part, bi, iterations=300, seed=5, exact=False)
    assert a == b and not a.exact and a.seed == 5
    assert 0 < a.p_value <= 1


def test_p_value_never_zero(befig1):
    from conftest import groups
    part = groups(befig1, [1, 2, 3, 4], "...")
    res = qap_test(befig1, part, [["com", "dnc"], ["dnc", "nul"]], iterations=99, seed=0)
    assert res.observed == pytest.approx(1.0)
    assert res.p_value >= 1 / 100


def test_undefined_observed_raises():
    net, part = small_network()
    with pytest.raises(UndefinedCriterionError):
        qap_test(net, part, [["nul", "nul"], ["nul", "nul"]])


def test_exact_limit_and_iterations_validation(befig1):
    from conftest import groups
    part = groups(befig1, [1, 2, 3, 4], "...")
    with pytest.raises(SearchLimitExceeded):
        qap_test(befig1, part, [["com", "nul"], ["nul", "nul"]], exact=True)
    with pytest.raises(DataError):
        qap_test(befig1, part, [["com", "nul"], ["nul", "nul"]], iterations=0, exact=False)
