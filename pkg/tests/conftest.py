import numpy as np
import pytest

from blockcorr import build_network, load_fixture, make_partition
from blockcorr.model import Partition


@pytest.fixture(scope="session")
def befig1():
    return load_fixture("befig1")


@pytest.fixture(scope="session")
def transatlantic():
    return load_fixture("transatlantic")


def groups(network, *gs):
    """Partition from groups of label keys; '...' as the last group takes the rest."""
    gs = [list(map(str, g)) if g != "..." else g for g in gs]
    if gs[-1] == "...":
        used = {x for g in gs[:-1] for x in g}
        gs[-1] = [lab for lab in network.labels if lab not in used]
    return make_partition(gs, network)


def off_diagonal(block):
    """Network and view whose (0, 1) block holds ``block``."""
    block = np.asarray(block, dtype=float)
    r, c = block.shape
    m = np.zeros((r + c, r + c))
    m[:r, r:] = block
    net = build_network(range(r + c), m)
    part = Partition(np.array([0] * r + [1] * c), 2)
    return net, part


def diagonal(block):
    """Network and partition whose (0, 0) block holds ``block`` (one spare actor in position 1)."""
    block = np.asarray(block, dtype=float)
    n = block.shape[0]
    m = np.zeros((n + 1, n + 1))
    m[:n, :n] = block
    net = build_network(range(n + 1), m)
    part = Partition(np.array([0] * n + [1]), 2)
    return net, part


def random_network(rng, n, binary=True, directed=True, density=0.4):
    if binary:
        m = (rng.random((n, n)) < density).astype(float)
    else:
        m = rng.integers(0, 5, (n, n)).astype(float)
    if not directed:
        m = np.triu(m, 1)
        m = m + m.T
    np.fill_diagonal(m, 0)
    return build_network(range(1, n + 1), m, directed=directed)
