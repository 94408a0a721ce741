import numpy as np
import pytest

from blockcorr import BlockImage, BlockType, DataError, block_view, build_network, make_partition
from blockcorr.model import Partition

from conftest import groups


def test_befig1_network(befig1):
    assert befig1.n == 10
    assert not befig1.self_ties_defined
    assert not befig1.directed
    assert befig1.is_binary


def test_one_by_one_network():
    net = build_network(["a"], [[0]], directed=True)
    assert net.n == 1
    assert net.checkable_values().sum() == 0


def test_asymmetry_reported_with_indices():
    m = np.zeros((3, 3))
    m[0, 1], m[1, 0] = 2, 1
    with pytest.raises(DataError, match=r"asymmetry at \(0,1\)"):
        build_network("abc", m, directed=False)


@pytest.mark.parametrize("labels,matrix,msg", [
    ("ab", np.zeros((3, 3)), "labels"),
    ("abc", -np.ones((3, 3)), r"negative value at \(0,1\)"),
    ("aab", np.zeros((3, 3)), "duplicate"),
    ("ab", np.zeros((2, 3)), "square"),
])
def test_build_network_errors(labels, matrix, msg):
    with pytest.raises(DataError, match=msg):
        build_network(labels, matrix)


def test_diagonal_ignored_without_self_ties():
    net = build_network("ab", [[5, 1], [0, 7]])
    assert net.values[0, 0] == 0 and net.values[1, 1] == 0
    assert net.is_binary


def test_make_partition(befig1):
    p = groups(befig1, [1, 2, 3, 4], "...")
    assert p.k == 2
    assert p.sizes().tolist() == [4, 6]


def test_single_group_rejected(befig1):
    with pytest.raises(DataError):
        make_partition([list(befig1.labels)], befig1)


def test_singletons_allowed():
    net = build_network("abc", np.zeros((3, 3)))
    p = make_partition([["a"], ["b"], ["c"]], net)
    assert p.k == 3 and p.sizes().tolist() == [1, 1, 1]


@pytest.mark.parametrize("gs,msg", [
    ([["a", "z"], ["b", "c"]], "unknown"),
    ([["a", "b"], ["b", "c"]], "more than one"),
    ([["a"], [], ["b", "c"]], "empty"),
    ([["a"], ["b"]], "not in any group"),
])
def test_make_partition_errors(gs, msg):
    net = build_network("abc", np.zeros((3, 3)))
    with pytest.raises(DataError, match=msg):
        make_partition(gs, net)


def test_block_view_cells(befig1):
    p = groups(befig1, [1, 2, 3, 4], "...")
    assert block_view(befig1, p, 0, 1).checkable_cells == 24
    assert block_view(befig1, p, 0, 0).checkable_cells == 12
    single = groups(befig1, [1], "...")
    assert block_view(befig1, single, 0, 0).checkable_cells == 0
    with pytest.raises(IndexError):
        block_view(befig1, p, 2, 0)


def test_block_view_with_self_ties():
    net = build_network("abc", np.ones((3, 3)), self_ties_defined=True)
    p = Partition(np.array([0, 0, 1]), 2)
    assert block_view(net, p, 0, 0).checkable_cells == 4
    assert block_view(net, p, 1, 1).checkable_cells == 1


def test_partition_canonical_and_relabel():
    p = Partition(np.array([2, 0, 2, 1]), 3)
    c, perm = p.canonical()
    assert c.assignment.tolist() == [0, 1, 0, 2]
    assert p.relabeled(perm) == c


def test_blockimage_from_text():
    grid = BlockImage.of([["com", "reg|nul"], ["nul", "dnc"]])
    assert BlockImage.of("com reg|nul; nul dnc") == grid
    assert BlockImage.of(grid) is grid


def test_blockimage_parsing_and_relabeling():
    bi = BlockImage.of([["com", "reg|nul"], ["nul", "dnc"]])
    assert not bi.is_fixed
    assert bi.n_alternatives() == 2
    assert bi.cells[0][1] == (BlockType.REG, BlockType.NUL)
    assert BlockImage.of([["com", "nul"], ["nul", "reg"]])[1, 1] == BlockType.REG
    swapped = bi.relabeled([1, 0])
    assert swapped.codes() == [["dnc", "nul"], ["reg|nul", "com"]]
    with pytest.raises(DataError):
        BlockImage.of([["com", "xyz"], ["nul", "nul"]])
    with pytest.raises(DataError):
        BlockImage.of([["com|com", "nul"], ["nul", "nul"]])
