import json

import numpy as np
import pytest

from blockcorr import (BlockImage, DataError, FixtureUnavailable, ResultDocument, SolutionRecord,
                       evaluate, fixture_status, format_partition, load_fixture, parse_blockimage,
                       parse_network, parse_partition, register_fixture, render_blockmodel)
from blockcorr.fixtures import FIXTURE_ENV, MANIFEST, load_sidecar_blockimage
from blockcorr.io import network_digest, parse_rendered_order, solution_record

from conftest import groups


def test_bundled_fixtures(befig1, transatlantic):
    assert befig1.n == 10 and not befig1.directed and befig1.is_binary
    assert transatlantic.n == 13 and transatlantic.directed
    assert np.array_equal(befig1.values, befig1.values.T)


@pytest.mark.parametrize("text", [
    "a,b,c\na,0,1,0\nb,1,0,1\nc,0,0,0",
    ",a,b,c\na,0,1,0\nb,1,0,1\nc,0,0,0",
    "a b c\na 0 1 0\nb 1 0 1\nc 0 0 0",
    "a\tb\tc\na\t0\t1\t0\nb\t1\t0\t1\nc\t0\t0\t0",
    "a,NA,1,0\nb,1,,1\nc,0,0,.",
])
def test_parse_network_variants(text):
    net = parse_network(text)
    assert list(net.labels) == ["a", "b", "c"]
    assert net.values[0, 1] == 1 and net.values[1, 2] == 1 and net.values[2, 0] == 0


def test_parse_network_without_labels():
    net = parse_network("0 1\n1 0")
    assert list(net.labels) == ["1", "2"]


def test_parse_network_comments_and_blank_lines():
    net = parse_network("# two actors\n\n0 1\n\n1 0\n")
    assert net.n == 2


@pytest.mark.parametrize("text,msg", [
    ("0,1,0\n1,0\n0,0,0", "ragged"),
    ("0,1,0\n1,x,1\n0,0,0", "non-numeric"),
    ("0,NA,0\n1,0,1\n0,0,0", "non-numeric"),
    ("\n\n", "empty"),
])
def test_parse_network_errors(text, msg):
    with pytest.raises(DataError, match=msg):
        parse_network(text)


def test_missing_diagonal_with_self_ties():
    with pytest.raises(DataError, match="diagonal"):
        parse_network("NA,1\n1,NA", self_ties=True)


def test_parse_network_missing_file(tmp_path):
    with pytest.raises(DataError, match="no such file"):
        parse_network(str(tmp_path / "absent.csv"))


def test_parse_network_from_path(tmp_path):
    p = tmp_path / "m.csv"
    p.write_text(",x,y\nx,0,2.5\ny,1,0\n")
    net = parse_network(p)
    assert not net.is_binary and net.values[0, 1] == 2.5


@pytest.mark.parametrize("text", ["com nul; nul nul", "com,nul\nnul,nul", "[com,nul],[nul,nul]"])
def test_parse_blockimage_forms(text):
    assert parse_blockimage(text) == BlockImage.of([["com", "nul"], ["nul", "nul"]])


def test_parse_blockimage_ensemble():
    bi = parse_blockimage("com com|reg; com|reg nul")
    assert not bi.is_fixed
    assert bi.n_alternatives() == 4


def test_parse_blockimage_not_square():
    with pytest.raises(DataError):
        parse_blockimage("com nul; nul")


def test_parse_partition_forms(befig1):
    a = parse_partition("1,2,3,4;5,6,7,8,9,10", befig1)
    b = parse_partition("\n".join(f"{i}\t{1 if i <= 4 else 2}" for i in range(1, 11)), befig1)
    c = parse_partition("\n".join(f"{i} {'core' if i <= 4 else 'rest'}" for i in range(1, 11)),
                        befig1)
    assert a == b == c
    assert format_partition(befig1, a) == "1,2,3,4;5,6,7,8,9,10"


def test_parse_partition_numeric_order(befig1):
    lines = [f"{i}\t{10 if i <= 4 else 2}" for i in range(1, 11)]
    part = parse_partition("\n".join(lines), befig1)
    assert format_partition(befig1, part) == "5,6,7,8,9,10;1,2,3,4"


def test_parse_partition_errors(befig1):
    with pytest.raises(DataError):
        parse_partition("1,2,3;4,5,6,7,8,9,99", befig1)
    with pytest.raises(DataError):
        parse_partition("1,2,3,4;5,6,7,8,9", befig1)


def test_render_layout(befig1):
    part = groups(befig1, [1, 2, 3, 4], "...")
    text = render_blockmodel(befig1, part, [["com", "com"], ["com", "nul"]])
    lines = text.splitlines()
    header = lines[1]
    assert header.split("|")[1].split() == ["1", "2", "3", "4"]
    assert header.split("|")[2].split() == ["5", "6", "7", "8", "9", "10"]
    row1 = next(ln for ln in lines if ln.strip().startswith("1 |"))
    assert row1.split("|")[1].split()[0] == "."
    # ties missing from the complete off-diagonal block are starred
    assert row1.split("|")[2].split() == ["1", "0*", "0*", "0*", "0*", "0*"]
    assert "  (1,2) com density=0.3333 weight=24 penalty=16" in lines
    assert parse_rendered_order(text) == [["1", "2", "3", "4"], ["5", "6", "7", "8", "9", "10"]]


def test_render_singleton_diagonal_block(befig1):
    part = groups(befig1, [1], "...")
    text = render_blockmodel(befig1, part, [["com", "com"], ["com", "nul"]])
    assert "  (1,1) -" in text.splitlines()


def test_render_round_trip(transatlantic):
    part = groups(transatlantic, ["Jeff_7", "Jay_8", "Sandy_9"], "...")
    text = render_blockmodel(transatlantic, part, [["com", "nul"], ["nul", "reg"]])
    back = parse_partition(";".join(",".join(g) for g in parse_rendered_order(text)),
                           transatlantic)
    assert back == part


def test_render_needs_order_line():
    with pytest.raises(DataError):
        parse_rendered_order("no order here")


def _document(net, part, image):
    ev = evaluate(net, part, image)
    rec = solution_record(net, part, BlockImage.of(image), ev, "evaluate")
    return ResultDocument("evaluate", {"k": 2}, None, network_digest(net), [rec])


def test_result_document_round_trip(befig1):
    part = groups(befig1, [1, 2, 3, 4], "...")
    doc = _document(befig1, part, [["com", "nul"], ["nul", "nul"]])
    text = doc.to_json()
    back = ResultDocument.from_json(text)
    assert back == doc
    assert back.to_json() == text
    sol = json.loads(text)["solutions"][0]
    assert sol["correlation_4dp"] == "0.5837" and sol["penalty"] == 16
    assert isinstance(back.solutions[0], SolutionRecord)


def test_result_document_is_reproducible(befig1):
    part = groups(befig1, [1, 2, 3, 4], "...")
    image = [["com", "com"], ["com", "nul"]]
    assert _document(befig1, part, image).to_json() == _document(befig1, part, image).to_json()


def test_network_digest_tracks_data(befig1, transatlantic):
    assert network_digest(befig1) == network_digest(load_fixture("befig1"))
    assert network_digest(befig1) != network_digest(transatlantic)


# -- external fixtures ---------------------------------------------------------

def _write_matrix(path, n=4):
    rows = [",".join([""] + [f"a{j}" for j in range(n)])]
    for i in range(n):
        rows.append(",".join([f"a{i}"] + ["1" if (i + j) % 2 else "0" for j in range(n)]))
    path.write_text("\n".join(rows) + "\n")
    return path


def test_external_fixture_unset(monkeypatch):
    monkeypatch.delenv(FIXTURE_ENV, raising=False)
    ok, why = fixture_status("kansas_sar")
    assert not ok and FIXTURE_ENV in why
    with pytest.raises(FixtureUnavailable):
        load_fixture("kansas_sar")


def test_register_and_verify(tmp_path, monkeypatch):
    src = _write_matrix(tmp_path / "src.csv")
    store = tmp_path / "store"
    monkeypatch.setenv(FIXTURE_ENV, str(store))
    dest = register_fixture("kansas_sar", src)
    assert dest == store / "kansas_sar.csv"
    assert "kansas_sar.csv" in json.loads((store / MANIFEST).read_text())
    assert fixture_status("kansas_sar")[0]
    assert load_fixture("kansas_sar").n == 4


def test_digest_mismatch(tmp_path, monkeypatch):
    store = tmp_path / "store"
    monkeypatch.setenv(FIXTURE_ENV, str(store))
    register_fixture("eies_t1", _write_matrix(tmp_path / "src.csv"))
    path = store / "eies_t1.csv"
    path.write_text(path.read_text().replace("a0,0", "a0,1", 1))
    ok, why = fixture_status("eies_t1")
    assert not ok and "digest" in why
    with pytest.raises(FixtureUnavailable, match="digest"):
        load_fixture("eies_t1")


def test_unregistered_file_is_unavailable(tmp_path, monkeypatch):
    monkeypatch.setenv(FIXTURE_ENV, str(tmp_path))
    _write_matrix(tmp_path / "primates.csv")
    ok, why = fixture_status("primates")
    assert not ok and "digest" in why


def test_sidecars_are_required(tmp_path, monkeypatch):
    store = tmp_path / "store"
    monkeypatch.setenv(FIXTURE_ENV, str(store))
    register_fixture("hlebec", _write_matrix(tmp_path / "src.csv"))
    assert not fixture_status("hlebec")[0]
    part = tmp_path / "p.txt"
    part.write_text("a0,a1;a2,a3\n")
    bi = tmp_path / "b.txt"
    bi.write_text("reg nul; nul reg\n")
    register_fixture("hlebec", part, kind="reference.part")
    register_fixture("hlebec", bi, kind="reference.bi")
    assert fixture_status("hlebec")[0]
    assert load_sidecar_blockimage("hlebec", "reference") == parse_blockimage("reg nul; nul reg")


def test_register_rejects_bad_data(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("0,1\n1\n")
    with pytest.raises(DataError):
        register_fixture("kansas_sar", bad, directory=tmp_path / "store")
    assert not (tmp_path / "store" / MANIFEST).exists()


def test_register_embedded_refused(tmp_path):
    with pytest.raises(DataError):
        register_fixture("befig1", _write_matrix(tmp_path / "m.csv"), directory=tmp_path)


def test_unknown_fixture():
    with pytest.raises(DataError, match="unknown fixture"):
        load_fixture("nope")
