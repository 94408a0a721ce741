"""Bundled and externally supplied example networks.

Two small networks ship with the package. The larger published datasets
are not redistributed; put them in the directory named by
``BLOCKCORR_FIXTURE_DIR`` with :func:`register_fixture`, which records a
SHA-256 digest that every later load checks.
"""

from __future__ import annotations

import hashlib
import json
import os
import shutil
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import DataError
from .io import parse_blockimage, parse_network, parse_partition
from .model import BlockImage, Network, Partition

FIXTURE_ENV = "BLOCKCORR_FIXTURE_DIR"
MANIFEST = "digests.json"


class FixtureUnavailable(DataError):
    """An external fixture is missing or fails its digest check."""


@dataclass(frozen=True)
class FixtureInfo:
    name: str
    directed: bool
    embedded: bool
    description: str
    sidecars: tuple[str, ...] = ()


FIXTURES = {
    "befig1": FixtureInfo("befig1", False, True,
                          "10-actor symmetric core-periphery illustration"),
    "transatlantic": FixtureInfo("transatlantic", True, True,
                                 "Transatlantic Industries Little League friendship nominations"),
    "kansas_sar": FixtureInfo("kansas_sar", True, False,
                              "Kansas search-and-rescue communication network, actors A-T"),
    "hlebec": FixtureInfo("hlebec", True, False, "Hlebec valued notesharing network",
                          ("reference.part", "reference.bi")),
    "primates": FixtureInfo("primates", False, False,
                            "Florida primates co-presence counts, labels M*/F* by sex"),
    "eies_t1": FixtureInfo("eies_t1", True, False,
                           "EIES friendship, time 1 (0-4), labels suffixed _S/_A/_M/_O"),
    "eies_t2": FixtureInfo("eies_t2", True, False,
                           "EIES friendship, time 2 (0-4), labels suffixed _S/_A/_M/_O"),
}


def fixture_dir() -> Path | None:
    d = os.environ.get(FIXTURE_ENV)
    return Path(d) if d else None


def _digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _manifest(d: Path) -> dict:
    p = d / MANIFEST
    return json.loads(p.read_text()) if p.exists() else {}


def _info(name: str) -> FixtureInfo:
    try:
        return FIXTURES[name]
    except KeyError:
        raise DataError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}") from None


def _verified(d: Path | None, filename: str) -> Path:
    if d is None:
        raise FixtureUnavailable(f"{filename}: {FIXTURE_ENV} is not set")
    path = d / filename
    if not path.exists():
        raise FixtureUnavailable(f"{filename}: not found in {d}")
    want = _manifest(d).get(filename)
    if want is None:
        raise FixtureUnavailable(f"{filename}: no recorded digest in {d / MANIFEST}")
    if _digest(path) != want:
        raise FixtureUnavailable(f"{filename}: digest mismatch")
    return path


def load_fixture(name: str) -> Network:
    """Load a fixture network by name.

    Raises
    ------
    FixtureUnavailable
        For an external fixture that is absent or fails its digest.
    """
    info = _info(name)
    if info.embedded:
        text = resources.files("blockcorr").joinpath("data", f"{name}.csv").read_text()
        return parse_network(text, directed=info.directed)
    path = _verified(fixture_dir(), f"{name}.csv")
    return parse_network(path, directed=info.directed)


def load_sidecar_partition(name: str, which: str, network: Network) -> Partition:
    """A partition stored next to an external fixture as ``<name>.<which>.part``."""
    _info(name)
    return parse_partition(_verified(fixture_dir(), f"{name}.{which}.part"), network)


def load_sidecar_blockimage(name: str, which: str) -> BlockImage:
    """A blockimage stored next to an external fixture as ``<name>.<which>.bi``."""
    _info(name)
    return parse_blockimage(_verified(fixture_dir(), f"{name}.{which}.bi").read_text())


def fixture_status(name: str) -> tuple[bool, str]:
    """Whether a fixture (and its sidecars) can be loaded, with the reason if not."""
    info = _info(name)
    if info.embedded:
        return True, "embedded"
    d = fixture_dir()
    try:
        _verified(d, f"{name}.csv")
        for s in info.sidecars:
            _verified(d, f"{name}.{s}")
    except FixtureUnavailable as exc:
        return False, str(exc)
    return True, f"verified in {d}"


def register_fixture(name: str, source, kind: str = "csv", directory=None) -> Path:
    """Copy a data file into the fixture directory and record its digest.

    ``kind`` is ``"csv"`` for the matrix or a sidecar such as
    ``"reference.part"``. A matrix is parsed first so that malformed data is
    rejected before its digest is recorded.
    """
    info = _info(name)
    if info.embedded:
        raise DataError(f"{name} is embedded in the package")
    d = Path(directory) if directory is not None else fixture_dir()
    if d is None:
        raise DataError(f"no fixture directory: pass one or set {FIXTURE_ENV}")
    d.mkdir(parents=True, exist_ok=True)
    filename = f"{name}.{kind}"
    if kind == "csv":
        parse_network(Path(source), directed=info.directed)
    dest = d / filename
    if Path(source).resolve() != dest.resolve():
        shutil.copyfile(source, dest)
    manifest = _manifest(d)
    manifest[filename] = _digest(dest)
    (d / MANIFEST).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return dest
