"""Reference dataset registry (SNAP temporal networks).

Files are cached under the directory named by the CHRONOPATH_DATA
environment variable (default ./data).  Fetching needs ordinary internet
access; in offline environments drop the files into the cache directory by
hand and everything else works the same.
"""

import gzip
import os
import urllib.request
from dataclasses import dataclass
from pathlib import Path

from .errors import DatasetMissingError
from .ingest import DatasetFormat, TemporalGraph, parse_edge_list


@dataclass(frozen=True)
class DatasetSpec:
    name: str
    url: str
    filename: str
    format_kind: str
    signed_weight_policy: str = "reject"
    expected_vertices: int | None = None
    expected_edges: int | None = None

    def format(self) -> DatasetFormat:
        return DatasetFormat(
            kind=self.format_kind,
            signed_weight_policy=self.signed_weight_policy,
        )


REGISTRY = {
    "email-eu-core": DatasetSpec(
        name="email-eu-core",
        url="https://snap.stanford.edu/data/email-Eu-core-temporal.txt.gz",
        filename="email-Eu-core-temporal.txt",
        format_kind="whitespace-triple",
        expected_vertices=986,
        expected_edges=332334,
    ),
    "bitcoin-otc": DatasetSpec(
        name="bitcoin-otc",
        url="https://snap.stanford.edu/data/soc-sign-bitcoinotc.csv.gz",
        filename="soc-sign-bitcoinotc.csv",
        format_kind="csv-quad",
        signed_weight_policy="absolute",
        expected_vertices=5881,
        expected_edges=35592,
    ),
}


def data_dir() -> Path:
    return Path(os.environ.get("CHRONOPATH_DATA", "data"))


def dataset_path(name: str) -> Path:
    spec = REGISTRY.get(name)
    if spec is None:
        raise DatasetMissingError(f"unknown dataset {name!r}; "
                                  f"known: {sorted(REGISTRY)}")
    return data_dir() / spec.filename


def is_available(name: str) -> bool:
    try:
        return dataset_path(name).exists()
    except DatasetMissingError:
        return False


def fetch(name: str, force: bool = False) -> Path:
    spec = REGISTRY.get(name)
    if spec is None:
        raise DatasetMissingError(f"unknown dataset {name!r}")
    path = dataset_path(name)
    if path.exists() and not force:
        return path
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        with urllib.request.urlopen(spec.url, timeout=60) as resp:
            blob = resp.read()
    except OSError as exc:
        raise DatasetMissingError(
            f"could not download {spec.url}: {exc}. "
            f"Place {spec.filename} in {path.parent} manually."
        ) from None
    if spec.url.endswith(".gz"):
        blob = gzip.decompress(blob)
    path.write_bytes(blob)
    return path


def load(name: str, directed: bool = True) -> TemporalGraph:
    spec = REGISTRY.get(name)
    if spec is None:
        raise DatasetMissingError(f"unknown dataset {name!r}")
    path = dataset_path(name)
    if not path.exists():
        raise DatasetMissingError(
            f"dataset file {path} not found; run `chronopath fetch {name}` "
            "in an environment with internet access"
        )
    return parse_edge_list(path.read_bytes(), spec.format(), directed)
