"""Named benchmark networks.

Karate and football are bundled. The Taro gift-giving network and the
Doubtful Sound dolphins network are not redistributed here; drop
``taro.txt`` / ``dolphins.txt`` (edge lists) into the package data directory,
or pass the file path directly wherever a dataset name is accepted.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .graph import Graph, read_edge_list


class DatasetUnavailable(FileNotFoundError):
    pass


@dataclass(frozen=True)
class DatasetInfo:
    name: str
    filename: str
    description: str
    bundled: bool


DATASETS = {
    "karate": DatasetInfo("karate", "karate.txt", "Zachary karate club, 34 nodes, 78 edges", True),
    "football": DatasetInfo("football", "football.txt", "US college football 2000, 115 nodes, 613 edges", True),
    "taro": DatasetInfo("taro", "taro.txt", "Taro exchange gift network, 22 nodes, 39 edges", False),
    "dolphins": DatasetInfo("dolphins", "dolphins.txt", "Doubtful Sound dolphins, 62 nodes, 159 edges", False),
}
ALIASES = {"zachary": "karate", "karate_club": "karate", "dolphin": "dolphins"}


def data_dir() -> Path:
    return Path(str(resources.files("linkgame.data")))


def canonical_name(name: str) -> str:
    key = name.strip().lower()
    return ALIASES.get(key, key)


def dataset_path(name: str) -> Path:
    info = DATASETS.get(canonical_name(name))
    if info is None:
        raise KeyError(f"unknown dataset {name!r}; known: {', '.join(DATASETS)}")
    path = data_dir() / info.filename
    if not path.is_file():
        raise DatasetUnavailable(
            f"dataset {info.name!r} ({info.description}) is not bundled; "
            f"place its edge list at {path} or pass a file path instead"
        )
    return path


def is_available(name: str) -> bool:
    try:
        dataset_path(name)
    except DatasetUnavailable:
        return False
    return True


def load_dataset(name_or_path: str | os.PathLike) -> Graph:
    """A registered dataset by name, or any edge-list file by path."""
    if isinstance(name_or_path, str) and canonical_name(name_or_path) in DATASETS:
        return read_edge_list(dataset_path(name_or_path))
    path = Path(name_or_path)
    if not path.is_file():
        raise FileNotFoundError(f"no dataset or file named {str(name_or_path)!r}")
    return read_edge_list(path)


def file_checksum(path: str | os.PathLike) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()

