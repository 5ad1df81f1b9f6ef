"""Bundled example datasets.

Two small lifetime samples ship with the package so the command line
tool and the test suite have stable targets:

``nicotine``
    Nicotine yields (milligrams per cigarette) measured across 346
    cigarette brands (US Federal Trade Commission testing program,
    1998).

``chemo``
    Survival times in years of patients treated with chemotherapy
    alone (Bekker et al., 2000).  The originating study describes 46
    patients but circulates 45 values; the 45 values are what ship
    here, and the discrepancy is recorded in the dataset note.

Files are plain whitespace-separated text and are integrity-pinned by
SHA-256 so a silent edit fails loudly.
"""

from __future__ import annotations

import hashlib
from importlib import resources

from .estimation import Dataset

__all__ = ["DATASET_IDS", "load_dataset", "dataset_note", "dataset_sha256"]

_EXPECTED_SHA256 = {
    "nicotine": "d8eec4bd0980362c6a2187288dba8001ad6d71b9f242b1c244036be007883cc2",
    "chemo": "440a5cb5dd3e1a7809f3a02bde1ad484e46e3b65fb6f0a04267cacf6dd643ae8",
}

_LABELS = {
    "nicotine": (
        "nicotine yields (mg per cigarette) of 346 brands, FTC tests, 1998"
    ),
    "chemo": (
        "survival times (years) under chemotherapy alone "
        "(Bekker et al., 2000)"
    ),
}

_NOTES = {
    "nicotine": "",
    "chemo": (
        "the originating study reports 46 patients but lists 45 values; "
        "the 45 listed values are bundled"
    ),
}

DATASET_IDS = tuple(sorted(_EXPECTED_SHA256))


def _raw_bytes(name):
    if name not in _EXPECTED_SHA256:
        raise KeyError(
            f"unknown dataset {name!r}; bundled ids are {DATASET_IDS}"
        )
    ref = resources.files("bkwg").joinpath("data", f"{name}.txt")
    return ref.read_bytes()


def dataset_sha256(name):
    """Hex digest of the bundled file's bytes."""
    return hashlib.sha256(_raw_bytes(name)).hexdigest()


def dataset_note(name):
    """Provenance caveat for a bundled dataset ('' when there is none)."""
    if name not in _NOTES:
        raise KeyError(
            f"unknown dataset {name!r}; bundled ids are {DATASET_IDS}"
        )
    return _NOTES[name]


def load_dataset(name):
    """Load a bundled dataset by id, verifying its content hash."""
    raw = _raw_bytes(name)
    digest = hashlib.sha256(raw).hexdigest()
    if digest != _EXPECTED_SHA256[name]:
        raise RuntimeError(
            f"bundled dataset {name!r} failed its integrity check "
            f"(sha256 {digest}, expected {_EXPECTED_SHA256[name]})"
        )
    values = [float(tok) for tok in raw.decode("ascii").split()]
    return Dataset(values, label=_LABELS[name])
