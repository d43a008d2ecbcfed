"""Named weight presets shipped as editable data files.

The Gygax and Jackman files are placeholders holding the plain chess-derived
baseline scaling (all ones): the historically recommended piece weights are
not part of this repository's data.  Swap the files to change the presets.
"""

from __future__ import annotations

import importlib.resources

import numpy as np

from .errors import DataError
from .evaluation import THETA_SIZE

PRESET_FILES = {
    "identity": "identity.theta",
    "gygax": "gygax.theta",
    "jackman": "jackman.theta",
}


def preset_theta(name: str) -> np.ndarray:
    filename = PRESET_FILES.get(name.lower())
    if filename is None:
        raise DataError(f"unknown weight preset {name!r} (have: {sorted(PRESET_FILES)})")
    text = importlib.resources.files("dragonfish.data").joinpath(filename).read_text()
    lines = [ln.strip() for ln in text.splitlines()]
    values = [float(ln) for ln in lines if ln and not ln.startswith("#")]
    if len(values) != THETA_SIZE:
        raise DataError(f"preset {name!r} must hold {THETA_SIZE} numbers")
    return np.asarray(values, dtype=np.float64)
