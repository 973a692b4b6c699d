"""Input validation helpers for the array-facing estimator API."""

from __future__ import annotations

import numpy as np

__all__ = ["check_energies"]


def check_energies(X) -> np.ndarray:
    """Coerce ``X`` to a finite 1-D complex array of energies.

    Accepts a 1-D array-like of complex (or real) scalars, or a 2-D
    array-like with exactly two real columns (Re E, Im E).
    """
    arr = np.asarray(X)
    if arr.size == 0:
        raise ValueError("found an empty energy array")
    if arr.ndim == 2:
        if arr.shape[1] != 2:
            raise ValueError(
                f"2-D energy input must have exactly 2 columns (re, im), "
                f"got shape {arr.shape}"
            )
        if np.iscomplexobj(arr):
            raise ValueError("2-D (re, im) energy input must be real-valued")
        arr = arr[:, 0] + 1j * arr[:, 1]
    elif arr.ndim != 1:
        raise ValueError(f"energy input must be 1-D or 2-D, got shape {arr.shape}")
    arr = arr.astype(complex, copy=False)
    if not np.all(np.isfinite(arr.real) & np.isfinite(arr.imag)):
        raise ValueError("energies must be finite")
    return arr
