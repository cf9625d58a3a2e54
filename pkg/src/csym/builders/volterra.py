"""Discretized Volterra integration operator on L^2[0, 1]."""
from __future__ import annotations

from typing import Optional

import numpy as np

from ..core import Conjugation, Tolerance, _tol, canonical_conjugation
from ..errors import InvalidDimension


def volterra_discretize(n: int, tol: Optional[Tolerance] = None) -> tuple[np.ndarray, Conjugation]:
    """Lower-triangular quadrature matrix of ``f -> int_0^x f`` and the flip conjugation.

    ``V[i, j] = h`` below the diagonal and ``h/2`` on it (``h = 1/n``).  With
    this rule ``V`` is symmetric about the anti-diagonal, so ``f(x) ->
    conj(f(1 - x))`` (reversal plus entrywise conjugation) is an exact
    conjugation for every ``n``, and ``(V + V*)/2 = (h/2) 1 (x) 1`` has rank one.
    """
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise InvalidDimension(f"n must be an integer >= 2, got {n!r}")
    h = 1.0 / n
    v = np.tril(np.full((n, n), h, dtype=np.complex128), -1) + np.eye(n) * (h / 2)
    return v, canonical_conjugation("flip", n, tol=_tol(tol))
