"""The partial isometry that is not complex symmetric.

``A`` is a 3x3 contraction whose eigenvectors have pairwise Gram moduli 1/2
while those of ``A*`` have 1/3, so ``A`` is not complex symmetric.  Stacking a
block ``B`` with ``A*A + B*B = I`` gives ``T = [[A, 0], [B, 0]]``, a partial
isometry with initial space ``C^3`` and ``P T P = A (+) 0`` for ``P = T*T``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import adjoint
from ..errors import InvalidN


@dataclass(frozen=True, eq=False)
class PartialIsometryFixture:
    n: int
    T: np.ndarray
    A: np.ndarray
    B: np.ndarray
    P: np.ndarray


def counterexample_blocks(n: int = 2) -> tuple[np.ndarray, np.ndarray]:
    a = np.array([[0, 0.5, 0], [0, 0, 0.25], [1, 0, 0]], dtype=np.complex128)
    b = np.zeros((n, 3), dtype=np.complex128)
    b[0, 1] = np.sqrt(3.0) / 2
    b[1, 2] = np.sqrt(15.0) / 4
    return a, b


def partial_isometry_counterexample(n: int = 2) -> PartialIsometryFixture:
    """Fixture of size ``(n + 3) x (n + 3)`` with ``dim ker T = dim ker T* = n``."""
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise InvalidN(f"n must be an integer >= 2, got {n!r}")
    a, b = counterexample_blocks(n)
    t = np.zeros((n + 3, n + 3), dtype=np.complex128)
    t[:3, :3] = a
    t[3:, :3] = b
    return PartialIsometryFixture(int(n), t, a, b, adjoint(t) @ t)
