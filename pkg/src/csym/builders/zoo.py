"""Seeded random samples from the operator classes the builders cover."""
from __future__ import annotations

from typing import Optional

import numpy as np

from .._spectral import haar_unitary
from ..core import adjoint
from ..errors import InvalidParams
from .binormal import binormal_assemble

ZOO_KINDS = ("binormal", "two_by_two", "partial_isometry", "normal", "nilpotent3", "degree2")
MAX_SIZE = 64
DEFAULT_SIZE = {"binormal": 4, "two_by_two": 2, "partial_isometry": 3, "normal": 8, "nilpotent3": 3, "degree2": 4}


def _gauss(rng: np.random.Generator, *shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def nilpotent3(a: complex, b: complex) -> np.ndarray:
    """``[[0, a, 0], [0, 0, b], [0, 0, 0]]``, complex symmetric iff ``ab = 0`` or ``|a| = |b|``."""
    t = np.zeros((3, 3), dtype=np.complex128)
    t[0, 1], t[1, 2] = a, b
    return t


def zoo_sample(
    kind: str,
    seed: int,
    size: Optional[int] = None,
    *,
    rank: Optional[int] = None,
    a: complex = 1.0,
    b: complex = 2.0,
    rotate: bool = True,
) -> np.ndarray:
    """One random operator of the given class.

    Parameters
    ----------
    kind : str
        One of :data:`ZOO_KINDS`.
    seed : int
        The sample is a deterministic function of ``(kind, seed, size, ...)``.
    size : int, optional
        Matrix dimension (``dim`` for partial isometries), 1..64.
    rank : int, optional
        Rank of the initial projection for ``partial_isometry``; drawn
        uniformly from ``0..dim`` when omitted.
    a, b : complex
        Entries of ``nilpotent3``.
    rotate : bool
        Hide the block structure of ``binormal`` samples behind a random unitary.
    """
    if kind not in ZOO_KINDS:
        raise InvalidParams(f"unknown zoo kind {kind!r}; expected one of {', '.join(ZOO_KINDS)}")
    n = DEFAULT_SIZE[kind] if size is None else size
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_SIZE:
        raise InvalidParams(f"size must be an integer in 1..{MAX_SIZE}, got {size!r}")
    rng = np.random.default_rng([int(seed), ZOO_KINDS.index(kind)])

    if kind == "nilpotent3":
        if n != 3:
            raise InvalidParams("nilpotent3 has size 3")
        return nilpotent3(a, b)
    if kind == "two_by_two":
        if n != 2:
            raise InvalidParams("two_by_two has size 2")
        return _gauss(rng, 2, 2)
    if kind == "normal":
        z = haar_unitary(rng, n)
        return z @ np.diag(_gauss(rng, n)) @ adjoint(z)
    if kind == "partial_isometry":
        r = int(rng.integers(0, n + 1)) if rank is None else rank
        if not 0 <= r <= n:
            raise InvalidParams(f"rank must lie in 0..{n}, got {rank!r}")
        w = haar_unitary(rng, n)
        v = haar_unitary(rng, n)[:, :r]
        return w @ (v @ adjoint(v))
    if kind == "binormal":
        if n % 2:
            raise InvalidParams("binormal samples have even size")
        m = n // 2
        t = binormal_assemble(*(_gauss(rng, m) for _ in range(4)))
        if rotate:
            q = haar_unitary(rng, n)
            t = q @ t @ adjoint(q)
        return t
    # degree2: l2 I + (l1 - l2) e with e a non-orthogonal idempotent of random rank
    r = int(rng.integers(0, n + 1))
    s = np.eye(n) + 0.5 * _gauss(rng, n, n) / np.sqrt(n)
    d = np.diag(np.r_[np.ones(r), np.zeros(n - r)])
    e = s @ d @ np.linalg.inv(s)
    l1, l2 = _gauss(rng, 2)
    return l2 * np.eye(n) + (l1 - l2) * e
