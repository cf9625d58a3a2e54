"""Operators algebraic of degree at most two.

If ``t^2 = alpha t + beta I`` then ``t`` is unitarily equivalent to a direct sum
of scalars and 2x2 upper-triangular blocks, each of which is complex symmetric:

* ``t^2 = 0``: the SVD pairs ``t v_i = sigma_i u_i`` with ``u_i`` orthogonal to
  every ``v_j``, giving blocks ``[[0, sigma_i], [0, 0]]`` and zeros;
* distinct roots ``l1 != l2``: ``e = (t - l2)/(l1 - l2)`` is idempotent.  With
  ``M = ran e`` the operator ``X = P_M e P_{M^perp}`` has singular pairs
  ``X n_i = tau_i m_i`` (the tangents of the principal angles between ``ran e``
  and ``ker e``), and ``t`` splits into ``l1`` on the rest of ``M``, ``l2`` on the
  rest of ``M^perp`` and blocks ``[[l1, (l1-l2) tau_i], [0, l2]]``;
* a double root ``l``: ``t - l`` squares to zero.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import block_diag

from .. import _spectral as sp
from ..core import (
    Conjugation,
    Tolerance,
    _tol,
    adjoint,
    as_matrix,
    as_vector,
    pullback_conjugation,
    validate_conjugation,
)
from ..errors import DimensionMismatch, NotDegreeTwo
from .binormal import SWAP, atom_conjugation

# relative root separation below which a double root is assumed
ROOT_GAP = 1e-6


@dataclass(frozen=True, eq=False)
class Degree2Data:
    """Canonical form ``t = q @ block @ q*`` with ``block`` certified by ``block_s``."""

    branch: str  # "scalar", "nilpotent", "two_roots" or "double_root"
    alpha: complex
    beta: complex
    roots: tuple
    q: np.ndarray
    block: np.ndarray
    block_s: np.ndarray
    fit_residual: float
    # number of 2x2 blocks (they occupy the trailing coordinates)
    pairs: int = 0

    def reconstruct(self) -> np.ndarray:
        return self.q @ self.block @ adjoint(self.q)


def rank_one_operator(u, v) -> np.ndarray:
    """Matrix of ``f -> <f, v> u``."""
    u = as_vector(u)
    v = as_vector(v)
    if u.shape != v.shape:
        raise DimensionMismatch(f"u has length {u.size}, v has length {v.size}")
    return np.outer(u, v.conj())


def _fit(t: np.ndarray) -> tuple[complex, complex, float]:
    n = t.shape[0]
    a = np.stack([t.ravel(), np.eye(n).ravel()], axis=1)
    t2 = t @ t
    coef, *_ = np.linalg.lstsq(a, t2.ravel(), rcond=None)
    alpha, beta = complex(coef[0]), complex(coef[1])
    resid = np.linalg.norm(t2 - alpha * t - beta * np.eye(n))
    return alpha, beta, float(resid / max(1.0, np.linalg.norm(t) ** 2))


def _square_zero_basis(nil: np.ndarray, thr: float) -> tuple[np.ndarray, list[float]]:
    """Unitary basis ``[rest | u_1 v_1 | u_2 v_2 | ...]`` for an operator with square zero."""
    n = nil.shape[0]
    u, sv, vh = np.linalg.svd(nil)
    r = int(np.sum(sv > thr))
    cols = []
    for i in range(r):
        cols += [u[:, i], vh[i].conj()]
    paired = np.array(cols).T.reshape(n, 2 * r)
    # u_i and v_j are orthogonal only up to rounding; snap to the nearest isometry
    if r:
        paired = _orthonormal_columns(paired)
    rest = sp.orth_complement(paired, n) if r else np.eye(n, dtype=np.complex128)
    return np.hstack([rest, paired]), list(sv[:r])


def _orthonormal_columns(a: np.ndarray) -> np.ndarray:
    u, _, vh = np.linalg.svd(a, full_matrices=False)
    return u @ vh


def degree2_conjugation(t, tol: Optional[Tolerance] = None) -> tuple[Conjugation, Degree2Data]:
    """Conjugation for ``t`` satisfying a quadratic polynomial identity.

    Returns the conjugation together with the canonical data
    (:class:`Degree2Data`): ``t = q block q*`` and ``s = q block_s q^T``.

    Raises
    ------
    NotDegreeTwo
        if ``t^2 - alpha t - beta I`` cannot be made small.
    """
    tol = _tol(tol)
    t = as_matrix(t, square=True)
    n = t.shape[0]
    eye = np.eye(n, dtype=np.complex128)
    fro = max(1.0, float(np.linalg.norm(t)))
    mean = np.trace(t) / n
    if np.linalg.norm(t - mean * eye) <= tol.rel * fro:
        data = Degree2Data("scalar", mean, 0j, (mean,), eye, t.copy(), eye, 0.0)
        return validate_conjugation(eye, tol), data

    alpha, beta, fit = _fit(t)
    if fit > tol.rel:
        raise NotDegreeTwo(fit)
    disc = np.sqrt(alpha * alpha + 4 * beta)
    l1, l2 = 0.5 * (alpha + disc), 0.5 * (alpha - disc)
    norm = sp.spectral_norm(t)

    if abs(l1 - l2) <= ROOT_GAP * max(1.0, abs(alpha), norm):
        lam = 0.5 * alpha
        branch = "nilpotent" if abs(lam) <= tol.abs * max(1.0, norm) else "double_root"
        if branch == "nilpotent":
            lam = 0j
        q, sig = _square_zero_basis(t - lam * eye, tol.rel * max(norm, tol.abs))
        k = len(sig)
        blocks_s = [eye[: n - 2 * k, : n - 2 * k]] + [SWAP] * k
        roots = (lam,)
    else:
        branch = "two_roots"
        e = (t - l2 * eye) / (l1 - l2)
        r = int(round(np.trace(e).real))
        uu, _, _ = np.linalg.svd(e)
        mb, mp = uu[:, :r], uu[:, r:]
        x = adjoint(mb) @ e @ mp
        if r and n - r:
            um, tau, vph = np.linalg.svd(x)
        else:
            um, tau, vph = np.eye(r), np.zeros(0), np.eye(n - r)
        k = int(np.sum(tau > tol.rel * max(1.0, tau[0] if tau.size else 0.0)))
        m_vec = mb @ um
        n_vec = mp @ vph.conj().T
        cols = [m_vec[:, k:], n_vec[:, k:]]
        blocks_s = [eye[: n - 2 * k, : n - 2 * k]]
        for i in range(k):
            cols.append(np.stack([m_vec[:, i], n_vec[:, i]], axis=1))
            blocks_s.append(atom_conjugation(l1, (l1 - l2) * tau[i], l2).block)
        q = np.hstack(cols)
        roots = (l1, l2)

    block_s = block_diag(*blocks_s).astype(np.complex128)
    block = adjoint(q) @ t @ q
    data = Degree2Data(branch, alpha, beta, roots, q, block, block_s, fit, pairs=k)
    return pullback_conjugation(block_s, q, tol), data
