"""Rank-one perturbations of normal and unitary operators.

A normal operator with a cyclic vector ``v`` is multiplication by ``z`` on
``L^2(mu)`` with ``v`` becoming the constant ``1``; there the conjugation
``f -> theta * conj(f)`` makes both ``M_z`` and ``(theta 1) (x) 1`` symmetric.
Pulled back to ``C^n`` (``mu`` atomic with masses ``|v_i|^2``) this is the
diagonal conjugation ``s = diag(theta_i v_i^2 / |v_i|^2)``.
"""
from __future__ import annotations

from typing import Optional

import numpy as np
from scipy.linalg import schur

from .. import _spectral as sp
from ..core import (
    Conjugation,
    Tolerance,
    Verdict,
    _tol,
    adjoint,
    as_matrix,
    as_vector,
    cso,
    csym_residual,
    validate_conjugation,
)
from ..errors import (
    CsymError,
    DefectRankNotOne,
    InvalidParams,
    LengthMismatch,
    NotContraction,
    RepeatedEigenvalue,
    ZeroCoordinate,
)


def normal_rank_one(eigs, theta, a: complex, v, tol: Optional[Tolerance] = None) -> tuple[np.ndarray, Conjugation]:
    """``T = diag(eigs) + a (theta * v) (x) v`` and its conjugation.

    Parameters
    ----------
    eigs : sequence of complex
        Pairwise distinct eigenvalues of the normal part.
    theta : sequence of complex
        Unimodular values of the function ``theta`` on the atoms.
    a : complex
    v : sequence of complex
        Cyclic vector; every coordinate must be nonzero.

    Returns
    -------
    t : ndarray
    conjugation : Conjugation
        ``s = diag(theta_i v_i^2 / |v_i|^2)``.
    """
    tol = _tol(tol)
    lam = as_vector(eigs)
    th = as_vector(theta)
    v = as_vector(v)
    if not (lam.shape == th.shape == v.shape):
        raise LengthMismatch("eigs, theta and v must have the same length")
    if lam.size == 0:
        raise InvalidParams("at least one eigenvalue is required")
    if np.any(np.abs(np.abs(th) - 1.0) > tol.rel):
        raise InvalidParams("theta values must be unimodular")
    scale = max(1.0, float(np.max(np.abs(lam))))
    gaps = np.abs(lam[:, None] - lam[None, :])
    np.fill_diagonal(gaps, np.inf)
    if lam.size > 1 and np.min(gaps) <= tol.rel * scale:
        i, j = np.unravel_index(np.argmin(gaps), gaps.shape)
        raise RepeatedEigenvalue(f"eigenvalues {i} and {j} coincide: {lam[i]}")
    small = np.abs(v) <= tol.abs * max(1.0, float(np.linalg.norm(v)))
    if np.any(small):
        raise ZeroCoordinate(
            f"v vanishes at coordinate {int(np.argmax(small))}; split off the reducing subspace first"
        )
    t = np.diag(lam) + complex(a) * np.outer(th * v, v.conj())
    s = np.diag(th * v**2 / np.abs(v) ** 2)
    return t, validate_conjugation(s, tol)


def _defect_vector(d: np.ndarray, tol: Tolerance) -> tuple[int, np.ndarray]:
    w, vecs = np.linalg.eigh(0.5 * (d + adjoint(d)))
    rank = int(np.sum(np.abs(w) > tol.rel * max(1.0, float(np.max(np.abs(w))))))
    return rank, vecs[:, -1]


def defect_one_decompose(t, tol: Optional[Tolerance] = None) -> tuple[np.ndarray, complex, np.ndarray]:
    """Write a contraction with defect indices (1, 1) as ``U + a (U v) (x) v``.

    ``u`` spans ``ran(I - t* t)``, ``w`` spans ``ran(I - t t*)`` and ``t u = beta w``.
    ``U = t + c (w (x) u)`` agrees with ``t`` on ``u``-perp; ``c = (1 - |beta|)
    beta/|beta|`` (``c = 1`` when ``beta = 0``) is the choice with ``c``
    real-positive up to the phase of ``beta``, making ``U u = (beta/|beta|) w``.
    Then ``v = u`` and ``a = |beta| - 1``.

    Raises
    ------
    NotContraction
        ``||t|| > 1 + tol.rel``.
    DefectRankNotOne
        either defect operator has numerical rank other than one.
    """
    tol = _tol(tol)
    t = as_matrix(t, square=True)
    n = t.shape[0]
    norm = sp.spectral_norm(t)
    if norm > 1.0 + tol.rel:
        raise NotContraction(f"||t|| = {norm:.6g} exceeds 1")
    eye = np.eye(n)
    dr, u = _defect_vector(eye - adjoint(t) @ t, tol)
    cr, w = _defect_vector(eye - t @ adjoint(t), tol)
    if dr != 1 or cr != 1:
        raise DefectRankNotOne(dr, cr)
    beta = complex(np.vdot(w, t @ u))
    phase = beta / abs(beta) if abs(beta) > 0 else 1.0
    c = (1.0 - abs(beta)) * phase
    unitary = t + c * np.outer(w, u.conj())
    return unitary, complex(abs(beta) - 1.0), u


def certify_defect_one(t, tol: Optional[Tolerance] = None, cfg=None) -> Verdict:
    """Certificate for a defect-(1, 1) contraction.

    Diagonalizing ``U = Z diag(mu) Z*`` turns ``t`` into
    ``diag(mu) + a (diag(mu) v') (x) v'`` with ``v' = Z* v``, which is
    :func:`normal_rank_one` with ``theta = mu``.  Repeated eigenvalues of ``U``
    or a vanishing coordinate of ``v'`` send the operator to the general solver.
    """
    tol = _tol(tol)
    t = as_matrix(t, square=True)
    unitary, a, v = defect_one_decompose(t, tol)
    tri, z = schur(unitary, output="complex")
    mu = np.diagonal(tri).copy()
    mu /= np.abs(mu)
    try:
        _, c0 = normal_rank_one(mu, mu, a, adjoint(z) @ v, tol)
        c = validate_conjugation(z @ c0.s @ z.T, tol)
        res = csym_residual(t, c)
        if res <= 1e2 * tol.abs:
            return cso("defect_one", c, res, route="normal_rank_one")
    except CsymError:
        pass
    from ..solver import SolveConfig, decide

    return decide(t, cfg or SolveConfig(), tol)
