"""Necessary conditions for complex symmetry.

Every test here either finds an obstruction (two quantities that any
C-symmetric operator must have equal, yet differ) and returns a NotCSO
verdict carrying the witness, or returns Unknown.  None of them ever
certifies complex symmetry.

All refutations rest on two facts about a conjugation C with ``T = C T* C``:

* ``C`` is isometric and conjugate-linear, so ``|<Cx, Cy>| = |<x, y>|``;
* ``C`` intertwines ``T`` and ``T*``: ``T*(Cx) = C(Tx)``.  Hence ``C`` maps
  eigenvectors of ``T`` for ``lam`` to eigenvectors of ``T*`` for ``conj(lam)``
  and maps ``ker T^i`` onto ``ker (T*)^i``.
"""
from __future__ import annotations

import itertools
from typing import Optional

import numpy as np

from . import _spectral as sp
from .core import (
    ObstructionWitness,
    Tolerance,
    Verdict,
    _tol,
    adjoint,
    as_matrix,
    not_cso,
    unknown,
)
from ._spectral import EigPair  # noqa: F401  (re-exported)

__all__ = [
    "EigPair",
    "ObstructionWitness",
    "simple_eig_pairs_test",
    "kernel_chain_test",
    "transpose_trace_test",
    "kernel_dim_test",
    "is_partial_isometry",
    "polar_compression_test",
    "DIAGNOSTICS",
]


def _eig_sort_key(p: EigPair):
    lam = p.eigenvalue
    return (round(lam.real, 9), round(lam.imag, 9))


def simple_eig_pairs_test(t, tol: Optional[Tolerance] = None) -> Verdict:
    """Compare Gram moduli of simple eigenvectors of ``t`` and of ``t*``.

    For simple eigenvalues ``lam`` and ``mu``, a conjugation must send the unit
    eigenvector ``v_lam`` of ``t`` to a unimodular multiple of the unit
    eigenvector ``w_lam`` of ``t*`` for ``conj(lam)``.  Since ``C`` preserves
    inner-product moduli, ``|<v_lam, v_mu>| = |<w_lam, w_mu>|``.

    Only eigenvalues isolated by more than ``1e-6 * ||t||`` take part; pairs are
    compared with a threshold widened by the estimated eigenvector error.
    """
    tol = _tol(tol)
    t = as_matrix(t, square=True)
    pairs, _, _ = sp.eig_pairs(t)
    pairs = sorted((p for p in pairs if p.vector_error < sp.MAX_VECTOR_ERROR), key=_eig_sort_key)
    worst = None
    for i, j in itertools.combinations(range(len(pairs)), 2):
        p, q = pairs[i], pairs[j]
        left = abs(np.vdot(q.right_unit_vector, p.right_unit_vector))
        right = abs(np.vdot(q.adjoint_unit_vector, p.adjoint_unit_vector))
        thr = max(tol.rel, 2.0 * (p.vector_error + q.vector_error))
        excess = abs(left - right) - thr
        if excess > 0 and (worst is None or excess > worst[0] + 1e-12):
            worst = (excess, p, q, left, right)
    if worst is None:
        return unknown("simple_eig_pairs_test", reason="all simple eigenpairs consistent", pairs=len(pairs))
    excess, p, q, left, right = worst
    witness = ObstructionWitness(
        "simple_eig_pairs_test",
        float(left),
        float(right),
        indices=(p.eigenvalue, q.eigenvalue),
        detail="|<v_lam, v_mu>| for t versus |<w_lam, w_mu>| for t*",
    )
    return not_cso("simple_eig_pairs_test", witness, residual=float(abs(left - right)))


def _kernel_flag(t: np.ndarray, thr: float) -> list[np.ndarray]:
    """Orthonormal bases of ker t, ker t^2, ... until the chain stabilizes."""
    n = t.shape[0]
    flag = [np.zeros((n, 0), dtype=np.complex128)]
    while flag[-1].shape[1] < n:
        q = flag[-1]
        proj = t - q @ (adjoint(q) @ t)  # (I - QQ*) t, kernel is t^{-1}(K_{i-1})
        k = sp.null_basis(proj, thr)
        if k.shape[1] == q.shape[1]:
            break
        flag.append(k)
    return flag


def _difference_basis(big: np.ndarray, small: np.ndarray) -> np.ndarray:
    """Orthonormal basis of span(big) minus span(small), given small is contained in big."""
    d = big.shape[1] - small.shape[1]
    if small.shape[1]:
        resid = big - small @ (adjoint(small) @ big)
    else:
        resid = big
    u, _, _ = np.linalg.svd(resid, full_matrices=False)
    return u[:, :d]


def kernel_chain_test(t, tol: Optional[Tolerance] = None) -> Verdict:
    """Compare the flags ``ker t^i`` and ``ker (t*)^i``.

    A conjugation maps ``ker t^i`` isometrically onto ``ker (t*)^i`` for every
    ``i``, hence also the successive orthogonal differences ``D_i`` and
    ``D*_i`` onto each other, and ``||t x|| = ||t* (Cx)||``.  So the dimensions
    must agree, and the singular values of ``t`` restricted to ``D_i`` must
    equal those of ``t*`` restricted to ``D*_i``.  When both differences are
    lines this is the comparison of ``||t x_i||`` with ``||t* y_i||``.

    Raises
    ------
    RankDeterminationUnstable
        a singular value lies within a factor 10 of the rank threshold
        ``tol.rel * ||t||``.
    """
    tol = _tol(tol)
    t = as_matrix(t, square=True)
    norm = sp.spectral_norm(t)
    if norm == 0.0:
        return unknown("kernel_chain_test", reason="zero operator")
    thr = tol.rel * norm
    ts = adjoint(t)
    flag = _kernel_flag(t, thr)
    flag_s = _kernel_flag(ts, thr)
    for i in range(1, max(len(flag), len(flag_s))):
        dim = flag[i].shape[1] if i < len(flag) else flag[-1].shape[1]
        dim_s = flag_s[i].shape[1] if i < len(flag_s) else flag_s[-1].shape[1]
        if dim != dim_s:
            w = ObstructionWitness(
                "kernel_chain_test", float(dim), float(dim_s), indices=i,
                detail="dim ker t^i versus dim ker (t*)^i",
            )
            return not_cso("kernel_chain_test", w, residual=float(abs(dim - dim_s)))
    for i in range(1, min(len(flag), len(flag_s))):
        x = _difference_basis(flag[i], flag[i - 1])
        y = _difference_basis(flag_s[i], flag_s[i - 1])
        sx = np.linalg.svd(t @ x, compute_uv=False)
        sy = np.linalg.svd(ts @ y, compute_uv=False)
        k = int(np.argmax(np.abs(sx - sy)))
        if abs(sx[k] - sy[k]) > thr:
            w = ObstructionWitness(
                "kernel_chain_test", float(sx[k]), float(sy[k]), indices=i,
                detail="||t x_i|| versus ||t* y_i|| on the i-th kernel-flag difference",
            )
            return not_cso("kernel_chain_test", w, residual=float(abs(sx[k] - sy[k])))
    return unknown("kernel_chain_test", reason="kernel flags consistent", depth=len(flag) - 1)


def _word_label(word) -> str:
    return "".join("T" if c == 0 else "A" for c in word)


def transpose_trace_test(t, max_word_len: int = 6, tol: Optional[Tolerance] = None) -> Verdict:
    """Compare traces of words in ``(t, t*)`` with the same words in ``(t^T, conj t)``.

    A complex symmetric ``t`` satisfies ``t = s t^T s*`` and ``t* = s conj(t) s*``
    for one unitary ``s``, so every word trace must agree.  Words are scanned by
    length, then lexicographically; letters are ``T`` (t) and ``A`` (t*).
    """
    tol = _tol(tol)
    t = as_matrix(t, square=True)
    if max_word_len < 1:
        raise ValueError("max_word_len must be >= 1")
    n = t.shape[0]
    norm = sp.spectral_norm(t)
    if norm == 0.0:
        return unknown("transpose_trace_test", reason="zero operator")
    left_letters = (t, adjoint(t))
    right_letters = (t.T, t.conj())
    eye = np.eye(n, dtype=np.complex128)
    level = {(): (eye, eye)}
    checked = 0
    for length in range(1, max_word_len + 1):
        thr = tol.rel * n * norm**length
        nxt = {}
        for word, (lm, rm) in level.items():
            for c in (0, 1):
                lw, rw = lm @ left_letters[c], rm @ right_letters[c]
                w = word + (c,)
                nxt[w] = (lw, rw)
                checked += 1
                tl, tr = complex(np.trace(lw)), complex(np.trace(rw))
                if abs(tl - tr) > thr:
                    witness = ObstructionWitness(
                        "transpose_trace_test", tl, tr, indices=_word_label(w),
                        detail="tr w(t, t*) versus tr w(t^T, conj t)",
                    )
                    return not_cso("transpose_trace_test", witness, residual=abs(tl - tr) / norm**length)
        level = nxt
    return unknown("transpose_trace_test", reason="all word traces match", words=checked)


def kernel_dim_test(t, tol: Optional[Tolerance] = None) -> Verdict:
    """Refute when ``dim ker t != dim ker t*``.

    For a square matrix the two numerical ranks coincide, so in finite
    dimension this test can only come back Unknown; it is kept as a cheap
    guard that also reports the kernel dimensions.
    """
    tol = _tol(tol)
    t = as_matrix(t, square=True)
    n = t.shape[0]
    norm = sp.spectral_norm(t)
    thr = tol.rel * norm
    k = n - sp.numerical_rank(t, thr) if norm > 0 else n
    ks = n - sp.numerical_rank(adjoint(t), thr) if norm > 0 else n
    if k != ks:
        w = ObstructionWitness("kernel_dim_test", float(k), float(ks), detail="dim ker t versus dim ker t*")
        return not_cso("kernel_dim_test", w, residual=float(abs(k - ks)))
    return unknown("kernel_dim_test", reason="kernel dimensions agree", kernel_dims=(k, ks))


def is_partial_isometry(t, tol: Optional[Tolerance] = None) -> bool:
    """True iff ``t* t`` is an orthogonal projection (to ``tol.rel`` relative accuracy)."""
    tol = _tol(tol)
    t = as_matrix(t, square=True)
    p = adjoint(t) @ t
    scale = max(1.0, float(np.linalg.norm(p)))
    idem = np.linalg.norm(p @ p - p)
    herm = np.linalg.norm(adjoint(p) - p)
    return bool(idem <= tol.rel * scale and herm <= tol.rel * scale)


def polar_compression_test(t, tol: Optional[Tolerance] = None) -> Verdict:
    """For a partial isometry ``t`` with initial projection ``P = t* t``, test ``P t``.

    A C-symmetric partial isometry factors as ``t = C J P`` with ``J`` a
    conjugation commuting with ``P``, which makes ``P t`` J-symmetric.  Any
    refutation of ``P t`` therefore refutes ``t``.
    """
    tol = _tol(tol)
    t = as_matrix(t, square=True)
    if not is_partial_isometry(t, tol):
        return unknown("polar_compression_test", reason="not a partial isometry")
    pt = adjoint(t) @ t @ t
    for inner_test in (simple_eig_pairs_test, kernel_chain_test):
        v = inner_test(pt, tol)
        if v.is_not_cso:
            o = v.obstruction
            w = ObstructionWitness(
                "polar_compression_test", o.left_value, o.right_value, indices=o.indices,
                detail=f"{o.test_name} on P t: {o.detail}",
            )
            return not_cso("polar_compression_test", w, residual=v.residual)
    return unknown("polar_compression_test", reason="compression P t not refuted")


DIAGNOSTICS = (
    "kernel_dim_test",
    "kernel_chain_test",
    "simple_eig_pairs_test",
    "polar_compression_test",
    "transpose_trace_test",
)
