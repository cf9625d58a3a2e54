"""Eigen- and singular-value helpers shared by diagnostics and the solver."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EigensolverFailure, RankDeterminationUnstable

EPS = np.finfo(float).eps
# relative gap below which two eigenvalues are treated as one cluster
CLUSTER_GAP = 1e-6
# eigenvectors whose estimated error exceeds this are not used
MAX_VECTOR_ERROR = 1e-2
# singular values within this factor of the rank threshold are ambiguous
RANK_BAND = 10.0


def spectral_norm(t: np.ndarray) -> float:
    if t.size == 0:
        return 0.0
    return float(np.linalg.norm(t, 2))


def normalize_phase(v: np.ndarray) -> np.ndarray:
    """Scale ``v`` to unit norm with its largest entry real and positive."""
    v = v / np.linalg.norm(v)
    k = int(np.argmax(np.abs(v) - 1e-12 * np.arange(v.size)))
    return v * (abs(v[k]) / v[k])


def cluster_eigenvalues(eigs: np.ndarray, gap: float) -> list[list[int]]:
    """Single-linkage clusters of eigenvalues closer than ``gap``, ordered by first index."""
    n = len(eigs)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(eigs[i] - eigs[j]) <= gap:
                parent[find(j)] = find(i)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


@dataclass(frozen=True)
class EigPair:
    """Simple eigenvalue with unit eigenvectors of ``t`` (for lambda) and ``t*`` (for conj lambda)."""

    eigenvalue: complex
    right_unit_vector: np.ndarray
    adjoint_unit_vector: np.ndarray
    geometric_multiplicity: int = 1
    # estimated error of the two unit vectors, from eigenvalue conditioning and gap
    vector_error: float = 0.0


def eigenvalues(t: np.ndarray) -> np.ndarray:
    try:
        w = np.linalg.eigvals(t)
    except np.linalg.LinAlgError as exc:
        raise EigensolverFailure(str(exc)) from exc
    if not np.all(np.isfinite(w)):
        raise EigensolverFailure("eigensolver returned non-finite values")
    return w


def _line_kernel(a: np.ndarray):
    """Smallest right singular vector of ``a`` with the two smallest singular values."""
    _, sv, vh = np.linalg.svd(a)
    second = sv[-2] if sv.size > 1 else np.inf
    return vh[-1].conj(), float(sv[-1]), float(second)


def eig_pairs(t: np.ndarray, gap_rel: float = CLUSTER_GAP) -> tuple[list[EigPair], list[list[int]], np.ndarray]:
    """Eigenpairs of ``t`` over clusters with a one-dimensional eigenspace.

    Eigenvalues closer than ``gap_rel * ||t||`` are clustered; each cluster is
    represented by its mean (well conditioned even for defective clusters).
    A cluster yields an :class:`EigPair` when ``t - mean`` has a single tiny
    singular value; the unit vectors are the corresponding null vectors of
    ``t - mean`` and ``t* - conj(mean)``.  ``vector_error`` estimates their
    error as ``(sigma_min + 100 eps ||t||) / sigma_second``.

    Returns the pairs, the clusters (index lists into the eigenvalue array)
    and the eigenvalues.
    """
    n = t.shape[0]
    if n == 0:
        return [], [], np.zeros(0, dtype=np.complex128)
    w = eigenvalues(t)
    norm = max(spectral_norm(t), np.finfo(float).tiny)
    clusters = cluster_eigenvalues(w, gap_rel * norm)
    eye = np.eye(n)
    ts = t.conj().T
    pairs = []
    for group in clusters:
        lam = complex(np.mean(w[group]))
        v, smin, s2 = _line_kernel(t - lam * eye)
        if smin > np.sqrt(EPS) * norm:
            continue
        err = (smin + 100.0 * EPS * norm) / s2 if s2 > 0 else np.inf
        if not err < MAX_VECTOR_ERROR:
            continue
        u, _, _ = _line_kernel(ts - np.conj(lam) * eye)
        pairs.append(EigPair(lam, normalize_phase(v), normalize_phase(u), 1, float(err)))
    return pairs, clusters, w


def rank_threshold(a: np.ndarray, rel: float, scale: float | None = None) -> float:
    if scale is None:
        scale = spectral_norm(a)
    return rel * scale


def check_rank_band(sv: np.ndarray, threshold: float, band: float = RANK_BAND) -> None:
    if threshold <= 0:
        return
    amb = sv[(sv > threshold / band) & (sv < threshold * band)]
    if amb.size:
        raise RankDeterminationUnstable(amb[0], threshold)


def numerical_rank(a: np.ndarray, threshold: float, *, strict: bool = True) -> int:
    if a.size == 0:
        return 0
    sv = np.linalg.svd(a, compute_uv=False)
    if strict:
        check_rank_band(sv, threshold)
    return int(np.sum(sv > threshold))


def null_basis(a: np.ndarray, threshold: float, *, strict: bool = True) -> np.ndarray:
    """Orthonormal basis (as columns) of the numerical kernel of ``a``."""
    m, n = a.shape
    if n == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    _, sv, vh = np.linalg.svd(a)
    if strict:
        check_rank_band(sv, threshold)
    rank = int(np.sum(sv > threshold))
    return vh[rank:].conj().T


def orth_complement(basis: np.ndarray, n: int) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of the columns of ``basis`` in C^n."""
    if basis.size == 0:
        return np.eye(n, dtype=np.complex128)
    u, sv, _ = np.linalg.svd(basis, full_matrices=True)
    k = int(np.sum(sv > 1e-10 * max(sv[0], 1.0)))
    return u[:, k:]


def polar_unitary(a: np.ndarray) -> np.ndarray:
    """Nearest unitary to ``a`` in Frobenius norm."""
    u, _, vh = np.linalg.svd(a)
    return u @ vh


def haar_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Orthonormalized matrix of independent standard complex Gaussians (Haar measure)."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    ph = np.where(np.abs(d) > 0, d / np.where(np.abs(d) > 0, np.abs(d), 1.0), 1.0)
    return q * ph
