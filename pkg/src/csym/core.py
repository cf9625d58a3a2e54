"""Conjugations, tolerances, verdicts and the residuals everything certifies against.

A conjugation on C^n is stored as the symmetric unitary matrix ``s`` of the
map ``x -> s @ conj(x)``.  Every conjugation on a finite-dimensional space has
this form, and the two defining properties become matrix identities:

* isometric      <=>  ``s`` unitary
* involutive     <=>  ``s @ conj(s) == I``  <=>  ``s == s.T`` (given unitarity)

An operator ``t`` is C-symmetric (``t = C t* C``) exactly when
``t @ s == s @ t.T``.
"""
from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidDimension,
    InvalidMatrix,
    InvalidParams,
    NotInvolutive,
    NotSquare,
    NotUnitary,
)

TOL_ENV_VAR = "CSYM_TOL"


@dataclass(frozen=True)
class Tolerance:
    """Relative and absolute tolerances used by every residual check."""

    rel: float = 1e-8
    abs: float = 1e-10

    def __post_init__(self):
        if not (self.rel >= 0 and self.abs >= 0):
            raise InvalidParams(f"tolerances must be nonnegative, got rel={self.rel}, abs={self.abs}")

    @classmethod
    def from_env(cls) -> "Tolerance":
        """Default tolerance, with ``rel`` overridden by ``$CSYM_TOL`` when set."""
        raw = os.environ.get(TOL_ENV_VAR)
        if raw is None or raw.strip() == "":
            return cls()
        try:
            return cls(rel=float(raw))
        except ValueError as exc:
            raise InvalidParams(f"{TOL_ENV_VAR}={raw!r} is not a number") from exc


def _tol(tol: Optional[Tolerance]) -> Tolerance:
    return Tolerance.from_env() if tol is None else tol


def as_matrix(a, *, square: bool = False) -> np.ndarray:
    """Return ``a`` as a read-only complex128 matrix, checking shape and finiteness."""
    m = np.array(a, dtype=np.complex128)
    if m.ndim != 2:
        raise InvalidMatrix(f"expected a 2-D array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidMatrix("matrix has NaN or infinite entries")
    if square and m.shape[0] != m.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {m.shape}")
    m.setflags(write=False)
    return m


def as_vector(x, n: Optional[int] = None) -> np.ndarray:
    v = np.asarray(x, dtype=np.complex128)
    if v.ndim != 1:
        raise InvalidMatrix(f"expected a 1-D vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InvalidMatrix("vector has NaN or infinite entries")
    if n is not None and v.shape[0] != n:
        raise DimensionMismatch(f"vector has length {v.shape[0]}, expected {n}")
    return v


def inner(x, y) -> complex:
    """``<x, y>``, linear in ``x`` and conjugate-linear in ``y``."""
    return complex(np.vdot(y, x))


def adjoint(t: np.ndarray) -> np.ndarray:
    return t.conj().T


def unitarity_residual(u: np.ndarray) -> float:
    """Frobenius norm of ``u u* - I``."""
    u = np.asarray(u)
    return float(np.linalg.norm(u @ adjoint(u) - np.eye(u.shape[0])))


def symmetry_residual(s: np.ndarray) -> float:
    s = np.asarray(s)
    return float(np.linalg.norm(s - s.T))


@dataclass(frozen=True, eq=False)
class Conjugation:
    """Conjugate-linear isometric involution ``x -> s @ conj(x)``.

    Build instances through :func:`validate_conjugation` (or the constructors
    that call it) so that the residual fields are meaningful.
    """

    s: np.ndarray
    unitarity_residual: float = 0.0
    symmetry_residual: float = 0.0

    def __post_init__(self):
        s = np.array(self.s, dtype=np.complex128)
        s.setflags(write=False)
        object.__setattr__(self, "s", s)

    @property
    def n(self) -> int:
        return self.s.shape[0]

    def __call__(self, x):
        return conj_apply(self, x)

    def __repr__(self):
        return f"Conjugation(n={self.n}, unitarity={self.unitarity_residual:.1e}, symmetry={self.symmetry_residual:.1e})"


def validate_conjugation(s, tol: Optional[Tolerance] = None) -> Conjugation:
    """Check that ``s`` is symmetric and unitary and wrap it as a :class:`Conjugation`.

    Raises
    ------
    NotSquare
        ``s`` is not square.
    NotUnitary
        ``||s s* - I||_F > tol.rel * n``.
    NotInvolutive
        ``||s - s.T||_F > tol.rel * n``.
    """
    tol = _tol(tol)
    s = as_matrix(s, square=True)
    n = s.shape[0]
    if n == 0:
        raise InvalidDimension("conjugation on a zero-dimensional space")
    bound = tol.rel * n
    ures = unitarity_residual(s)
    if ures > bound:
        raise NotUnitary(ures)
    sres = symmetry_residual(s)
    if sres > bound:
        raise NotInvolutive(sres)
    return Conjugation(s, ures, sres)


def conj_apply(c: Conjugation, x) -> np.ndarray:
    """Apply ``C`` to a vector (or to each column of a 2-D array)."""
    x = np.asarray(x, dtype=np.complex128)
    if x.shape[0] != c.n:
        raise DimensionMismatch(f"vector has length {x.shape[0]}, conjugation acts on C^{c.n}")
    return c.s @ x.conj()


def csym_residual(t, c: Conjugation) -> float:
    """Relative failure of ``t = C t* C``: ``||t s - s t^T||_F / max(1, ||t||_F)``."""
    t = as_matrix(t, square=True)
    if t.shape[0] != c.n:
        raise DimensionMismatch(f"operator is {t.shape[0]}x{t.shape[0]}, conjugation acts on C^{c.n}")
    s = c.s
    return float(np.linalg.norm(t @ s - s @ t.T) / max(1.0, np.linalg.norm(t)))


def flip_matrix(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)[::-1].copy()


def block_swap_matrix(n: int, ordering: str = "blocked") -> np.ndarray:
    """Matrix of ``(f1, f2) -> (f2, f1)`` on C^m + C^m, ``n = 2m``.

    ``ordering="blocked"`` lays out all first components before all second
    components; ``"interleaved"`` keeps each atom's pair adjacent.
    """
    if n < 2 or n % 2:
        raise InvalidDimension(f"block swap needs an even dimension, got {n}")
    m = n // 2
    swap = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    if ordering == "blocked":
        return np.kron(swap, np.eye(m))
    if ordering == "interleaved":
        return np.kron(np.eye(m), swap)
    raise InvalidParams(f"unknown ordering {ordering!r}")


def direct_sum_matrix(*blocks) -> np.ndarray:
    blocks = [np.asarray(b, dtype=np.complex128) for b in blocks]
    n = sum(b.shape[0] for b in blocks)
    m = sum(b.shape[1] for b in blocks)
    out = np.zeros((n, m), dtype=np.complex128)
    i = j = 0
    for b in blocks:
        out[i : i + b.shape[0], j : j + b.shape[1]] = b
        i += b.shape[0]
        j += b.shape[1]
    return out


def direct_sum(*conjugations: Conjugation, tol: Optional[Tolerance] = None) -> Conjugation:
    """Conjugation ``C1 + C2 + ...`` acting blockwise."""
    if not conjugations:
        raise InvalidParams("direct sum of no conjugations")
    return validate_conjugation(direct_sum_matrix(*(c.s for c in conjugations)), tol)


def canonical_conjugation(
    kind: str,
    n: Optional[int] = None,
    *,
    parts: Sequence[Conjugation] = (),
    ordering: str = "blocked",
    tol: Optional[Tolerance] = None,
) -> Conjugation:
    """Standard conjugations.

    ``entrywise``   s = I
    ``flip``        s = reversal permutation (discrete ``f(x) -> conj f(1 - x)``)
    ``block_swap``  s swaps the two halves, ``(f1, f2) -> (conj f2, conj f1)``
    ``direct_sum``  s = diag(s1, s2, ...) built from ``parts``
    """
    if kind == "direct_sum":
        if n is not None and n != sum(c.n for c in parts):
            raise InvalidDimension(f"parts act on C^{sum(c.n for c in parts)}, not C^{n}")
        return direct_sum(*parts, tol=tol)
    if n is None or n < 1:
        raise InvalidDimension(f"dimension must be >= 1, got {n}")
    if kind == "entrywise":
        s = np.eye(n, dtype=np.complex128)
    elif kind == "flip":
        s = flip_matrix(n)
    elif kind == "block_swap":
        s = block_swap_matrix(n, ordering)
    else:
        raise InvalidParams(f"unknown conjugation kind {kind!r}")
    return validate_conjugation(s, tol)


def transport_conjugation(c: Conjugation, q, tol: Optional[Tolerance] = None) -> Conjugation:
    """Certificate for ``q* t q`` given a certificate ``c`` for ``t`` (``q`` unitary).

    In the coordinates ``x' = q* x`` the map ``x -> s conj(x)`` has matrix
    ``q* s conj(q)``.  The often-quoted ``q^T s q`` is the same formula for
    ``conj(q)``, i.e. it certifies ``q^T t conj(q)``; the two agree for real
    orthogonal ``q``.
    """
    q = as_matrix(q, square=True)
    if q.shape[0] != c.n:
        raise DimensionMismatch("unitary and conjugation sizes differ")
    return validate_conjugation(q.conj().T @ c.s @ q.conj(), tol)


def pullback_conjugation(s_block, q, tol: Optional[Tolerance] = None) -> Conjugation:
    """Certificate for ``q b q*`` given the symmetric unitary ``s_block`` certifying ``b``."""
    q = np.asarray(q, dtype=np.complex128)
    return validate_conjugation(q @ np.asarray(s_block) @ q.T, tol)


class Status(str, enum.Enum):
    CSO = "cso"
    NOT_CSO = "not_cso"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ObstructionWitness:
    """Two quantities that would be equal for any complex symmetric operator."""

    test_name: str
    left_value: float
    right_value: float
    indices: Any = None
    detail: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "test": self.test_name,
            "left": self.left_value,
            "right": self.right_value,
            "indices": _plain(self.indices),
            "detail": self.detail,
        }


@dataclass(frozen=True)
class Verdict:
    """Outcome of a decision procedure.

    ``certificate`` is present iff ``status`` is CSO; ``obstruction`` iff NotCSO.
    """

    status: Status
    test: str
    residual: float = float("nan")
    certificate: Optional[Conjugation] = None
    obstruction: Optional[ObstructionWitness] = None
    reason: Optional[str] = None
    info: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.status is Status.CSO and self.certificate is None:
            raise ValueError("CSO verdict requires a certificate")
        if self.status is Status.NOT_CSO and self.obstruction is None:
            raise ValueError("NotCSO verdict requires an obstruction witness")

    @property
    def is_cso(self) -> bool:
        return self.status is Status.CSO

    @property
    def is_not_cso(self) -> bool:
        return self.status is Status.NOT_CSO

    def to_dict(self) -> dict:
        from .io import matrix_to_json

        return {
            "status": self.status.value,
            "test": self.test,
            "witness": None if self.obstruction is None else self.obstruction.to_dict(),
            "residual": None if not np.isfinite(self.residual) else float(self.residual),
            "reason": self.reason,
            "certificate": None if self.certificate is None else matrix_to_json(self.certificate.s),
        }


def cso(test: str, certificate: Conjugation, residual: float, **info) -> Verdict:
    return Verdict(Status.CSO, test, residual, certificate=certificate, info=info)


def not_cso(test: str, witness: ObstructionWitness, residual: float = float("nan"), **info) -> Verdict:
    return Verdict(Status.NOT_CSO, test, residual, obstruction=witness, info=info)


def unknown(test: str, residual: float = float("nan"), reason: Optional[str] = None, **info) -> Verdict:
    return Verdict(Status.UNKNOWN, test, residual, reason=reason, info=info)


def _plain(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (list, tuple)):
        return [_plain(o) for o in obj]
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    return obj
