"""Binormal operators over an atomic measure and their conjugations.

On ``L^2(mu)`` with ``mu`` supported on ``m`` atoms, commuting normal operators
are simultaneously diagonal, so a binormal operator is the ``2m x 2m`` matrix

    [[diag(n11), diag(n12)],
     [diag(n21), diag(n22)]]

("blocked" ordering: the first ``m`` coordinates carry the first component
``f1``, the last ``m`` carry ``f2``).  Each atom contributes an independent
2x2 block, so triangularization and the conjugation are built atom by atom.

For an upper-triangular atom ``[[u1, v], [0, u2]]`` the conjugation block is

* ``u1 == u2``:          the swap ``(f1, f2) -> (conj f2, conj f1)``
* ``u1 != u2, v == 0``:  entrywise conjugation (the atom is normal)
* otherwise:             ``U K`` with ``U = [[a, b], [b, -conj a]]`` where
  ``gamma = (v/|v|) (|u1-u2|/(u1-u2))``, ``a = gamma |u1-u2| / rho``,
  ``b = |v| / rho``, ``rho = sqrt(|u1-u2|^2 + |v|^2)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..core import Conjugation, Tolerance, _tol, adjoint, validate_conjugation
from ..errors import InvalidParams, LengthMismatch

SWAP = np.array([[0, 1], [1, 0]], dtype=np.complex128)


@dataclass(frozen=True)
class Atom:
    u1: complex
    v: complex
    u2: complex


@dataclass(frozen=True, eq=False)
class BinormalAtoms:
    """Per-atom values ``(u1, v, u2)`` of ``[[u1, v], [0, u2]]`` and the atom masses."""

    u1: np.ndarray
    v: np.ndarray
    u2: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        arrs = [np.atleast_1d(np.asarray(x, dtype=np.complex128)) for x in (self.u1, self.v, self.u2)]
        if len({a.shape for a in arrs}) != 1 or arrs[0].ndim != 1:
            raise LengthMismatch("u1, v, u2 must be 1-D arrays of equal length")
        if arrs[0].size == 0:
            raise InvalidParams("at least one atom is required")
        w = np.atleast_1d(np.asarray(self.weights, dtype=float))
        if w.shape != arrs[0].shape:
            raise LengthMismatch("one weight per atom is required")
        if not np.all(w > 0):
            raise InvalidParams("atom weights must be positive")
        for name, a in zip(("u1", "v", "u2"), arrs):
            a.setflags(write=False)
            object.__setattr__(self, name, a)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_values(cls, u1, v, u2, weights=None) -> "BinormalAtoms":
        u1 = np.atleast_1d(np.asarray(u1, dtype=np.complex128))
        if weights is None:
            weights = np.ones(u1.shape)
        return cls(u1, v, u2, weights)

    def __len__(self):
        return self.u1.size

    def __iter__(self):
        for a, b, c in zip(self.u1, self.v, self.u2):
            yield Atom(complex(a), complex(b), complex(c))

    def matrix(self, ordering: str = "blocked") -> np.ndarray:
        return binormal_assemble(self.u1, self.v, np.zeros_like(self.u1), self.u2, ordering=ordering)

    def to_json(self) -> dict:
        from ..io import complex_to_json

        return {
            "atoms": [
                {"u1": complex_to_json(a.u1), "v": complex_to_json(a.v), "u2": complex_to_json(a.u2), "w": float(w)}
                for a, w in zip(self, self.weights)
            ]
        }

    @classmethod
    def from_json(cls, obj) -> "BinormalAtoms":
        from ..io import complex_from_json

        try:
            atoms = obj["atoms"]
            u1 = [complex_from_json(a["u1"]) for a in atoms]
            v = [complex_from_json(a["v"]) for a in atoms]
            u2 = [complex_from_json(a["u2"]) for a in atoms]
            w = [float(a.get("w", 1.0)) for a in atoms]
        except (KeyError, TypeError) as exc:
            raise InvalidParams(f"bad BinormalAtoms JSON: {exc}") from exc
        return cls(u1, v, u2, w)


def _layout(m: int, ordering: str) -> tuple[np.ndarray, np.ndarray]:
    """Indices of the first and second component of each atom."""
    k = np.arange(m)
    if ordering == "blocked":
        return k, k + m
    if ordering == "interleaved":
        return 2 * k, 2 * k + 1
    raise InvalidParams(f"unknown ordering {ordering!r}")


def assemble_blocks(blocks: np.ndarray, ordering: str = "blocked") -> np.ndarray:
    """Place per-atom 2x2 blocks (shape ``(m, 2, 2)``) into a ``2m x 2m`` matrix."""
    blocks = np.asarray(blocks, dtype=np.complex128)
    m = blocks.shape[0]
    i1, i2 = _layout(m, ordering)
    out = np.zeros((2 * m, 2 * m), dtype=np.complex128)
    out[i1, i1] = blocks[:, 0, 0]
    out[i1, i2] = blocks[:, 0, 1]
    out[i2, i1] = blocks[:, 1, 0]
    out[i2, i2] = blocks[:, 1, 1]
    return out


def extract_blocks(t: np.ndarray, ordering: str = "blocked") -> np.ndarray:
    m = t.shape[0] // 2
    i1, i2 = _layout(m, ordering)
    blocks = np.empty((m, 2, 2), dtype=np.complex128)
    blocks[:, 0, 0] = t[i1, i1]
    blocks[:, 0, 1] = t[i1, i2]
    blocks[:, 1, 0] = t[i2, i1]
    blocks[:, 1, 1] = t[i2, i2]
    return blocks


def binormal_assemble(n11, n12, n21, n22, ordering: str = "blocked") -> np.ndarray:
    """Matrix of ``[[N11, N12], [N21, N22]]`` with ``Nij = diag(nij)`` on the atoms."""
    vals = [np.atleast_1d(np.asarray(x, dtype=np.complex128)) for x in (n11, n12, n21, n22)]
    if len({v.shape for v in vals}) != 1 or vals[0].ndim != 1:
        raise LengthMismatch("the four value lists must have the same length")
    if vals[0].size == 0:
        raise InvalidParams("at least one atom is required")
    blocks = np.stack([np.stack([vals[0], vals[1]], -1), np.stack([vals[2], vals[3]], -1)], -2)
    return assemble_blocks(blocks, ordering)


def schur_2x2(block) -> tuple[np.ndarray, np.ndarray]:
    """Unitary ``z`` and upper-triangular ``z* block z`` for one 2x2 block."""
    block = np.asarray(block, dtype=np.complex128)
    p, q = block[0]
    r, s = block[1]
    if r == 0:
        return np.eye(2, dtype=np.complex128), block.copy()
    tr = p + s
    disc = np.sqrt(complex((p - s) ** 2 + 4 * q * r))
    lam = 0.5 * (tr + disc)
    x = np.array([lam - s, r], dtype=np.complex128)
    x /= np.linalg.norm(x)
    z = np.array([[x[0], np.conj(x[1])], [x[1], -np.conj(x[0])]])
    tri = adjoint(z) @ block @ z
    tri[1, 0] = 0.0
    return z, tri


def binormal_triangularize(n11, n12, n21, n22, ordering: str = "blocked"):
    """Per-atom Schur reduction.

    Returns ``(atoms, w)`` with ``w`` unitary and block-diagonal over the atoms
    such that ``w* t w`` equals ``atoms.matrix(ordering)`` up to rounding.
    """
    t = binormal_assemble(n11, n12, n21, n22, ordering)
    blocks = extract_blocks(t, ordering)
    zs, tris = zip(*(schur_2x2(b) for b in blocks))
    tris = np.array(tris)
    atoms = BinormalAtoms.from_values(tris[:, 0, 0], tris[:, 0, 1], tris[:, 1, 1])
    return atoms, assemble_blocks(np.array(zs), ordering)


@dataclass(frozen=True)
class AtomConjugation:
    case: str  # "E" (u1 == u2), "F" (v == 0) or "generic"
    block: np.ndarray
    a: Optional[complex] = None
    b: Optional[float] = None


def atom_conjugation(u1: complex, v: complex, u2: complex, split_tol: float = 1e-10) -> AtomConjugation:
    """Symmetric unitary 2x2 block certifying ``[[u1, v], [0, u2]]``."""
    d = u1 - u2
    scale = max(1.0, abs(u1), abs(u2))
    if abs(d) <= split_tol * scale:
        return AtomConjugation("E", SWAP.copy())
    if abs(v) <= split_tol * scale:
        return AtomConjugation("F", np.eye(2, dtype=np.complex128))
    gamma = (v / abs(v)) * (abs(d) / d)
    rho = np.hypot(abs(d), abs(v))
    a = gamma * abs(d) / rho
    b = abs(v) / rho
    block = np.array([[a, b], [b, -np.conj(a)]], dtype=np.complex128)
    return AtomConjugation("generic", block, complex(a), float(b))


def binormal_conjugation(
    atoms: BinormalAtoms,
    tol: Optional[Tolerance] = None,
    ordering: str = "blocked",
    split_tol: Optional[float] = None,
) -> Conjugation:
    """Conjugation ``C`` with ``atoms.matrix()`` C-symmetric.

    ``split_tol`` (default ``tol.abs``) decides the E/F case split relative to
    ``max(1, |u1|, |u2|)``; ties go to the E case.
    """
    tol = _tol(tol)
    split = tol.abs if split_tol is None else split_tol
    blocks = np.array([atom_conjugation(a.u1, a.v, a.u2, split).block for a in atoms])
    return validate_conjugation(assemble_blocks(blocks, ordering), tol)


def atom_cases(atoms: BinormalAtoms, split_tol: float = 1e-10) -> list[str]:
    return [atom_conjugation(a.u1, a.v, a.u2, split_tol).case for a in atoms]


def binormal_operator(n11, n12, n21, n22, tol: Optional[Tolerance] = None, ordering: str = "blocked"):
    """Assembled operator with a certifying conjugation (triangularize, build, pull back)."""
    tol = _tol(tol)
    t = binormal_assemble(n11, n12, n21, n22, ordering)
    atoms, w = binormal_triangularize(n11, n12, n21, n22, ordering)
    c = binormal_conjugation(atoms, tol, ordering)
    return t, validate_conjugation(w @ c.s @ w.T, tol)


def sqrt_of_normal(b: Sequence[complex], c: Sequence[float], a: Sequence[complex] = (), tol: Optional[Tolerance] = None):
    """``A + [[B, C], [0, -B]]`` with ``A``, ``B`` diagonal normal and ``C >= 0`` diagonal.

    The square of this operator is normal.  Returns ``(t, conjugation)``; the
    ``A`` part is conjugated entrywise.
    """
    tol = _tol(tol)
    b = np.atleast_1d(np.asarray(b, dtype=np.complex128))
    c = np.atleast_1d(np.asarray(c, dtype=np.complex128))
    if np.any(np.abs(c.imag) > 0) or np.any(c.real < 0):
        raise InvalidParams("C must be a positive operator (nonnegative reals on the atoms)")
    atoms = BinormalAtoms.from_values(b, c, -b)
    core = atoms.matrix()
    conj = binormal_conjugation(atoms, tol)
    a = np.atleast_1d(np.asarray(a, dtype=np.complex128))
    if a.size == 0:
        return core, conj
    from ..core import direct_sum_matrix

    t = direct_sum_matrix(np.diag(a), core)
    s = direct_sum_matrix(np.eye(a.size), conj.s)
    return t, validate_conjugation(s, tol)
