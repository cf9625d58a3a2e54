"""Model spaces of finite Blaschke products, Clark-type unitaries and compressed shifts.

For a Blaschke product ``phi`` with zeros ``a_1, ..., a_d`` the model space
``K = H^2 - phi H^2`` has the orthonormal (Takenaka) basis

    e_k(z) = sqrt(1 - |a_k|^2) / (1 - conj(a_k) z) * prod_{j<k} b_{a_j}(z)

with ``b_a(z) = (z - a) / (1 - conj(a) z)``.  All inner products are taken on
the unit circle with a uniform rule, which is spectrally accurate here since
every integrand is rational with poles off the circle.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from ..core import Conjugation, Tolerance, _tol, adjoint, conj_apply, csym_residual, validate_conjugation
from ..errors import CanonicalAlphaUndefined, InvalidLambda, InvalidParams, QuadratureTooCoarse

DEFAULT_POINTS = 2048


def mobius(a: complex, z):
    """Disk automorphism ``b_a(z) = (z - a) / (1 - conj(a) z)``."""
    return (z - a) / (1.0 - np.conj(a) * z)


@dataclass(frozen=True, eq=False)
class BlaschkeProduct:
    """``phi(z) = unimodular_factor * prod_k b_{a_k}(z)``."""

    zeros: np.ndarray
    unimodular_factor: complex = 1.0

    def __post_init__(self):
        zeros = np.atleast_1d(np.asarray(self.zeros, dtype=np.complex128))
        if zeros.ndim != 1 or zeros.size == 0:
            raise InvalidParams("a Blaschke product needs at least one zero")
        if not np.all(np.abs(zeros) < 1):
            raise InvalidParams("Blaschke zeros must lie in the open unit disk")
        factor = complex(self.unimodular_factor)
        if abs(abs(factor) - 1.0) > 1e-12:
            raise InvalidParams(f"unimodular factor has modulus {abs(factor)}")
        zeros.setflags(write=False)
        object.__setattr__(self, "zeros", zeros)
        object.__setattr__(self, "unimodular_factor", factor)

    @property
    def degree(self) -> int:
        return self.zeros.size

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        out = np.full(z.shape, self.unimodular_factor, dtype=np.complex128)
        for a in self.zeros:
            out = out * mobius(a, z)
        return out if out.ndim else complex(out)

    def basis(self, z) -> np.ndarray:
        """Values of ``e_0, ..., e_{d-1}`` at the points ``z`` (shape ``(d, len(z))``)."""
        z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
        out = np.empty((self.degree, z.size), dtype=np.complex128)
        prefix = np.ones(z.size, dtype=np.complex128)
        for k, a in enumerate(self.zeros):
            out[k] = np.sqrt(1.0 - abs(a) ** 2) / (1.0 - np.conj(a) * z) * prefix
            prefix = prefix * mobius(a, z)
        return out

    def to_json(self) -> dict:
        from ..io import complex_to_json

        return {"zeros": [complex_to_json(a) for a in self.zeros], "factor": complex_to_json(self.unimodular_factor)}

    @classmethod
    def from_json(cls, obj) -> "BlaschkeProduct":
        from ..io import complex_from_json

        if not isinstance(obj, dict) or "zeros" not in obj:
            raise InvalidParams("Blaschke product JSON needs 'zeros'")
        zeros = [complex_from_json(a) for a in obj["zeros"]]
        return cls(zeros, complex_from_json(obj.get("factor", 1.0)))


@dataclass(frozen=True, eq=False)
class ModelSpaceBundle:
    """Matrices in the Takenaka basis of ``K``.

    ``S_lambda`` compresses multiplication by ``b_lambda``; ``U_lambda`` is the
    unitary equal to ``b_lambda`` on ``q_lambda``-perp and sending ``q_lambda``
    to ``alpha k_lambda``; ``C`` is ``f -> conj(f z) phi`` on the circle.
    ``checks`` stores every verified residual.
    """

    phi: BlaschkeProduct
    lam: complex
    alpha: complex
    phi_at_lambda: complex
    U_lambda: np.ndarray
    S_lambda: np.ndarray
    C: Conjugation
    k_lambda: np.ndarray
    q_lambda: np.ndarray
    quadrature_points: int
    checks: dict = field(default_factory=dict)

    @property
    def degree(self) -> int:
        return self.phi.degree

    def ok(self, bound: float) -> bool:
        return all(v is None or v <= bound for v in self.checks.values())


def _ip(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Boundary inner products ``<f_k, g_j>`` as a ``(len(g), len(f))`` matrix.

    Sums run along a contiguous axis with numpy's pairwise summation, so the
    result does not depend on BLAS threading.
    """
    f = np.atleast_2d(f)
    g = np.atleast_2d(g)
    return np.sum(f[None, :, :] * g.conj()[:, None, :], axis=-1) / f.shape[-1]


def blaschke_model_space(
    phi: BlaschkeProduct,
    lam: complex,
    alpha: Union[complex, str] = "canonical",
    quadrature_points: int = DEFAULT_POINTS,
    tol: Optional[Tolerance] = None,
) -> ModelSpaceBundle:
    """Assemble ``S_lambda``, ``U_lambda``, ``C``, ``k_lambda`` and ``q_lambda``.

    Parameters
    ----------
    phi : BlaschkeProduct
    lam : complex
        Point of the open unit disk.
    alpha : complex or "canonical"
        Unimodular constant of ``U_lambda``; "canonical" means
        ``-phi(lam) / |phi(lam)|``, which makes ``S_lambda`` the compression of
        ``b_lambda``.
    quadrature_points : int
        Number of equispaced nodes on the circle.

    Raises
    ------
    InvalidLambda, CanonicalAlphaUndefined, QuadratureTooCoarse
    """
    tol = _tol(tol)
    lam = complex(lam)
    if not abs(lam) < 1:
        raise InvalidLambda(f"|lambda| = {abs(lam)} is not < 1")
    if int(quadrature_points) < 2 * phi.degree + 2:
        raise InvalidParams("quadrature_points is too small for the degree")
    n_pts = int(quadrature_points)
    phi_lam = complex(phi(lam))
    if isinstance(alpha, str):
        if alpha != "canonical":
            raise InvalidParams(f"alpha must be unimodular or 'canonical', got {alpha!r}")
        if abs(phi_lam) <= 1e-14:
            raise CanonicalAlphaUndefined("phi(lambda) = 0, so -phi/|phi| is undefined")
        alpha = -phi_lam / abs(phi_lam)
    alpha = complex(alpha)
    if abs(abs(alpha) - 1.0) > tol.rel:
        raise InvalidParams(f"alpha has modulus {abs(alpha)}")

    z = np.exp(2j * np.pi * np.arange(n_pts) / n_pts)
    e = phi.basis(z)
    gram = _ip(e, e)
    d = phi.degree
    gram_res = float(np.max(np.abs(gram - np.eye(d))))
    if gram_res > tol.rel:
        raise QuadratureTooCoarse(gram_res, n_pts)

    phi_z = phi(z)
    s_mat = _ip(mobius(lam, z) * e, e)
    c_mat = _ip(np.conj(e * z) * phi_z, e)
    c_mat = 0.5 * (c_mat + c_mat.T)  # symmetric up to quadrature error
    conj = validate_conjugation(c_mat, tol)

    scale = np.sqrt((1.0 - abs(lam) ** 2) / (1.0 - abs(phi_lam) ** 2))
    k_fun = scale * (1.0 - np.conj(phi_lam) * phi_z) / (1.0 - np.conj(lam) * z)
    q_fun = scale * (phi_z - phi_lam) / (z - lam)
    k = _ip(k_fun, e)[:, 0]
    q = _ip(q_fun, e)[:, 0]

    eye = np.eye(d)
    u_mat = s_mat @ (eye - np.outer(q, q.conj())) + alpha * np.outer(k, q.conj())
    # closed form of the kernel coordinates: <K_lam, e_j> = conj(e_j(lam))
    k_exact = scale * np.conj(phi.basis([lam])[:, 0])
    rank_one = s_mat - (u_mat - (alpha + phi_lam) * np.outer(k, q.conj()))
    checks = {
        "gram": gram_res,
        "norm_k": abs(np.linalg.norm(k) - 1.0),
        "norm_q": abs(np.linalg.norm(q) - 1.0),
        "kernel_closed_form": float(np.linalg.norm(k - k_exact)),
        "unitarity": float(np.linalg.norm(adjoint(u_mat) @ u_mat - eye)),
        "q_minus_Ck": float(np.linalg.norm(q - conj_apply(conj, k))),
        "rank_one_identity": float(np.linalg.norm(rank_one)),
        "S_q": float(np.linalg.norm(s_mat @ q + phi_lam * k)),
        "csym_S": csym_residual(s_mat, conj),
        "csym_U": csym_residual(u_mat, conj),
    }
    return ModelSpaceBundle(phi, lam, alpha, phi_lam, u_mat, s_mat, conj, k, q, n_pts, checks)


def compressed_shift(zeros: Sequence[complex], quadrature_points: int = DEFAULT_POINTS, tol=None) -> np.ndarray:
    """``S_0 f = P(z f)`` on the model space of the Blaschke product with these zeros."""
    phi = BlaschkeProduct(zeros)
    z = np.exp(2j * np.pi * np.arange(quadrature_points) / quadrature_points)
    e = phi.basis(z)
    return _ip(z * e, e)
