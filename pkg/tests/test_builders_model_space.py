import numpy as np
import pytest

from csym.builders import BlaschkeProduct, blaschke_model_space, compressed_shift
from csym.builders.model_space import mobius
from csym.core import adjoint
from csym.diagnostics import is_partial_isometry
from csym.errors import CanonicalAlphaUndefined, InvalidLambda, InvalidParams, QuadratureTooCoarse


def test_mobius_vanishes_and_is_unimodular():
    a = 0.3 - 0.4j
    assert mobius(a, a) == 0
    z = np.exp(1j * np.linspace(0, 6, 7))
    assert np.allclose(np.abs(mobius(a, z)), 1)


def test_blaschke_values():
    phi = BlaschkeProduct([0, 0.5], 1j)
    assert phi(0) == 0
    assert phi(0.25) == pytest.approx(1j * 0.25 * (-0.25 / (1 - 0.125)))
    assert phi.degree == 2


def test_blaschke_json():
    phi = BlaschkeProduct([0.5, -0.3j], -1)
    back = BlaschkeProduct.from_json(phi.to_json())
    assert np.array_equal(back.zeros, phi.zeros)
    assert back.unimodular_factor == -1


@pytest.mark.parametrize("zeros", [[], [1.0], [0.5, 2j]])
def test_blaschke_invalid(zeros):
    with pytest.raises(InvalidParams):
        BlaschkeProduct(zeros)


def test_monomial_shift_is_jordan_block():
    s0 = compressed_shift([0, 0, 0, 0])
    assert np.allclose(s0, np.diag(np.ones(3), -1), atol=1e-14)
    assert is_partial_isometry(s0)
    p = adjoint(s0) @ s0
    assert np.linalg.matrix_rank(p) == 3


def test_monomial_conjugation_is_flip():
    bundle = blaschke_model_space(BlaschkeProduct([0, 0, 0, 0]), 0, alpha=1)
    assert np.allclose(bundle.C.s, np.fliplr(np.eye(4)), atol=1e-14)
    assert bundle.ok(1e-12)


def test_stated_instance():
    bundle = blaschke_model_space(BlaschkeProduct([0.5, -0.3j]), 0.2)
    assert bundle.checks["rank_one_identity"] <= 1e-10
    assert bundle.checks["norm_k"] <= 1e-10 and bundle.checks["norm_q"] <= 1e-10
    assert bundle.alpha == pytest.approx(-bundle.phi_at_lambda / abs(bundle.phi_at_lambda))
    assert bundle.ok(1e-10)


def test_canonical_alpha_gives_compression():
    phi = BlaschkeProduct([0.5, -0.3j, 0.1 + 0.6j])
    bundle = blaschke_model_space(phi, -0.4j)
    z = np.exp(2j * np.pi * np.arange(4096) / 4096)
    e = phi.basis(z)
    direct = (mobius(-0.4j, z) * e) @ e.conj().T / z.size
    assert np.linalg.norm(bundle.S_lambda - direct.T) <= 1e-12


def test_noncanonical_alpha(rng):
    bundle = blaschke_model_space(BlaschkeProduct([0.2, 0.7j, -0.5]), 0.3 + 0.3j, alpha=np.exp(0.7j))
    assert bundle.ok(1e-10)


def test_errors():
    phi = BlaschkeProduct([0.5])
    with pytest.raises(InvalidLambda):
        blaschke_model_space(phi, 1.0)
    with pytest.raises(CanonicalAlphaUndefined):
        blaschke_model_space(phi, 0.5)
    with pytest.raises(InvalidParams):
        blaschke_model_space(phi, 0, alpha=2)
    with pytest.raises(QuadratureTooCoarse):
        blaschke_model_space(BlaschkeProduct([0.99, 0.98]), 0, quadrature_points=16)


def test_bundle_degree_and_shapes():
    bundle = blaschke_model_space(BlaschkeProduct([0.1, 0.2, 0.3]), 0)
    assert bundle.degree == 3
    assert bundle.U_lambda.shape == (3, 3) and bundle.k_lambda.shape == (3,)
