import numpy as np
import pytest

from csym.builders import degree2_conjugation, rank_one_operator, zoo_sample
from csym.core import csym_residual
from csym.errors import DimensionMismatch, NotDegreeTwo
from conftest import gauss, unitary


def test_rank_one_matrix():
    t = rank_one_operator([1, 0, 0], [0, 1, 0])
    expected = np.zeros((3, 3))
    expected[0, 1] = 1
    assert np.array_equal(t, expected)


def test_rank_one_projection():
    u = np.array([1, 1]) / np.sqrt(2)
    t = rank_one_operator(u, u)
    assert np.allclose(t @ t, t) and np.allclose(t, t.conj().T)


def test_rank_one_mismatch():
    with pytest.raises(DimensionMismatch):
        rank_one_operator([1, 2], [1, 2, 3])


def test_rank_one_nilpotent(rng):
    u = gauss(rng, 4)
    v = gauss(rng, 4)
    v -= np.vdot(u, v) / np.vdot(u, u) * u
    t = rank_one_operator(u, v)
    assert np.linalg.norm(t @ t) <= 1e-12
    c, data = degree2_conjugation(t)
    assert data.branch == "nilpotent"
    assert csym_residual(t, c) <= 1e-10


def test_rank_one_with_overlap(rng):
    u, v = gauss(rng, 5), gauss(rng, 5)
    t = rank_one_operator(u, v)
    c, data = degree2_conjugation(t)
    assert data.branch == "two_roots"
    assert set(np.round(data.roots, 10)) == {np.round(np.vdot(v, u), 10), 0}
    assert csym_residual(t, c) <= 1e-10


def test_projection_entrywise_in_eigenbasis(rng):
    q = unitary(rng, 5)
    t = q[:, :2] @ q[:, :2].conj().T
    c, data = degree2_conjugation(t)
    assert data.pairs == 0
    assert np.allclose(data.block_s, np.eye(5))
    assert csym_residual(t, c) <= 1e-12


def test_swap_plus_identity():
    t = np.zeros((5, 5))
    t[0, 1] = 5
    c, data = degree2_conjugation(t)
    assert csym_residual(t, c) == 0
    swap = np.array([[0, 1], [1, 0]])
    assert np.allclose(data.block_s[3:, 3:], swap)
    assert np.allclose(data.block_s[:3, :3], np.eye(3))


def test_scalar():
    c, data = degree2_conjugation(3j * np.eye(4))
    assert data.branch == "scalar"
    assert np.array_equal(c.s, np.eye(4))


def test_double_root(rng):
    u = gauss(rng, 4)
    v = gauss(rng, 4)
    v -= np.vdot(u, v) / np.vdot(u, u) * u
    t = 2 * np.eye(4) + rank_one_operator(u, v)
    c, data = degree2_conjugation(t)
    assert data.branch == "double_root"
    assert csym_residual(t, c) <= 1e-10


def test_round_trip_and_residual():
    for seed in range(60):
        t = zoo_sample("degree2", seed, 1 + seed % 9)
        c, data = degree2_conjugation(t)
        assert np.linalg.norm(data.reconstruct() - t) <= 1e-10
        assert csym_residual(t, c) <= 1e-10


def test_block_structure(rng):
    t = zoo_sample("degree2", 11, 6)
    _, data = degree2_conjugation(t)
    k = data.pairs
    lead = data.block[: 6 - 2 * k, : 6 - 2 * k]
    assert np.allclose(lead, np.diag(np.diagonal(lead)), atol=1e-10)


def test_not_degree_two():
    with pytest.raises(NotDegreeTwo):
        degree2_conjugation(np.diag([1.0, 2.0, 3.0]))
