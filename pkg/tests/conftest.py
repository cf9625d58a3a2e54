import numpy as np
import pytest

from csym._spectral import haar_unitary


def gauss(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def unitary(rng, n):
    return haar_unitary(rng, n)


def rotated(rng, t):
    q = unitary(rng, t.shape[0])
    return q @ t @ q.conj().T


def random_symmetric_cso(rng, n):
    """q s-symmetric: q (a + a^T) q* is certified by s = q q^T."""
    a = gauss(rng, n, n)
    q = unitary(rng, n)
    return q @ (a + a.T) @ q.conj().T, q @ q.T


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


SECTION4 = np.array([[0, 0, 1], [0, 1, 1], [0, 0, 0]], dtype=complex)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        ok, detail = RESULTS[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
