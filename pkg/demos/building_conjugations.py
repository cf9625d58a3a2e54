"""
Operators that come with their conjugation
===========================================

Each builder returns an operator together with an explicit symmetric unitary
``s``.  The check is always the same number: ``||T s - s T^T|| / ||T||``.
"""

import numpy as np

from csym import csym_residual
from csym.builders import (
    BinormalAtoms,
    BlaschkeProduct,
    binormal_conjugation,
    blaschke_model_space,
    normal_rank_one,
    volterra_discretize,
)

rng = np.random.default_rng(1)
np.set_printoptions(precision=3, suppress=True, linewidth=100)


def gauss(*shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


# Binormal operators reduce, atom by atom, to 2x2 upper triangular blocks.
# Equal diagonal entries take the swap conjugation; otherwise a unitary
# [[a, b], [b, -conj(a)]] mixes the two coordinates.
atoms = BinormalAtoms.from_values([1, 2j, 0.5], [0, 3, 1 - 1j], [2, 2j, -1])
c = binormal_conjugation(atoms)
print("binormal, 3 atoms:       residual", f"{csym_residual(atoms.matrix(), c):.1e}")
print(c.s)

# The Volterra operator is symmetric for f(x) -> conj(f(1 - x)).  The
# quadrature below keeps that exact and also keeps (V + V*)/2 of rank one.
v, c = volterra_discretize(200)
sv = np.linalg.svd(0.5 * (v + v.conj().T), compute_uv=False)
print("Volterra, n = 200:       residual", f"{csym_residual(v, c):.1e}", " second singular value", f"{sv[1]:.1e}")

# Normal plus a rank-one perturbation of the form a (theta v) (x) v.
n = 8
theta = np.exp(2j * np.pi * rng.random(n))
t, c = normal_rank_one(gauss(n), theta, 1.5 - 0.5j, gauss(n))
print("normal + rank one, n = 8: residual", f"{csym_residual(t, c):.1e}")

# Compressed shifts on a model space, computed in the Takenaka basis.
phi = BlaschkeProduct([0.5, -0.3j, 0.2 + 0.6j])
bundle = blaschke_model_space(phi, 0.2)
print("\nmodel space, degree 3, lambda = 0.2")
for key, val in bundle.checks.items():
    print(f"  {key:<20} {val:.1e}")
