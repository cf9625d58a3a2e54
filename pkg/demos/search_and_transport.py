"""
Finding a conjugation by search
===============================

When no closed form applies, the solver looks for a unitary ``q`` making
``q* T q`` a symmetric matrix; then ``s = q q^T`` certifies ``T``.  The
certificate is checked, never trusted.
"""

import numpy as np

from csym import SolveConfig, csym_residual, decide_with_trace, transport_conjugation
from csym._spectral import haar_unitary

rng = np.random.default_rng(7)
n = 5

# Jordan blocks are complex symmetric, but a random unitary hides the
# conjugation.  The spectrum is a single eigenvalue, so neither the Gram test
# nor the eigenphase construction has anything to work with.
nil = np.zeros((n, n), dtype=complex)
nil[0, 1] = nil[1, 2] = nil[3, 4] = 1
w = haar_unitary(rng, n)
t = w @ nil @ w.conj().T

dec = decide_with_trace(t, SolveConfig(restarts=20, seed=0))
print("verdict:", dec.verdict.status.value, "by", dec.verdict.test)
for rec in dec.stages:
    print(f"  {rec.name:<22} {rec.verdict.status.value}")
c = dec.verdict.certificate
print("certificate residual:", f"{csym_residual(t, c):.1e}")

# Certificates move with unitary similarity: q* T q is certified by q* s conj(q).
q = haar_unitary(rng, n)
moved = transport_conjugation(c, q)
print("transported residual:", f"{csym_residual(q.conj().T @ t @ q, moved):.1e}")
