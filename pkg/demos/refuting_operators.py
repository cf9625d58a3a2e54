"""
Refuting complex symmetry
=========================

A matrix is complex symmetric when some conjugation ``C x = s conj(x)``
satisfies ``C T C = T*``.  Proving that no such ``s`` exists needs an
invariant that every complex symmetric matrix respects.  This script walks
through the ones the package uses.
"""

import numpy as np

from csym import decide_with_trace
from csym.builders import nilpotent3, partial_isometry_counterexample
from csym.diagnostics import simple_eig_pairs_test, transpose_trace_test

np.set_printoptions(precision=4, suppress=True)

# A conjugation maps eigenvectors of T to eigenvectors of T*, so the moduli of
# inner products between unit eigenvectors must agree for T and T*.
# Perturbing a projection by a nilpotent breaks this.
t = np.array([[0, 0, 1], [0, 1, 1], [0, 0, 0]], dtype=complex)
v = simple_eig_pairs_test(t)
print("projection perturbation:", v.status.value)
print("  |<x0, x1>| =", round(v.obstruction.left_value, 6), " but  |<y0, y1>| =", round(v.obstruction.right_value, 6))

# The 3x3 nilpotent [[0, a, 0], [0, 0, b], [0, 0, 0]] is complex symmetric
# exactly when ab = 0 or |a| = |b|.  It has one eigenvalue, so the Gram test
# is silent; the kernel flags of T and T* do the work instead.
print("\nnilpotent grid (rows a, columns b):")
vals = [0, 1, 2]
for a in vals:
    row = []
    for b in vals:
        dec = decide_with_trace(nilpotent3(a, b))
        row.append(f"{dec.verdict.status.value:>8}")
    print(f"  a={a}", " ".join(row))

# Trace words give a third invariant: tr w(T, T*) = tr w(T*, T)^T for any word
# when T is unitarily equivalent to its transpose.  The shortest word that
# separates the (2, 1) nilpotent from its transpose has length six.
w = transpose_trace_test(nilpotent3(2, 1))
o = w.obstruction
print(f"\ntrace word {o.indices} (T = t, A = t*): {o.left_value.real:g} versus {o.right_value.real:g}")

# The partial isometry counterexample is built from a 3x3 block A whose
# eigenvectors meet at modulus 1/2 while those of A* meet at 1/3.  The same
# eigenvalues survive in T, so the Gram test already refutes T itself.
fx = partial_isometry_counterexample(2)
dec = decide_with_trace(fx.T)
print("\npartial isometry T (5x5):", dec.verdict.status.value, "via", dec.verdict.test)
for rec in dec.stages:
    print(f"  {rec.name:<24} {rec.verdict.status.value}")
