"""Decide, certify and construct complex symmetry of finite matrices.

A matrix ``t`` is complex symmetric when ``t = C t* C`` for a conjugation
``C x = s conj(x)`` (``s`` symmetric unitary).  :func:`decide` returns a
:class:`Verdict` that is either certified by such an ``s``, refuted by an
obstruction witness, or left Unknown.
"""
from .core import (
    Conjugation,
    ObstructionWitness,
    Status,
    Tolerance,
    Verdict,
    canonical_conjugation,
    conj_apply,
    csym_residual,
    transport_conjugation,
    validate_conjugation,
)
from .errors import CsymError
from .solver import SolveConfig, SolveOutcome, decide, decide_with_trace

__version__ = "0.1.0"

__all__ = [
    "Conjugation",
    "CsymError",
    "ObstructionWitness",
    "SolveConfig",
    "SolveOutcome",
    "Status",
    "Tolerance",
    "Verdict",
    "canonical_conjugation",
    "conj_apply",
    "csym_residual",
    "decide",
    "decide_with_trace",
    "transport_conjugation",
    "validate_conjugation",
]
