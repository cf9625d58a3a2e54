"""Operators with explicit conjugations, and the counterexamples."""
from .algebraic import Degree2Data, degree2_conjugation, rank_one_operator
from .binormal import (
    AtomConjugation,
    BinormalAtoms,
    atom_conjugation,
    binormal_assemble,
    binormal_conjugation,
    binormal_operator,
    binormal_triangularize,
    sqrt_of_normal,
)
from .model_space import BlaschkeProduct, ModelSpaceBundle, blaschke_model_space, compressed_shift
from .partial_isometry import PartialIsometryFixture, partial_isometry_counterexample
from .perturbation import certify_defect_one, defect_one_decompose, normal_rank_one
from .volterra import volterra_discretize
from .zoo import ZOO_KINDS, nilpotent3, zoo_sample

__all__ = [
    "AtomConjugation",
    "BinormalAtoms",
    "BlaschkeProduct",
    "Degree2Data",
    "ModelSpaceBundle",
    "PartialIsometryFixture",
    "ZOO_KINDS",
    "atom_conjugation",
    "binormal_assemble",
    "binormal_conjugation",
    "binormal_operator",
    "binormal_triangularize",
    "blaschke_model_space",
    "certify_defect_one",
    "compressed_shift",
    "defect_one_decompose",
    "degree2_conjugation",
    "nilpotent3",
    "normal_rank_one",
    "partial_isometry_counterexample",
    "rank_one_operator",
    "sqrt_of_normal",
    "volterra_discretize",
    "zoo_sample",
]
