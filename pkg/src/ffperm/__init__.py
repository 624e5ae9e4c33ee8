"""Permutation trinomials over GF(q^3): arithmetic, inverses, equivalence."""

from .equiv import EquivalenceReport, catalog, d_filter, exponent_set, qm_decide
from .families import FamilySpec, build, closed_inverse, expected_pp, parse_family
from .field import Field, FieldElement, make_field
from .linearized import DicksonMatrix, LinearizedPolynomial, dickson_matrix, linv
from .perm import NotAPermutationError, PermutationVerdict, brute_inverse, compose_check, is_permutation
from .poly import DensePolynomial, SparsePolynomial, normalize, resultant
from .verify import TheoremReport, run_theorem

__all__ = [
    'DensePolynomial', 'DicksonMatrix', 'EquivalenceReport', 'Field', 'FieldElement', 'FamilySpec',
    'LinearizedPolynomial', 'NotAPermutationError', 'PermutationVerdict', 'SparsePolynomial',
    'TheoremReport', 'brute_inverse', 'build', 'catalog', 'closed_inverse', 'compose_check',
    'd_filter', 'dickson_matrix', 'expected_pp', 'exponent_set', 'is_permutation', 'linv',
    'make_field', 'normalize', 'parse_family', 'qm_decide', 'resultant', 'run_theorem',
]
