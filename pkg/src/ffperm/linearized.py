"""Linearized polynomials, Dickson matrices and their inverses.

A b-linearized polynomial over GF(b^n) is L(X) = sum_i alpha_i X^(b^i). Its
Dickson matrix D has entry (i, j) = alpha_{(i-j) mod n}^(b^j); L permutes the
field iff det D != 0, and then D^-1 is again a Dickson matrix, that of L^-1.
"""

import numpy as np

from . import _fpoly, _linalg
from .field import FieldElement
from .perm import NotAPermutationError


class LinearizedPolynomial:

    __slots__ = ('field', 'base', 'coeffs')

    def __init__(self, field, base, coeffs):
        coeffs = tuple(field(c) for c in coeffs)
        if base < 2 or base ** len(coeffs) != field.order:
            raise ValueError(f'{len(coeffs)} coefficients over base {base} '
                             f'do not describe GF({field.order})')
        self.field = field
        self.base = base
        self.coeffs = coeffs

    @classmethod
    def from_terms(cls, field, base, terms):
        """Build from (i, coefficient of X^(base^i)) pairs or a dict; indices
        reduce mod n and repeated indices add up."""
        n = _degree_over(field, base)
        cs = [field.zero] * n
        for i, c in (terms.items() if isinstance(terms, dict) else terms):
            cs[i % n] = cs[i % n] + field(c)
        return cls(field, base, cs)

    @property
    def n(self):
        return len(self.coeffs)

    def __eq__(self, other):
        return (isinstance(other, LinearizedPolynomial) and self.field == other.field
                and self.base == other.base and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.field, self.base, self.coeffs))

    def __call__(self, x):
        return eval_linearized(self, x)

    def values(self, xs):
        F = self.field
        xs = np.asarray(xs, dtype=np.int64)
        out = np.zeros(xs.shape, dtype=np.int64)
        for i, c in enumerate(self.coeffs):
            if c:
                out = F.v_add(out, F.v_mul(c.value, F.v_pow(xs, self.base ** i)))
        return out

    def table(self):
        return self.values(self.field.all())

    def __repr__(self):
        terms = [f'{c}*X^({self.base}^{i})' for i, c in enumerate(self.coeffs) if c]
        return ' + '.join(terms) or '0'


def _degree_over(field, base):
    n, size = 0, 1
    while size < field.order:
        size *= base
        n += 1
    if size != field.order:
        raise ValueError(f'GF({field.order}) is not an extension of degree n over {base}')
    return n


def eval_linearized(L, x):
    x = L.field(x)
    r = L.field.zero
    y = x
    for c in L.coeffs:
        r = r + c * y
        y = y ** L.base
    return r


class DicksonMatrix:
    """n x n matrix over a field, rows of FieldElements."""

    __slots__ = ('field', 'base', 'rows')

    def __init__(self, field, base, rows):
        self.field = field
        self.base = base
        self.rows = tuple(tuple(r) for r in rows)

    @property
    def n(self):
        return len(self.rows)

    def entry(self, i, j):
        return self.rows[i][j]

    def _indices(self):
        return [[c.value for c in r] for r in self.rows]

    def __eq__(self, other):
        return isinstance(other, DicksonMatrix) and self.rows == other.rows

    def __repr__(self):
        return '\n'.join(' '.join(str(c) for c in r) for r in self.rows)


def dickson_matrix(L):
    n, b = L.n, L.base
    rows = [[L.coeffs[(i - j) % n] ** (b ** j) for j in range(n)] for i in range(n)]
    return DicksonMatrix(L.field, b, rows)


def det(M):
    d, _ = _linalg.det_inverse(M.field, M._indices(), want_inverse=False)
    return FieldElement(M.field, d)


def linv(L):
    """Compositional inverse of a permuting linearized polynomial.

    The cofactors come from one elimination: with v = (x^(b^i))_i as a row
    vector, v D is (L(x)^(b^j))_j, so x = sum_i L(x)^(b^i) (D^-1)_{i,0}.
    Hence the coefficients of L^-1 are det(D)^-1 times the cofactors of the
    entries (0, i), i.e. the first column of D^-1.
    """
    M = dickson_matrix(L)
    d, inv = _linalg.det_inverse(L.field, M._indices())
    if not d:
        raise NotAPermutationError('Dickson matrix is singular; L does not permute the field')
    return LinearizedPolynomial(L.field, L.base, [L.field.from_index(inv[i][0]) for i in range(L.n)])


def first_column_cofactors(M):
    """Cofactors of the entries (i, 0), i.e. det(D) * (D^-1)_{0,i}."""
    d, inv = _linalg.det_inverse(M.field, M._indices())
    if not d:
        raise NotAPermutationError('singular matrix')
    return [FieldElement(M.field, M.field._mul(d, inv[0][i])) for i in range(M.n)]


def circulant_invertible(c, n=None, p=2):
    """Whether the circulant matrix with first column c is invertible over F_p.

    Multiplication by c(x) on F_p[x]/(x^n - 1) is that matrix, so it is
    invertible iff gcd(c(x), x^n - 1) = 1. Unlike the product over n-th roots
    of unity this works when p divides n.
    """
    c = [int(v) % p for v in c]
    if n is None:
        n = len(c)
    # reduce c(x) modulo x^n - 1 (indices past n wrap around)
    red = [0] * n
    for i, v in enumerate(c):
        red[i % n] = (red[i % n] + v) % p
    red = _fpoly.trim(red)
    if not red:
        raise ValueError('all-zero circulant')
    xn1 = [(-1) % p] + [0] * (n - 1) + [1]
    return len(_fpoly.gcd(red, xn1, p)) == 1
