"""Univariate polynomials over a finite field.

:class:`SparsePolynomial` is a polynomial viewed as a function on its field:
exponents reduce modulo ``|F| - 1`` (keeping the constant term apart, since
X^(|F|-1) and 1 differ at 0). :class:`DensePolynomial` is an ordinary
polynomial in F[X], used for gcds and resultants.
"""

import numpy as np

from . import _linalg
from .field import FieldElement


def reduce_exponent(e, order):
    """Representative of e in [1, order-1] for e >= 1; 0 stays 0."""
    if e < 0:
        raise ValueError('negative exponent')
    if e == 0:
        return 0
    return (e - 1) % (order - 1) + 1


class SparsePolynomial:
    """Sum of c_e X^e with nonzero coefficients, stored as {e: c_e}."""

    __slots__ = ('field', '_terms')

    def __init__(self, field, terms=None):
        self.field = field
        clean = {}
        for e, c in dict(terms or {}).items():
            e = int(e)
            if e < 0:
                raise ValueError('negative exponent')
            c = field(c)
            if c:
                clean[e] = c
        self._terms = clean

    @classmethod
    def monomial(cls, field, e, c=1):
        return cls(field, {e: c})

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        """(exponent, coefficient) pairs, highest exponent first."""
        return sorted(self._terms.items(), reverse=True)

    def exponents(self):
        return sorted(self._terms, reverse=True)

    def coefficient(self, e):
        return self._terms.get(e, self.field.zero)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        return (isinstance(other, SparsePolynomial) and self.field == other.field
                and self._terms == other._terms)

    def __hash__(self):
        return hash((self.field, tuple(self.items())))

    def __add__(self, other):
        if other.field != self.field:
            raise TypeError('polynomials over different fields')
        t = dict(self._terms)
        for e, c in other._terms.items():
            t[e] = t[e] + c if e in t else c
        return SparsePolynomial(self.field, t)

    def __sub__(self, other):
        return self + other.scale(-self.field.one)

    def scale(self, c):
        c = self.field(c)
        return SparsePolynomial(self.field, {e: c * v for e, v in self._terms.items()})

    def __call__(self, x):
        return evaluate(self, x)

    def values(self, xs):
        """Vectorised evaluation at an array of element indices."""
        F = self.field
        xs = np.asarray(xs, dtype=np.int64)
        out = np.zeros(xs.shape, dtype=np.int64)
        for e, c in self._terms.items():
            out = F.v_add(out, F.v_mul(c.value, F.v_pow(xs, e)))
        return out

    def table(self):
        """Values at every field element, indexed by enumeration order."""
        return self.values(self.field.all())

    def __repr__(self):
        return format_poly(self)


def evaluate(f, x):
    x = f.field(x)
    r = f.field.zero
    for e, c in f._terms.items():
        r = r + c * x ** e
    return r


def normalize(f):
    t = {}
    for e, c in f._terms.items():
        r = reduce_exponent(e, f.field.order)
        t[r] = t[r] + c if r in t else c
    return SparsePolynomial(f.field, t)


def transform(f, a, b, d):
    """Normal form of a * f(b * X^d)."""
    F = f.field
    a, b = F(a), F(b)
    if not a or not b:
        raise ValueError('a and b must be nonzero')
    if np.gcd(d, F.order - 1) != 1:
        raise ValueError(f'd={d} is not a unit modulo {F.order - 1}')
    t = {}
    for e, c in f._terms.items():
        r = reduce_exponent(e * d, F.order)
        v = a * c * b ** e
        t[r] = t[r] + v if r in t else v
    return SparsePolynomial(F, t)


def interpolate(field, values):
    """The normalized polynomial inducing the given value table.

    Uses sum_{y != 0} y^t = -1 if (|F|-1) | t else 0, so for 1 <= j <= |F|-2
    the coefficient of X^j is -sum h(y) y^(-j), and the X^(|F|-1) coefficient
    also absorbs -h(0).
    """
    F = field
    F._require_tables()
    values = np.asarray(values, dtype=np.int64)
    n = F.order - 1
    h0 = int(values[0])
    nz = np.flatnonzero(values[1:]) + 1   # y with h(y) != 0
    terms = {}
    if h0:
        terms[0] = F.from_index(h0)
    if nz.size:
        ly = F._log[nz]
        lh = F._log[values[nz]]
        chunk = max(1, (1 << 22) // nz.size)
        for start in range(1, n + 1, chunk):
            js = np.arange(start, min(start + chunk, n + 1), dtype=np.int64)
            prods = F._exp[(lh[None, :] - js[:, None] * ly[None, :]) % n]
            sums = F.v_neg(F.v_sum(prods, axis=1))
            for j, s in zip(js, sums):
                if j == n:
                    s = F._sub(int(s), h0)
                if s:
                    terms[int(j)] = F.from_index(int(s))
    elif h0:
        terms[n] = F.from_index(F._neg(h0))
    return SparsePolynomial(F, terms)


def format_poly(f):
    if not f._terms:
        return f'{f.field.canonical_id}:0'
    return '+'.join(f'{c}*X^{e}' for e, c in f.items())


def parse_poly(field, text):
    text = text.strip()
    if text == f'{field.canonical_id}:0':
        return SparsePolynomial(field)
    terms = {}
    for tok in text.split('+'):
        coeff, star, mono = tok.strip().partition('*')
        if star:
            if not mono.startswith('X^'):
                raise ValueError(f'bad term {tok!r}')
            e = int(mono[2:])
        else:
            e = 0
        if e in terms:
            raise ValueError(f'repeated exponent {e}')
        terms[e] = field.parse(coeff)
    return SparsePolynomial(field, terms)


class DensePolynomial:
    """c_0 + c_1 X + ... + c_n X^n with c_n != 0 (or no coefficients)."""

    __slots__ = ('field', 'coeffs')

    def __init__(self, field, coeffs):
        cs = [field(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def monic(self):
        if not self.coeffs:
            return self
        inv = self.lc.inverse()
        return DensePolynomial(self.field, [c * inv for c in self.coeffs])

    def __eq__(self, other):
        return (isinstance(other, DensePolynomial) and self.field == other.field
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        z = self.field.zero
        a = self.coeffs + (z,) * (n - len(self.coeffs))
        b = other.coeffs + (z,) * (n - len(other.coeffs))
        return DensePolynomial(self.field, [x + y for x, y in zip(a, b)])

    def __neg__(self):
        return DensePolynomial(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not self.coeffs or not other.coeffs:
            return DensePolynomial(self.field, [])
        r = [self.field.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    r[i + j] = r[i + j] + a * b
        return DensePolynomial(self.field, r)

    def __divmod__(self, other):
        if other.is_zero():
            raise ZeroDivisionError('polynomial division by zero')
        r = list(self.coeffs)
        q = [self.field.zero] * max(len(r) - len(other.coeffs) + 1, 0)
        inv = other.lc.inverse()
        dg = other.degree
        while len(r) - 1 >= dg and r:
            c = r[-1] * inv
            s = len(r) - 1 - dg
            q[s] = c
            for i, b in enumerate(other.coeffs):
                r[s + i] = r[s + i] - c * b
            while r and not r[-1]:
                r.pop()
        return DensePolynomial(self.field, q), DensePolynomial(self.field, r)

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        x = self.field(x)
        r = self.field.zero
        for c in reversed(self.coeffs):
            r = r * x + c
        return r

    def to_sparse(self):
        return SparsePolynomial(self.field, dict(enumerate(self.coeffs)))

    def __repr__(self):
        return f'DensePolynomial({list(self.coeffs)})'


def to_dense(f):
    """Dense polynomial with f's literal exponents (no functional reduction)."""
    if not f._terms:
        return DensePolynomial(f.field, [])
    cs = [f.field.zero] * (max(f._terms) + 1)
    for e, c in f._terms.items():
        cs[e] = c
    return DensePolynomial(f.field, cs)


def gcd(f, g):
    if f.is_zero() and g.is_zero():
        raise ValueError('gcd(0, 0) is undefined')
    while not g.is_zero():
        f, g = g, f % g
    return f.monic()


def sylvester_matrix(f, g):
    """Rows: m shifted copies of f's coefficients (leading first), then n of g's."""
    n, m = f.degree, g.degree
    size = n + m
    a = list(reversed(f.coeffs))
    b = list(reversed(g.coeffs))
    z = f.field.zero
    rows = []
    for i in range(m):
        rows.append([z] * i + a + [z] * (size - n - 1 - i))
    for i in range(n):
        rows.append([z] * i + b + [z] * (size - m - 1 - i))
    return rows


def resultant(f, g):
    """Determinant of the Sylvester matrix of f and g.

    With this layout Res(f, g) = lc(f)^deg(g) * prod g(r) over the roots r of f.
    """
    if f.field != g.field:
        raise TypeError('polynomials over different fields')
    if f.degree < 1 or g.degree < 1:
        raise ValueError('resultant needs two polynomials of positive degree')
    rows = [[c.value for c in r] for r in sylvester_matrix(f, g)]
    d, _ = _linalg.det_inverse(f.field, rows, want_inverse=False)
    return FieldElement(f.field, d)
