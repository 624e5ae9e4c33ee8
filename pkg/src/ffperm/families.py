"""The trinomial families over GF(q^3) and their compositional inverses.

F1..F4 live in characteristic 2 (q = 2^m); F5 and F_XIE in odd
characteristic. F_XIE is X^(q(q^2-q+1)) + X^(q^2-q+1) + 2X, which equals
F5 composed with X^q.
"""

import dataclasses

import numpy as np

from . import linearized
from .field import FieldElement, make_field, subfield_order
from .perm import NotAPermutationError
from .poly import SparsePolynomial, normalize

FAMILY_IDS = ('F1', 'F2', 'F3', 'F4', 'F5', 'F_XIE')
_CHAR2 = ('F1', 'F2', 'F3', 'F4')
_HAS_AB = ('F1', 'F2')


@dataclasses.dataclass(frozen=True)
class FamilySpec:
    id: str
    p: int
    m: int
    a: FieldElement = None
    b: FieldElement = None

    def __post_init__(self):
        if self.id not in FAMILY_IDS:
            raise ValueError(f'unknown family {self.id!r}')
        if self.m < 1:
            raise ValueError('m must be positive')
        if (self.p == 2) != (self.id in _CHAR2):
            raise ValueError(f'{self.id} needs {"p = 2" if self.id in _CHAR2 else "odd p"}')
        F = self.field
        if self.id in _HAS_AB:
            one = F.one
            a = one if self.a is None else F(self.a)
            b = one if self.b is None else F(self.b)
            q = self.q
            for name, v in (('a', a), ('b', b)):
                if not v or v ** q != v:
                    raise ValueError(f'{name} = {v} is not in F_{q}^*')
            object.__setattr__(self, 'a', a)
            object.__setattr__(self, 'b', b)
        elif self.a is not None or self.b is not None:
            raise ValueError(f'{self.id} takes no a, b parameters')

    @property
    def field(self):
        return make_field(self.p, 3 * self.m)

    @property
    def q(self):
        return self.p ** self.m

    def __str__(self):
        s = f'{self.id}:p={self.p},m={self.m}'
        if self.id in _HAS_AB:
            s += f',a={self.a},b={self.b}'
        return s


def parse_family(text):
    """Parse ``F1:p=2,m=3,a=<elt>,b=<elt>``; ``a_index=N`` picks the N-th
    element of F_q^* in enumeration order."""
    ident, _, rest = text.strip().partition(':')
    params = {}
    if rest:
        for item in rest.split(','):
            key, eq, val = item.partition('=')
            if not eq:
                raise ValueError(f'bad parameter {item!r} in {text!r}')
            params[key.strip()] = val.strip()
    unknown = set(params) - {'p', 'm', 'a', 'b', 'a_index', 'b_index'}
    if unknown:
        raise ValueError(f'unknown parameters {sorted(unknown)}')
    ident = ident.strip().upper()
    if ident not in FAMILY_IDS:
        raise ValueError(f'unknown family {ident!r}')
    p = int(params.get('p', 2 if ident in _CHAR2 else 3))
    m = int(params.get('m', 1))
    F = make_field(p, 3 * m)
    a = b = None
    for name in ('a', 'b'):
        if name in params:
            v = F.parse(params[name])
        elif f'{name}_index' in params:
            v = subfield_unit(F, p ** m, int(params[f'{name}_index']))
        else:
            continue
        if name == 'a':
            a = v
        else:
            b = v
    return FamilySpec(ident, p, m, a, b)


def subfield_unit(field, q, index):
    units = field.subfield_elements(q, nonzero=True)
    if not 0 <= index < len(units):
        raise ValueError(f'F_{q}^* has {len(units)} elements; index {index} out of range')
    return units[index]


def build(spec):
    F, q = spec.field, spec.q
    one = F.one
    if spec.id == 'F1':
        t = [(2 * q * q, one), (q * q + q - 1, spec.a), (q * q - q + 1, spec.b)]
    elif spec.id == 'F2':
        t = [(1 + q, spec.a), (1 + q * q, spec.b), (2 * q * q + 2 * q, one)]
    elif spec.id == 'F3':
        t = [(1 + q, one), (1 + q * q, one), (2 * q + 2, one)]
    elif spec.id == 'F4':
        t = [(1 + q, one), (1 + q * q, one), (2 * q * q + 2, one)]
    elif spec.id == 'F5':
        t = [(q * q, F(2)), (q * q - q + 1, one), (q * q + q - 1, one)]
    else:
        t = [(q * (q * q - q + 1), one), (q * q - q + 1, one), (1, F(2))]
    # exponents can coincide for tiny q, so merge through normalize
    return normalize(_sum_terms(F, t))


def _sum_terms(F, t):
    out = SparsePolynomial(F)
    for e, c in t:
        out = out + SparsePolynomial(F, {e: c})
    return out


def expected_pp(spec):
    if spec.id in _HAS_AB:
        return spec.a == spec.b
    if spec.id == 'F3':
        return spec.m % 3 != 1
    if spec.id == 'F4':
        return spec.m % 3 != 2
    return True


def linear_part(spec):
    """(L, s) with f = L(X^s) as functions, for F2 (a = b), F3 and F4."""
    F, m, q = spec.field, spec.m, spec.q
    one = F.one
    if spec.id == 'F2':
        if spec.a != spec.b:
            raise ValueError('F2 factors through a linearized polynomial only when a = b')
        terms, s = [(0, spec.a), (m + 1, one), (2 * m, spec.a)], q + 1
    elif spec.id == 'F3':
        terms, s = [(0, one), (1, one), (2 * m, one)], q + 1
    elif spec.id == 'F4':
        terms, s = [(0, one), (1, one), (m, one)], q * q + 1
    else:
        raise ValueError(f'{spec.id} has no linearized factorization')
    L = linearized.LinearizedPolynomial.from_terms(F, 2, terms)
    return L, s


class InverseMap:
    """An evaluable map on a field; ``method`` records how it was built."""

    METHODS = ('closed_form', 'dickson_power', 'brute_table')

    def __init__(self, field, method, fn):
        if method not in self.METHODS:
            raise ValueError(f'unknown method {method!r}')
        self.field = field
        self.method = method
        self._fn = fn

    def values(self, xs):
        return self._fn(np.asarray(xs, dtype=np.int64))

    def table(self):
        return self.values(self.field.all())

    def __call__(self, x):
        x = self.field(x)
        return FieldElement(self.field, int(self.values(np.array([x.value]))[0]))


def p1_p2_tr(x, a):
    """(P1(x), P2(x), Tr(x)) for the F1 inverse, with
    P1 = X^(q+2) + X^(2q+1) + X^(q^2+2q) + X^(2q^2+q), P2 = X + a^2."""
    q = subfield_order(x.field)
    p1 = x ** (q + 2) + x ** (2 * q + 1) + x ** (q * q + 2 * q) + x ** (2 * q * q + q)
    tr = x + x ** q + x ** (q * q)
    return p1, x + a * a, tr


def _f1_inverse_values(F, q, a, xs):
    pw, add, mul = F.v_pow, F.v_add, F.v_mul
    a2, a4 = (a * a).value, (a ** 4).value
    p1 = add(add(pw(xs, q + 2), pw(xs, 2 * q + 1)), add(pw(xs, q * q + 2 * q), pw(xs, 2 * q * q + q)))
    tr = add(add(xs, pw(xs, q)), pw(xs, q * q))
    num = add(add(mul(a2, p1), mul(a4, pw(tr, 2))), pw(xs, 1 + 2 * q + q * q))
    p2 = add(xs, a2)
    quartic = mul(num, pw(p2, q ** 3 - q * q - 2))
    root = pw(quartic, 2 ** ((F.k - 2) % F.k))  # fourth root: inverse of squaring twice
    return np.where(xs == a2, a.value, root)


def closed_inverse(spec):
    if not expected_pp(spec):
        raise NotAPermutationError(f'{spec} is not a permutation')
    F, q = spec.field, spec.q
    Q1 = F.order - 1
    if spec.id == 'F1':
        a = spec.a
        return InverseMap(F, 'closed_form', lambda xs: _f1_inverse_values(F, q, a, xs))
    if spec.id in ('F2', 'F3', 'F4'):
        L, s = linear_part(spec)
        Linv = linearized.linv(L)
        e = pow(s, -1, Q1)
        table = Linv.table()

        def fn(xs):
            return F.v_pow(table[xs], e)
        return InverseMap(F, 'dickson_power', fn)
    f5 = _f5_inverse_poly(F, q)
    if spec.id == 'F5':
        return InverseMap(F, 'closed_form', lambda xs: f5.values(xs))
    return InverseMap(F, 'closed_form', lambda xs: F.v_pow(f5.values(xs), q * q))


def _f5_inverse_poly(F, q):
    inv4 = F(4).inverse()
    t = [(1, -inv4), (q, inv4), (q * q, -inv4), ((q * q + 1) // 2, F(2) * inv4)]
    return normalize(_sum_terms(F, t))


def f5_inverse_polynomial(p, m):
    """(-X + X^q - X^(q^2) + 2 X^((q^2+1)/2)) / 4 over GF(p^(3m)), p odd."""
    if p == 2:
        raise ValueError('needs odd characteristic')
    return _f5_inverse_poly(make_field(p, 3 * m), p ** m)

