"""Finite fields GF(p^k) in a fixed polynomial basis.

An element is stored as the integer whose base-p digits, least significant
first, are its coefficients in the basis 1, x, ..., x^(k-1). That integer is
also the element's position in enumeration order, so value tables over the
whole field are plain numpy arrays indexed by element.

Scalar multiplication is done by polynomial multiplication modulo the field
modulus. For fields up to ``TABLE_LIMIT`` elements, exp/log tables are
derived from that arithmetic and back both the scalar fast path and the
vectorised ``v_*`` operations used by exhaustive sweeps.
"""

import functools
import string

import numpy as np

from . import _fpoly

MAX_DEGREE = 24
TABLE_LIMIT = 1 << 20

_DIGITS = string.digits + string.ascii_lowercase


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def smallest_irreducible(p, k):
    """The monic irreducible of degree k over F_p whose coefficient list,
    read as a base-p integer, is smallest."""
    for n in range(p ** k, 2 * p ** k):
        f = _fpoly.from_int(n, p)
        if f[0] == 0 and k > 1:
            continue  # divisible by x
        if _fpoly.is_irreducible(f, p):
            return tuple(f)
    raise AssertionError('no irreducible polynomial found')  # unreachable


class Field:
    """The field GF(p^k) = F_p[x]/(modulus)."""

    def __init__(self, p, k, modulus=None):
        if not is_prime(p):
            raise ValueError(f'characteristic {p} is not prime')
        if not 1 <= k <= MAX_DEGREE:
            raise ValueError(f'extension degree {k} outside 1..{MAX_DEGREE}')
        default = smallest_irreducible(p, k)
        if modulus is None:
            modulus = default
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise ValueError('modulus must be monic of degree k')
        if not _fpoly.is_irreducible(list(modulus), p):
            raise ValueError('modulus is reducible over F_p')
        self.p = p
        self.k = k
        self.modulus = modulus
        self.order = p ** k
        self.canonical_id = f'gf{p}_{k}'
        if modulus != default:
            self.canonical_id += f'_m{_fpoly.to_int(list(modulus), p)}'
        self._mod_int = _fpoly.to_int(list(modulus), p)  # used for p == 2
        self._exp = self._log = None
        self._exp_list = self._log_list = None
        self.generator = None

    def __reduce__(self):
        if '_m' in self.canonical_id:
            return Field, (self.p, self.k, self.modulus)
        return make_field, (self.p, self.k)

    def __repr__(self):
        return f'Field({self.canonical_id})'

    def __eq__(self, other):
        return isinstance(other, Field) and self.canonical_id == other.canonical_id

    def __hash__(self):
        return hash(self.canonical_id)

    def __len__(self):
        return self.order

    # ---- element construction -------------------------------------------

    def __call__(self, value):
        if isinstance(value, FieldElement):
            if value.field != self:
                raise TypeError('element of a different field')
            return value
        if isinstance(value, (int, np.integer)):
            return self.from_int(int(value))
        return self.from_coeffs(value)

    def from_int(self, n):
        """The prime-field element n * 1."""
        return FieldElement(self, n % self.p)

    def from_index(self, i):
        if not 0 <= i < self.order:
            raise ValueError('index outside the field')
        return FieldElement(self, int(i))

    def from_coeffs(self, coeffs):
        coeffs = list(coeffs)
        if len(coeffs) != self.k or any(not 0 <= c < self.p for c in coeffs):
            raise ValueError(f'need {self.k} coefficients in [0, {self.p - 1}]')
        return FieldElement(self, _fpoly.to_int(coeffs, self.p))

    @property
    def zero(self):
        return FieldElement(self, 0)

    @property
    def one(self):
        return FieldElement(self, 1)

    def gen(self):
        """The class of x (the polynomial-basis generator, not necessarily primitive)."""
        return FieldElement(self, self.p if self.k > 1 else 0)

    def elements(self):
        for i in range(self.order):
            yield FieldElement(self, i)

    def subfield_elements(self, q, nonzero=False):
        """Elements fixed by x -> x^q, in enumeration order."""
        s = _log_int(q, self.p)
        if self.p ** s != q or s == 0 or self.k % s:
            raise ValueError(f'{q} does not define a subfield of GF({self.order})')
        vals = np.flatnonzero(self.v_pow(self.all(), q) == self.all())
        return [FieldElement(self, int(v)) for v in vals if not (nonzero and v == 0)]

    def all(self):
        return np.arange(self.order, dtype=np.int64)

    # ---- text encoding ---------------------------------------------------

    def format(self, value):
        digits = _fpoly.from_int(value, self.p) + [0] * self.k
        digits = digits[:self.k]
        if self.p <= len(_DIGITS):
            body = ''.join(_DIGITS[d] for d in digits)
        else:
            body = '.'.join(str(d) for d in digits)
        return f'{self.canonical_id}:{body}'

    def parse(self, text):
        prefix, sep, body = text.strip().partition(':')
        if not sep or prefix != self.canonical_id:
            raise ValueError(f'{text!r} is not an element of {self.canonical_id}')
        if self.p <= len(_DIGITS):
            if len(body) != self.k:
                raise ValueError(f'expected {self.k} digits in {text!r}')
            digits = [_DIGITS.index(ch) if ch in _DIGITS else -1 for ch in body]
        else:
            digits = [int(tok) for tok in body.split('.')]
        return self.from_coeffs(digits)

    # ---- scalar arithmetic on element indices ----------------------------

    def _digits(self, x):
        d = _fpoly.from_int(x, self.p)
        return d + [0] * (self.k - len(d))

    def _add(self, x, y):
        if self.p == 2:
            return x ^ y
        if self.k == 1:
            return (x + y) % self.p
        p, r, pw = self.p, 0, 1
        while x or y:
            r += ((x % p + y % p) % p) * pw
            x //= p
            y //= p
            pw *= p
        return r

    def _neg(self, x):
        if self.p == 2:
            return x
        if self.k == 1:
            return -x % self.p
        p, r, pw = self.p, 0, 1
        while x:
            r += (-(x % p) % p) * pw
            x //= p
            pw *= p
        return r

    def _sub(self, x, y):
        return self._add(x, self._neg(y))

    def mul_direct(self, x, y):
        """Multiply by reducing the polynomial product modulo the modulus."""
        if self.p == 2:
            k, m, r = self.k, self._mod_int, 0
            while y:
                if y & 1:
                    r ^= x
                y >>= 1
                x <<= 1
                if x >> k & 1:
                    x ^= m
            return r
        if self.k == 1:
            return x * y % self.p
        prod = _fpoly.mul(_fpoly.from_int(x, self.p), _fpoly.from_int(y, self.p), self.p)
        return _fpoly.to_int(_fpoly.mod(prod, list(self.modulus), self.p), self.p)

    def pow_direct(self, x, e):
        r = 1
        while e:
            if e & 1:
                r = self.mul_direct(r, x)
            x = self.mul_direct(x, x)
            e >>= 1
        return r

    def _mul(self, x, y):
        if not x or not y:
            return 0
        if self._tables():
            return self._exp_list[(self._log_list[x] + self._log_list[y]) % (self.order - 1)]
        return self.mul_direct(x, y)

    def _pow(self, x, e):
        if e == 0:
            return 1
        if x == 0:
            return 0
        if self._tables():
            n = self.order - 1
            return self._exp_list[self._log_list[x] * (e % n) % n]
        return self.pow_direct(x, e % (self.order - 1) or self.order - 1)

    def _inv(self, x):
        if x == 0:
            raise ZeroDivisionError('inverse of zero')
        return self._pow(x, self.order - 2)

    # ---- exp/log tables --------------------------------------------------

    def _tables(self):
        if self._exp_list is not None:
            return True
        if self.order > TABLE_LIMIT:
            return False
        n = self.order - 1
        g = self._find_primitive()
        exp = [1] * n
        if self.p == 2 and g == 2:
            k, m, v = self.k, self._mod_int, 1
            for i in range(1, n):
                v <<= 1
                if v >> k & 1:
                    v ^= m
                exp[i] = v
        else:
            for i in range(1, n):
                exp[i] = self.mul_direct(exp[i - 1], g)
        log = [0] * self.order
        for i, v in enumerate(exp):
            log[v] = i
        self.generator = g
        self._exp = np.array(exp, dtype=np.int64)
        self._log = np.array(log, dtype=np.int64)
        self._exp_list, self._log_list = exp, log
        return True

    def _find_primitive(self):
        n = self.order - 1
        if n == 1:
            return 1
        factors = _fpoly.prime_factors(n)
        for g in range(2, self.order):
            if all(self.pow_direct(g, n // r) != 1 for r in factors):
                return g
        raise AssertionError('no primitive element')  # unreachable

    def log(self, x):
        """Discrete logarithm to the base of ``self.generator``."""
        x = self(x).value
        if x == 0:
            raise ValueError('log of zero')
        if not self._tables():
            raise ValueError('field too large for log tables')
        return self._log_list[x]

    def exp(self, t):
        self._require_tables()
        return FieldElement(self, self._exp_list[t % (self.order - 1)])

    def _require_tables(self):
        if not self._tables():
            raise ValueError(f'{self.canonical_id} is too large for vectorised arithmetic')

    # ---- vectorised arithmetic on arrays of element indices ----------------

    def v_add(self, a, b):
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        if self.k == 1:
            return (a + b) % self.p
        p, r, pw = self.p, np.zeros(np.broadcast(a, b).shape, dtype=np.int64), 1
        for _ in range(self.k):
            r += ((a // pw + b // pw) % p) * pw
            pw *= p
        return r

    def v_neg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a.copy()
        if self.k == 1:
            return -a % self.p
        p, r, pw = self.p, np.zeros_like(a), 1
        for _ in range(self.k):
            r += (-(a // pw) % p) * pw
            pw *= p
        return r

    def v_sub(self, a, b):
        return self.v_add(a, self.v_neg(b))

    def v_mul(self, a, b):
        self._require_tables()
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        r = self._exp[(self._log[a] + self._log[b]) % (self.order - 1)]
        return np.where((a == 0) | (b == 0), 0, r)

    def v_pow(self, a, e):
        self._require_tables()
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        n = self.order - 1
        r = self._exp[self._log[a] * (e % n) % n]
        return np.where(a == 0, 0, r)

    def v_inv(self, a):
        self._require_tables()
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError('inverse of zero')
        return self._exp[(-self._log[a]) % (self.order - 1)]

    def v_sum(self, a, axis=None):
        """Field sum of the entries of ``a`` along ``axis``."""
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return np.bitwise_xor.reduce(a, axis=axis)
        p, pw = self.p, 1
        r = 0
        for _ in range(self.k):
            r = r + (np.sum((a // pw) % p, axis=axis) % p) * pw
            pw *= p
        return np.asarray(r, dtype=np.int64)


def _log_int(n, b):
    e = 0
    while b ** (e + 1) <= n:
        e += 1
    return e


@functools.cache
def make_field(p, k):
    """The field GF(p^k) under the default (lexicographically smallest) modulus."""
    return Field(p, k)


class FieldElement:
    """An element of a :class:`Field`, canonical and immutable."""

    __slots__ = ('field', 'value')

    def __init__(self, field, value):
        self.field = field
        self.value = value

    @property
    def coeffs(self):
        return tuple(self.field._digits(self.value))

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise TypeError(f'{self.field.canonical_id} and {other.field.canonical_id} elements mixed')
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other) % self.field.p
        return NotImplemented

    def _wrap(self, v):
        return FieldElement(self.field, v)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.field._add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.field._sub(self.value, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.field._sub(o, self.value))

    def __neg__(self):
        return self._wrap(self.field._neg(self.value))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.field._mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.field._mul(self.value, self.field._inv(o)))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.field._mul(o, self.field._inv(self.value)))

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        return self._wrap(self.field._pow(self.value, e))

    def inverse(self):
        return self._wrap(self.field._inv(self.value))

    def frobenius(self, j=1):
        return frobenius(self, j)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == int(other) % self.field.p and self.value < self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.field.canonical_id, self.value))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    __index__ = __int__

    def __repr__(self):
        return self.field.format(self.value)

    __str__ = __repr__


def arith(op, x, y=None):
    """Apply one of add, sub, mul, inv, neg to field elements."""
    if op == 'add':
        return x + y
    if op == 'sub':
        return x - y
    if op == 'mul':
        return x * y
    if op == 'inv':
        return x.inverse()
    if op == 'neg':
        return -x
    raise ValueError(f'unknown operation {op!r}')


def power(x, e):
    if e < 0:
        raise ValueError('negative exponent')
    return x ** e


def frobenius(x, j=1):
    """x^(p^j), with j taken modulo the extension degree."""
    f = x.field
    return FieldElement(f, f._pow(x.value, f.p ** (j % f.k)))


def inv_frobenius_root(x, r=2):
    """The unique y with y^r = x in characteristic 2, for r in {2, 4}."""
    f = x.field
    if f.p != 2:
        raise ValueError('inverse Frobenius roots need characteristic 2')
    if r not in (2, 4):
        raise ValueError('r must be 2 or 4')
    s = 1 if r == 2 else 2
    return FieldElement(f, f._pow(x.value, 2 ** ((f.k - s) % f.k)))


def subfield_order(field):
    """q with field = GF(q^3)."""
    if field.k % 3:
        raise ValueError(f'{field.canonical_id} is not a cubic extension')
    return field.p ** (field.k // 3)


def rel_trace(x, q=None):
    """Tr_q^{q^3}(x) = x + x^q + x^(q^2)."""
    f = x.field
    q3 = subfield_order(f)
    if q is not None and q != q3:
        raise ValueError(f'q={q} but the field is GF({q3}^3)')
    return x + x ** q3 + x ** (q3 * q3)


def enumerate_field(field):
    return field.elements()
