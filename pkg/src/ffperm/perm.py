"""Exhaustive permutation tests, collision witnesses and inverse tables."""

import dataclasses

import numpy as np

from .field import FieldElement

MAX_ORDER = 1 << 20


class NotAPermutationError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def function_table(f, field):
    """Value table of an evaluable map: anything with ``table()``, an array
    of element indices, or a callable on FieldElements."""
    if field.order > MAX_ORDER:
        raise ValueError(f'{field.canonical_id} is too large for exhaustive sweeps')
    if hasattr(f, 'table'):
        if getattr(f, 'field', field) != field:
            raise TypeError('map is defined over a different field')
        t = f.table()
    elif isinstance(f, np.ndarray):
        t = f
    elif callable(f):
        t = np.array([field(f(x)).value for x in field.elements()], dtype=np.int64)
    else:
        raise TypeError(f'cannot evaluate {type(f).__name__}')
    t = np.asarray(t, dtype=np.int64)
    if t.shape != (field.order,):
        raise ValueError('value table has the wrong length')
    return t


@dataclasses.dataclass(frozen=True)
class PermutationVerdict:
    is_permutation: bool
    image_size: int
    witness: tuple = None   # (x1, x2), x1 < x2 in enumeration order, f(x1) = f(x2)

    def __post_init__(self):
        if self.is_permutation == (self.witness is not None):
            raise ValueError('witness must be present exactly when f is not a permutation')


def is_permutation(f, field):
    t = function_table(f, field)
    image = np.unique(t)
    if image.size == field.order:
        return PermutationVerdict(True, field.order)
    # smallest colliding pair: least x1 whose fibre has size > 1, then least partner
    counts = np.bincount(t, minlength=field.order)
    x1 = int(np.flatnonzero(counts[t] > 1)[0])
    x2 = int(np.flatnonzero(t == t[x1])[1])
    w = (FieldElement(field, x1), FieldElement(field, x2))
    return PermutationVerdict(False, int(image.size), w)


def preimage(f, field, y):
    """All x with f(x) = y, in enumeration order."""
    t = function_table(f, field)
    y = field(y)
    return [FieldElement(field, int(i)) for i in np.flatnonzero(t == y.value)]


class InverseTable:
    """Dense inverse of a permutation: ``values[f(x)] = x``."""

    method = 'brute_table'

    def __init__(self, field, values):
        self.field = field
        self.values_ = np.asarray(values, dtype=np.int64)

    def table(self):
        return self.values_.copy()

    def values(self, xs):
        return self.values_[np.asarray(xs, dtype=np.int64)]

    def __call__(self, x):
        return FieldElement(self.field, int(self.values_[self.field(x).value]))

    def __getitem__(self, x):
        return self(x)


def brute_inverse(f, field):
    t = function_table(f, field)
    v = is_permutation(t, field)
    if not v.is_permutation:
        raise NotAPermutationError('map is not a permutation', v.witness)
    inv = np.empty_like(t)
    inv[t] = np.arange(field.order, dtype=np.int64)
    return InverseTable(field, inv)


def compose_check(f, g, field):
    """True iff g(f(x)) = x and f(g(x)) = x for every x."""
    tf = function_table(f, field)
    tg = function_table(g, field)
    ident = np.arange(field.order, dtype=np.int64)
    return bool(np.array_equal(tg[tf], ident) and np.array_equal(tf[tg], ident))


def first_failure(f, g, field):
    """Smallest x where g(f(x)) != x or f(g(x)) != x, or None."""
    tf = function_table(f, field)
    tg = function_table(g, field)
    ident = np.arange(field.order, dtype=np.int64)
    bad = np.flatnonzero((tg[tf] != ident) | (tf[tg] != ident))
    return FieldElement(field, int(bad[0])) if bad.size else None
