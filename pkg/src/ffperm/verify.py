"""Theorem-level drivers and the resultant identities behind two of the proofs.

Each theorem id maps to a grid of cells; a cell is one parameter choice checked
exhaustively over its field, with the predicted verdict alongside the
observed one. Reports serialize to JSON lines, one record per cell.
"""

import concurrent.futures
import dataclasses
import itertools
import json
import random
import time

from . import equiv, families, linearized
from .families import FamilySpec, build, closed_inverse, expected_pp
from .field import FieldElement, inv_frobenius_root, make_field
from .perm import NotAPermutationError, brute_inverse, compose_check, first_failure, is_permutation
from .poly import DensePolynomial, resultant

THEOREMS = ('T31', 'T32', 'T33', 'T34', 'T35', 'P31', 'P32', 'P33', 'P41', 'P42', 'P43', 'P44')
FORMS = ('stated', 'corrected')
MAX_RESAMPLES = 50

DEFAULT_GRIDS = {
    'T31': {'m': [1, 2, 3, 4]},
    'T32': {'m': [1, 2, 3, 4]},
    'T33': {'m': [1, 2, 3, 4]},
    'T34': {'m': [1, 2, 3, 4]},
    'T35': {'pm': [(3, 1), (3, 2), (5, 1), (7, 1)]},
    'P31': {'m': [1, 2, 3, 4]},
    'P32': {'m': [1, 2, 3, 4], 'congruence_m': [1, 2, 3, 4, 5, 6]},
    'P33': {'m': [1, 2, 3, 4]},
    'P41': {'q': [4, 8]},
    'P42': {'q': [4, 8]},
    'P43': {'q': [4, 8]},
    'P44': {'q': [3, 5]},
}


class DegenerateSample(ValueError):
    """The sample makes a leading coefficient vanish; draw another one."""


# ---- resultant identities -------------------------------------------------

def _conjugates(A, q):
    B = A ** q
    return B, B ** q


def t31_polynomials(a, X, A):
    """The two quartics in Y eliminated in the characteristic-2 argument for f1."""
    F = A.field
    q = 1 << (F.k // 3)
    B, C = _conjugates(A, q)
    a2 = a * a
    X2, X4 = X * X, X ** 4
    z = F.zero
    g = DensePolynomial(F, [
        a2 * X4 + A * a2 * X2 + B * a2 * X2 + C * a2 * X2, z,
        X4 + C * X2 + a2 * X2 + B * B + B * C + A * a2 + B * a2 + C * a2, z,
        X2 + B])
    h = DensePolynomial(F, [
        C * X4 + B * C * X2 + C * C * X2 + A * a2 * X2 + B * a2 * X2 + C * a2 * X2, z,
        X4 + B * X2 + a2 * X2 + A * a2 + B * a2 + C * a2, z,
        X2 + a2])
    return g, h


def t31_p(a, X, A):
    q = 1 << (A.field.k // 3)
    B, C = _conjugates(A, q)
    a2, a4 = a * a, a ** 4
    return ((A * C + A * a2 + C * a2 + a4) * X ** 4 + A * A * B * a2 + A * A * a4 + A * B * B * C
            + A * B * B * a2 + B * B * C * a2 + B * B * a4 + B * C * C * a2 + C * C * a4)


def t31_rhs(a, X, A, form='stated'):
    q = 1 << (A.field.k // 3)
    B, C = _conjugates(A, q)
    r = a ** 4 * (B + C) ** 4 * t31_p(a, X, A) ** 2
    return r * X ** 4 if form == 'corrected' else r


def _check_t31_inputs(m, a, X, A):
    F = make_field(2, 3 * m)
    q = 1 << m
    a, X, A = F(a), F(X), F(A)
    if not a or a ** q != a:
        raise ValueError('a must lie in F_q^*')
    if A ** q == A:
        raise ValueError('A must lie outside F_q')
    if not X:
        raise DegenerateSample('X = 0')
    B = A ** q
    if X * X == B or X * X == a * a:
        raise DegenerateSample('a leading coefficient in Y vanishes')
    return a, X, A


def check_resultant_identity_t31(m, a, X, A, form='stated'):
    """Res_Y(g, h) against a^4 (B+C)^4 p(X)^2 over GF(2^(3m)), with B = A^q, C = A^(q^2).

    ``form='corrected'`` compares against a^4 (B+C)^4 X^4 p(X)^2 instead.
    """
    if form not in FORMS:
        raise ValueError(f'unknown form {form!r}')
    a, X, A = _check_t31_inputs(m, a, X, A)
    g, h = t31_polynomials(a, X, A)
    return resultant(g, h) == t31_rhs(a, X, A, form)


def t31_planted_x(a, A):
    """An X with p(X) = 0, so both sides of the identity vanish."""
    q = 1 << (A.field.k // 3)
    B, C = _conjugates(A, q)
    a2, a4 = a * a, a ** 4
    c4 = A * C + A * a2 + C * a2 + a4
    c0 = t31_p(a, A.field.zero, A)
    if not c4:
        raise DegenerateSample('p(X) has no X^4 term')
    return inv_frobenius_root(c0 / c4, 4)


def t35_polynomials(X, A):
    F = A.field
    q = F.p ** (F.k // 3)
    B, C = _conjugates(A, q)
    l1 = DensePolynomial(F, [
        X ** 4 + 2 * A * X ** 3 - A * B * X * X + A * A * X * X,
        4 * X ** 3 - 2 * A * B * X + 4 * A * X * X,
        2 * A * X + 6 * X * X - A * B,
        4 * X, 1])
    l2 = DensePolynomial(F, [
        X ** 4 - A * C * X * X,
        2 * A * X * X + 4 * X ** 3 - 2 * A * C * X,
        4 * A * X + A * A + 6 * X * X - A * C,
        2 * A + 4 * X, 1])
    return l1, l2


def t35_quadratic(X, A):
    F = A.field
    q = F.p ** (F.k // 3)
    B, C = _conjugates(A, q)
    return (16 * X * X + 8 * X * A - 8 * X * B + 8 * X * C + A * A - 2 * A * B - 2 * A * C
            + B * B - 2 * B * C + C * C)


def t35_rhs(X, A, form='stated'):
    quad = t35_quadratic(X, A)
    r = A ** 8 * X ** 4
    return r * quad * quad if form == 'corrected' else r * quad


def check_resultant_identity_t35(p, m, X, A, form='stated'):
    """Res_Y(l1, l2) against A^8 X^4 (16X^2 + 8XA - ... + C^2) over GF(p^(3m)).

    ``form='corrected'`` squares the quadratic factor.
    """
    if form not in FORMS:
        raise ValueError(f'unknown form {form!r}')
    if p == 2:
        raise ValueError('needs odd characteristic')
    F = make_field(p, 3 * m)
    X, A = F(X), F(A)
    if not A:
        raise ValueError('A must be nonzero')
    if not X:
        raise DegenerateSample('X = 0')
    l1, l2 = t35_polynomials(X, A)
    return resultant(l1, l2) == t35_rhs(X, A, form)


def t35_solution_x(A, sign=1):
    """(-A + B - C + 2 sign sqrt(AC)) / 4 with sqrt(AC) = A^((q^2+1)/2)."""
    F = A.field
    q = F.p ** (F.k // 3)
    B, C = _conjugates(A, q)
    root = A ** ((q * q + 1) // 2)
    return (-A + B - C + 2 * sign * root) / 4


@dataclasses.dataclass(frozen=True)
class ResultantCheckReport:
    identity: str          # 't31' or 't35'
    field: str
    form: str
    seed: int
    trials: int
    passed: int
    resamples: int
    failures: tuple = ()   # first few failing samples as dicts of element strings

    @property
    def ok(self):
        return self.passed == self.trials

    def to_record(self):
        return {'record': 'resultant_check', 'identity': self.identity, 'field': self.field,
                'form': self.form, 'seed': self.seed, 'trials': self.trials,
                'passed': self.passed, 'resamples': self.resamples,
                'failures': [dict(f) for f in self.failures]}

    @classmethod
    def from_record(cls, rec):
        return cls(rec['identity'], rec['field'], rec['form'], rec['seed'], rec['trials'],
                   rec['passed'], rec['resamples'], tuple(rec['failures']))


def _draw(rng, F, pred):
    while True:
        x = FieldElement(F, rng.randrange(F.order))
        if pred(x):
            return x


def sample_resultant_checks(identity, p=2, m=2, trials=100, seed=0, form='stated', keep=5):
    """Run one identity on ``trials`` admissible random samples."""
    rng = random.Random(seed)
    F = make_field(p, 3 * m)
    q = p ** m
    passed = resamples = 0
    failures = []
    units = F.subfield_elements(q, nonzero=True) if identity == 't31' else None
    if identity not in ('t31', 't35'):
        raise ValueError(f'unknown identity {identity!r}')
    for _trial in range(trials):
        for _attempt in range(MAX_RESAMPLES + 1):
            A = _draw(rng, F, (lambda x: x ** q != x) if units else bool)
            X = _draw(rng, F, bool)
            try:
                if units:
                    a = units[rng.randrange(len(units))]
                    sample = {'a': a, 'X': X, 'A': A}
                    ok = check_resultant_identity_t31(m, a, X, A, form)
                else:
                    sample = {'X': X, 'A': A}
                    ok = check_resultant_identity_t35(p, m, X, A, form)
                break
            except DegenerateSample:
                resamples += 1
        else:
            raise RuntimeError(f'{MAX_RESAMPLES} degenerate samples in a row')
        if ok:
            passed += 1
        elif len(failures) < keep:
            failures.append(tuple((k, str(v)) for k, v in sample.items()))
    return ResultantCheckReport(identity, F.canonical_id, form, seed, trials, passed, resamples,
                                tuple(failures))


# ---- theorem reports -----------------------------------------------------

@dataclasses.dataclass(frozen=True)
class Cell:
    theorem: str
    params: dict
    expected: object
    observed: object
    passed: bool
    witness: object = None         # a collision, equivalence witness, or counterexample
    seconds: float = 0.0

    def to_record(self, seed=0, timing=False):
        rec = {'record': 'cell', 'theorem': self.theorem, 'params': self.params,
               'verdict': 'pass' if self.passed else 'fail', 'expected': self.expected,
               'observed': self.observed, 'witness': self.witness, 'seed': seed}
        if timing:
            rec['seconds'] = round(self.seconds, 6)
        return rec

    @classmethod
    def from_record(cls, rec):
        return cls(rec['theorem'], rec['params'], rec['expected'], rec['observed'],
                   rec['verdict'] == 'pass', rec.get('witness'), rec.get('seconds', 0.0))


@dataclasses.dataclass(frozen=True)
class TheoremReport:
    theorem: str
    grid: dict
    cells: tuple
    seed: int = 0
    seconds: float = 0.0

    @property
    def passed(self):
        return all(c.passed for c in self.cells)

    @property
    def failures(self):
        return [c for c in self.cells if not c.passed]

    def to_records(self, timing=False):
        return [c.to_record(self.seed, timing) for c in self.cells]

    def to_jsonl(self, timing=False):
        return ''.join(json.dumps(r, sort_keys=True) + '\n' for r in self.to_records(timing))

    @classmethod
    def from_jsonl(cls, text, grid=None):
        recs = [json.loads(line) for line in text.splitlines() if line.strip()]
        cells = tuple(Cell.from_record(r) for r in recs if r.get('record') == 'cell')
        if not cells:
            raise ValueError('no cell records')
        theorem = cells[0].theorem
        return cls(theorem, grid or {}, cells, recs[0].get('seed', 0),
                   sum(c.seconds for c in cells))


def _pair(w):
    return [str(w[0]), str(w[1])] if w else None


def _units(m, p=2):
    F = make_field(p, 3 * m)
    return F, F.subfield_elements(p ** m, nonzero=True)


def _cell_ab_family(theorem, family, m, ia, ib):
    F, U = _units(m)
    a, b = U[ia], U[ib]
    spec = FamilySpec(family, 2, m, a, b)
    f = build(spec)
    v = is_permutation(f, F)
    expected = a == b
    params = {'m': m, 'a': str(a), 'b': str(b)}
    if v.is_permutation:
        return Cell(theorem, params, expected, True, expected)
    # the converse argument names a specific colliding pair
    if family == 'F1':
        w = a + b
    else:
        w = inv_frobenius_root(a, 2) + inv_frobenius_root(b, 2)
    named = bool(w) and f(w) == f(F.zero)
    ok = not expected and named
    return Cell(theorem, params, expected, False, ok,
                {'collision': _pair(v.witness), 'named_pair': [str(F.zero), str(w)],
                 'named_pair_collides': named})


def _cell_f34(theorem, m):
    family = 'F3' if theorem == 'T33' else 'F4'
    spec = FamilySpec(family, 2, m)
    F = spec.field
    v = is_permutation(build(spec), F)
    L, _ = families.linear_part(spec)
    det_ok = bool(linearized.det(linearized.dickson_matrix(L)))
    c = [0] * (3 * m)
    for i in (0, 1, 2 * m if family == 'F3' else m):
        c[i % (3 * m)] ^= 1
    circ = linearized.circulant_invertible(c, 3 * m, 2) if any(c) else False
    expected = expected_pp(spec)
    ok = v.is_permutation == det_ok == circ == expected
    return Cell(theorem, {'m': m}, expected, v.is_permutation, ok,
                {'collision': _pair(v.witness), 'det_nonzero': det_ok, 'circulant_invertible': circ})


def _cell_t35(p, m):
    spec = FamilySpec('F5', p, m)
    F, q = spec.field, spec.q
    f5 = build(spec)
    v = is_permutation(f5, F)
    xs = F.all()
    checks = {'bijective': v.is_permutation}
    if v.is_permutation:
        brute = brute_inverse(f5, F).table()
        inv = closed_inverse(spec)
        checks['inverse_matches_brute'] = bool((inv.table() == brute).all())
        xie = FamilySpec('F_XIE', p, m)
        fx = build(xie)
        checks['xie_is_f5_of_xq'] = bool((fx.values(xs) == f5.values(F.v_pow(xs, q))).all())
        checks['xie_inverse_composes'] = compose_check(fx, closed_inverse(xie), F)
    ok = all(checks.values())
    return Cell('T35', {'p': p, 'm': m}, True, v.is_permutation, ok,
                {'collision': _pair(v.witness), **checks})


def _inverse_cell(theorem, spec, params):
    F = spec.field
    f = build(spec)
    expected = expected_pp(spec)
    if not expected:
        try:
            closed_inverse(spec)
        except NotAPermutationError:
            return Cell(theorem, params, 'undefined', 'undefined', True)
        return Cell(theorem, params, 'undefined', 'defined', False)
    inv = closed_inverse(spec)
    composes = compose_check(f, inv, F)
    brute = brute_inverse(f, F).table()
    matches = bool((inv.table() == brute).all())
    bad = None if composes else first_failure(f, inv, F)
    return Cell(theorem, params, 'composes', 'composes' if composes else 'fails',
                composes and matches,
                {'method': inv.method, 'matches_brute': matches,
                 'first_failure': str(bad) if bad is not None else None})


def _cell_p31(m, ia):
    F, U = _units(m)
    a = U[ia]
    return _inverse_cell('P31', FamilySpec('F1', 2, m, a, a), {'m': m, 'a': str(a)})


def _cell_p32(m, ia):
    F, U = _units(m)
    a = U[ia]
    return _inverse_cell('P32', FamilySpec('F2', 2, m, a, a), {'m': m, 'a': str(a)})


def exponent_congruence(m):
    """(q+1)^-1 = (q^2-q+1) 2^-1 in Z_(q^3-1), q = 2^m, checked as integers."""
    q = 1 << m
    n = q ** 3 - 1
    lhs = pow(q + 1, -1, n)
    rhs = (q * q - q + 1) * pow(2, -1, n) % n
    return lhs == rhs and (q * q - q + 1) * pow(2, -1, n) * (q + 1) % n == 1


def _cell_p32_congruence(m):
    ok = exponent_congruence(m)
    return Cell('P32', {'m': m, 'check': 'congruence'}, True, ok, ok)


def _cell_p33(family, m):
    spec = FamilySpec(family, 2, m)
    return _inverse_cell('P33', spec, {'family': family, 'm': m})


def _table1(q):
    """The new char-2 trinomials that permute GF(q^3), with a = b = 1."""
    m = q.bit_length() - 1
    out = {}
    for name, fam in (('f1', 'F1'), ('f2', 'F2'), ('f3', 'F3'), ('f4', 'F4')):
        spec = FamilySpec(fam, 2, m)
        if expected_pp(spec):
            out[name] = build(spec)
    return out


def _equiv_cell(theorem, params, report, expected=('inequivalent', 'inequivalent_by_filter')):
    ok = report.verdict in expected and report.authoritative
    return Cell(theorem, params, 'inequivalent', report.verdict, ok, report.to_record())


def _cell_p41(q, x, y, mode):
    polys = _table1(q)
    r = equiv.qm_decide(polys[y], polys[x], mode=mode)
    return _equiv_cell('P41', {'q': q, 'f': x, 'g': y, 'mode': mode}, r)


def _cell_p4x(theorem, q, name, label, mode):
    if theorem == 'P44':
        f = families.f5_inverse_polynomial(*equiv.prime_power(q))
    else:
        f = _table1(q)[name]
    inst = equiv.catalog(q).get(label)
    r = equiv.qm_decide(f, inst, mode=mode)
    return _equiv_cell(theorem, {'q': q, 'f': name, 'entry': label, 'mode': mode}, r)


def _tasks(theorem, grid):
    """(callable, args) for every cell, in report order."""
    g = dict(DEFAULT_GRIDS[theorem])
    g.update(grid or {})
    tasks = []
    if theorem in ('T31', 'T32'):
        fam = 'F1' if theorem == 'T31' else 'F2'
        for m in g['m']:
            n = (1 << m) - 1
            pairs = g.get('ab') or list(itertools.product(range(n), repeat=2))
            tasks += [(_cell_ab_family, (theorem, fam, m, i, j)) for i, j in pairs]
    elif theorem in ('T33', 'T34'):
        tasks += [(_cell_f34, (theorem, m)) for m in g['m']]
    elif theorem == 'T35':
        tasks += [(_cell_t35, tuple(pm)) for pm in g['pm']]
    elif theorem in ('P31', 'P32'):
        fn = _cell_p31 if theorem == 'P31' else _cell_p32
        for m in g['m']:
            idx = g.get('a_index') or range((1 << m) - 1)
            tasks += [(fn, (m, i)) for i in idx]
        if theorem == 'P32':
            tasks += [(_cell_p32_congruence, (m,)) for m in g['congruence_m']]
    elif theorem == 'P33':
        tasks += [(_cell_p33, (fam, m)) for fam in ('F3', 'F4') for m in g['m']]
    elif theorem == 'P41':
        for q in g['q']:
            names = sorted(_table1(q))
            for x, y in itertools.combinations(names, 2):
                mode = g.get('mode') or ('filter' if q > 4 and 'f4' in (x, y) else 'auto')
                tasks.append((_cell_p41, (q, x, y, mode)))
    elif theorem in ('P42', 'P43', 'P44'):
        for q in g['q']:
            listing = equiv.catalog(q)
            if theorem == 'P44':
                entries, names = listing.table('known-quadrinomials'), ['f5inv']
            else:
                entries = listing.table('known-trinomials')
                names = ['f1'] if theorem == 'P42' else ['f2', 'f3', 'f4']
                have = _table1(q)
                names = [n for n in names if n in have]
            for name in names:
                for inst in entries:
                    tasks.append((_cell_p4x, (theorem, q, name, inst.label, g.get('mode') or 'auto')))
    return g, tasks


def _run_task(task):
    fn, args = task
    t0 = time.perf_counter()
    cell = fn(*args)
    return dataclasses.replace(cell, seconds=time.perf_counter() - t0)


def run_theorem(theorem, grid=None, seed=0, jobs=1):
    """Check every cell of the grid; failures are report content, not exceptions."""
    if theorem not in THEOREMS:
        raise ValueError(f'unknown theorem id {theorem!r}')
    t0 = time.perf_counter()
    g, tasks = _tasks(theorem, grid)
    if jobs > 1 and len(tasks) > 1:
        with concurrent.futures.ProcessPoolExecutor(jobs) as pool:
            cells = tuple(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        cells = tuple(_run_task(t) for t in tasks)
    return TheoremReport(theorem, g, cells, seed, time.perf_counter() - t0)
