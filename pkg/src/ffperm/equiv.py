"""Quasi-multiplicative (QM) equivalence of polynomials over GF(Q).

f and g are QM-equivalent when f(X) = a g(b X^d) for nonzero a, b and a unit
d of Z_(Q-1). On normal forms such a transform sends the term c X^e to
a c b^e X^(ed), so a necessary condition is that d maps the exponent set of g
onto that of f. :func:`d_filter` enumerates those d; :func:`solve_coefficients`
then finds (a, b) exactly by linear congruences on discrete logarithms, and
every candidate is confirmed by evaluating both sides.
"""

import ast
import dataclasses
import importlib.resources
import math
import operator
import random
import re

import numpy as np

from .field import FieldElement, make_field
from .poly import SparsePolynomial, normalize, reduce_exponent

EXHAUSTIVE_LIMIT = 1 << 12
SAMPLE_POINTS = 64

VERDICTS = ('equivalent', 'inequivalent', 'inequivalent_by_filter', 'undecided')
METHODS = ('exponent_filter', 'full_decision')


@dataclasses.dataclass(frozen=True)
class ExponentSet:
    exponents: frozenset
    modulus: int            # Q - 1
    has_constant: bool = False

    def __iter__(self):
        return iter(sorted(self.exponents))

    def __len__(self):
        return len(self.exponents)


def exponent_set(f):
    f = normalize(f)
    n = f.field.order - 1
    return ExponentSet(frozenset(e for e in f.terms if e), n, 0 in f.terms)


def units(n):
    """Units of Z_n in increasing order (for n = 1, just 1)."""
    if n == 1:
        return np.array([1], dtype=np.int64)
    d = np.arange(1, n, dtype=np.int64)
    return d[np.gcd(d, n) == 1]


def d_filter(E, F, n=None):
    """All units d of Z_n with {d e : e in E} = F, reduced to [1, n]."""
    if n is None:
        n = E.modulus
    if isinstance(E, ExponentSet) and isinstance(F, ExponentSet) and E.has_constant != F.has_constant:
        return []
    src = sorted({reduce_exponent(e, n + 1) for e in E})
    dst = sorted({reduce_exponent(e, n + 1) for e in F})
    if len(src) != len(dst):
        return []
    ds = units(n)
    if not src:
        return [int(d) for d in ds]
    img = (np.outer(ds, np.array(src, dtype=np.int64)) - 1) % n + 1
    img.sort(axis=1)
    ok = np.all(img == np.array(dst, dtype=np.int64), axis=1)
    return [int(d) for d in ds[ok]]


def _solve_congruence(a, b, n):
    """Solutions of a t = b (mod n) as (t0, step), or None."""
    g = math.gcd(a, n)
    if b % g:
        return None
    step = n // g
    t0 = (b // g) * pow(a // g, -1, step) % step if step > 1 else 0
    return t0, step


def solve_coefficients(f, g, d):
    """(a, b) with f = a g(b X^d) on normal forms, or None if none exist.

    Writing b = w^t for the generator w, each term pair pins t modulo a
    divisor of Q - 1 and the system of congruences is solved exactly. Any
    solution t works for every term, so the least one is returned.
    """
    F = f.field
    n = F.order - 1
    f, g = normalize(f), normalize(g)
    gt = [(e, c) for e, c in g.items() if e]
    const_g, const_f = g.coefficient(0), f.coefficient(0)
    if bool(const_g) != bool(const_f):
        return None
    if not gt:
        if not const_g:
            return (F.one, F.one) if not f.terms else None
        return const_f / const_g, F.one
    targets = []
    for e, c in gt:
        fe = f.coefficient(reduce_exponent(e * d, F.order))
        if not fe:
            return None
        targets.append((e % n, c, fe))
    e0, c0, f0 = targets[0]
    eqs = []
    for e, c, fe in targets[1:]:
        r = (fe * c0) / (f0 * c)
        eqs.append(((e - e0) % n, r))
    b = _solve_b(F, eqs)
    if b is None:
        return None
    a = f0 / (c0 * b ** e0)
    if const_g and a * const_g != const_f:
        return None
    if any(a * c * b ** e != fe for e, c, fe in targets):
        return None
    return a, b


def _solve_b(F, eqs):
    """b with b^delta = r for every (delta, r) in eqs."""
    n = F.order - 1
    if not eqs:
        return F.one
    if F._tables():
        x0, step = 0, 1
        for delta, r in eqs:
            lr = F.log(r)
            sol = _solve_congruence(delta * step % n, (lr - delta * x0) % n, n)
            if sol is None:
                return None
            t0, s = sol
            # step divides n throughout, since gcd(delta * step, n) >= step
            x0, step = x0 + t0 * step, step * s
        return F.exp(x0 % step)
    # without log tables: unique root through an invertible exponent
    for delta, r in eqs:
        if math.gcd(delta, n) == 1:
            return r ** pow(delta, -1, n)
    return None


def _transform_values(g, a, b, d, xs):
    F = g.field
    return F.v_mul(a.value, g.values(F.v_mul(b.value, F.v_pow(xs, d))))


def confirm(f, g, witness, seed=0):
    """Check f(x) = a g(b x^d); returns (ok, points_checked, exhaustive)."""
    d, a, b = witness
    F = f.field
    if F.order <= EXHAUSTIVE_LIMIT:
        xs = F.all()
        return bool(np.array_equal(f.values(xs), _transform_values(g, a, b, d, xs))), F.order, True
    rng = random.Random(seed)
    pts = {rng.randrange(F.order) for _ in range(SAMPLE_POINTS)}
    if F.k % 3 == 0:
        pts.update(x.value for x in F.subfield_elements(F.p ** (F.k // 3)))
    else:
        pts.update(range(F.p))
    pts = sorted(pts)
    for v in pts:
        x = FieldElement(F, v)
        if f(x) != a * g(b * x ** d):
            return False, len(pts), False
    return True, len(pts), False


@dataclasses.dataclass(frozen=True)
class EquivalenceReport:
    verdict: str
    method: str
    d_candidates_examined: int
    witness: tuple = None   # (d, a, b) with f = a g(b X^d)
    surviving_d: tuple = ()
    authoritative: bool = True
    points_checked: int = 0
    note: str = ''

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f'unknown verdict {self.verdict!r}')
        if self.method not in METHODS:
            raise ValueError(f'unknown method {self.method!r}')
        if (self.verdict == 'equivalent') != (self.witness is not None):
            raise ValueError('a witness accompanies exactly the equivalent verdict')

    @property
    def equivalent(self):
        return self.verdict == 'equivalent'

    def to_record(self):
        w = None
        if self.witness:
            d, a, b = self.witness
            w = {'d': d, 'a': str(a), 'b': str(b)}
        return {'verdict': self.verdict, 'method': self.method,
                'd_candidates_examined': self.d_candidates_examined, 'witness': w,
                'surviving_d': list(self.surviving_d), 'authoritative': self.authoritative,
                'points_checked': self.points_checked, 'note': self.note}

    @classmethod
    def from_record(cls, rec, field=None):
        w = rec.get('witness')
        if w is not None:
            parse = field.parse if field is not None else _parse_any
            w = (int(w['d']), parse(w['a']), parse(w['b']))
        return cls(rec['verdict'], rec['method'], rec['d_candidates_examined'], w,
                   tuple(rec.get('surviving_d', ())), rec.get('authoritative', True),
                   rec.get('points_checked', 0), rec.get('note', ''))


def _parse_any(text):
    m = re.fullmatch(r'gf(\d+)_(\d+)', text.partition(':')[0])
    if not m:
        raise ValueError(f'cannot infer the field of {text!r}')
    return make_field(int(m.group(1)), int(m.group(2))).parse(text)


def qm_decide(f, g, mode='auto', seed=0):
    """Decide whether f(X) = a g(b X^d) for some nonzero a, b and unit d.

    ``mode='auto'`` gives a full decision when the field has at most 2^12
    elements (exhaustive confirmation) and filter-only otherwise;
    ``mode='filter'`` forces filter-only. A :class:`CatalogInstance` for g is
    an exponent pattern with unspecified coefficients.
    """
    if isinstance(g, CatalogInstance):
        return _decide_pattern(f, g, mode)
    if f.field != g.field:
        raise ValueError('polynomials over different fields')
    if mode not in ('auto', 'filter'):
        raise ValueError(f'unknown mode {mode!r}')
    F = f.field
    n = F.order - 1
    full = mode == 'auto' and F.order <= EXHAUSTIVE_LIMIT
    f, g = normalize(f), normalize(g)
    examined = len(units(n))
    ds = d_filter(exponent_set(g), exponent_set(f), n)
    method = 'full_decision' if full else 'exponent_filter'
    if not ds:
        return EquivalenceReport('inequivalent' if full else 'inequivalent_by_filter', method,
                                 examined, note='no unit d matches the exponent sets')
    checked = 0
    for d in ds:
        ab = solve_coefficients(f, g, d)
        if ab is None:
            continue
        w = (d, ab[0], ab[1])
        ok, pts, exhaustive = confirm(f, g, w, seed)
        checked += pts
        if ok:
            note = 'confirmed on every element' if exhaustive else f'confirmed on {pts} sampled points'
            return EquivalenceReport('equivalent', method, examined, w, tuple(ds),
                                     exhaustive, pts, note)
    if full:
        return EquivalenceReport('inequivalent', method, examined, None, tuple(ds), True, checked,
                                 'no coefficients (a, b) fit any surviving d')
    return EquivalenceReport('undecided', method, examined, None, tuple(ds), False, checked,
                             'filter-only mode; surviving d not refuted authoritatively')


def _decide_pattern(f, inst, mode):
    F = f.field
    if F.order != inst.q ** 3:
        raise ValueError(f'{inst.label} is instantiated at q={inst.q}, not over {F.canonical_id}')
    if all(tag == '1' for tag, _ in inst.entry.terms):
        return qm_decide(f, inst.polynomial(F), mode)
    n = F.order - 1
    full = mode == 'auto' and F.order <= EXHAUSTIVE_LIMIT
    method = 'full_decision' if full else 'exponent_filter'
    E = ExponentSet(frozenset(inst.exponents), n)
    ds = d_filter(E, exponent_set(f), n)
    examined = len(units(n))
    if not ds:
        verdict = 'inequivalent' if full else 'inequivalent_by_filter'
        return EquivalenceReport(verdict, method, examined,
                                 note=f'no unit d maps the exponents of {inst.label} onto f; '
                                      'holds for every choice of nonzero coefficients')
    return EquivalenceReport('undecided', method, examined, None, tuple(ds), False,
                             note=f'{inst.label} has free coefficients; surviving d need concrete values')


def brute_decide(f, g):
    """Exponent-free oracle: try every unit d and every b, solving a at one point."""
    F = f.field
    if F.order > 1 << 10:
        raise ValueError('brute-force decision is limited to fields of at most 1024 elements')
    xs = F.all()
    tf = f.values(xs)
    for d in units(F.order - 1):
        d = int(d)
        xd = F.v_pow(xs, d)
        for bv in range(1, F.order):
            tg = g.values(F.v_mul(bv, xd))
            nz = np.flatnonzero(tg)
            if nz.size == 0:
                continue
            i = int(nz[0])
            if not tf[i]:
                continue
            av = F._mul(int(tf[i]), F._inv(int(tg[i])))
            if np.array_equal(tf, F.v_mul(av, tg)):
                return d, F.from_index(av), F.from_index(bv)
    return None


# ---- catalog -----------------------------------------------------------

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Pow: operator.pow}


def eval_exponent(expr, q):
    """Evaluate an integer polynomial expression in q ('^' is power)."""
    tree = ast.parse(expr.replace('^', '**'), mode='eval')

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and type(node.value) is int:
            return node.value
        if isinstance(node, ast.Name) and node.id == 'q':
            return q
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Div):
                if right == 0 or left % right:
                    raise ValueError(f'{expr!r} is not an integer at q={q}')
                return left // right
            if type(node.op) in _BINOPS:
                if isinstance(node.op, ast.Pow) and right < 0:
                    raise ValueError('negative power')
                return _BINOPS[type(node.op)](left, right)
        raise ValueError(f'unsupported syntax in exponent {expr!r}')
    return ev(tree)


_CLAUSE = re.compile(r'm mod (\d+) (==|!=) (\d+)')


def parse_m_condition(text):
    """Clauses as (modulus, op, residue); the empty tuple means 'all'."""
    text = text.strip()
    if text == 'all':
        return ()
    out = []
    for clause in text.split(' and '):
        mt = _CLAUSE.fullmatch(clause.strip())
        if not mt:
            raise ValueError(f'bad m condition {clause!r}')
        out.append((int(mt.group(1)), mt.group(2), int(mt.group(3))))
    return tuple(out)


def format_m_condition(clauses):
    if not clauses:
        return 'all'
    return ' and '.join(f'm mod {k} {op} {r}' for k, op, r in clauses)


@dataclasses.dataclass(frozen=True)
class CatalogEntry:
    label: str
    table: str
    char: str                  # 'even' or 'odd'
    terms: tuple               # ((coefficient tag, exponent expression), ...)
    constraints: tuple = ()
    m_condition: tuple = ()
    source: str = ''
    note: str = ''

    def applies(self, p, m):
        if (p == 2) != (self.char == 'even'):
            return False, f'needs {self.char} characteristic'
        for k, op, r in self.m_condition:
            if (m % k == r) != (op == '=='):
                return False, f'condition {format_m_condition(self.m_condition)} fails at m={m}'
        return True, ''

    def instantiate(self, q):
        Q1 = q ** 3 - 1
        exps = []
        for _, expr in self.terms:
            e = eval_exponent(expr, q)
            if e < 1:
                raise ValueError(f'{self.label}: exponent {expr} is {e} at q={q}')
            exps.append(reduce_exponent(e, Q1 + 1))
        return CatalogInstance(self, q, tuple(exps))

    def to_text(self):
        lines = [f'entry {self.label}', f'table {self.table}', f'char {self.char}']
        if self.source:
            lines.append(f'source {self.source}')
        lines += [f'term {c} : {e}' for c, e in self.terms]
        lines += [f'constraint {c}' for c in self.constraints]
        lines.append(f'm {format_m_condition(self.m_condition)}')
        if self.note:
            lines.append(f'note {self.note}')
        lines.append('end')
        return '\n'.join(lines)


@dataclasses.dataclass(frozen=True)
class CatalogInstance:
    entry: CatalogEntry
    q: int
    exponents: tuple           # one per term, reduced to [1, q^3 - 1]

    @property
    def label(self):
        return self.entry.label

    @property
    def exponent_set(self):
        return frozenset(self.exponents)

    @property
    def degenerate(self):
        """Two displayed exponents coincide modulo q^3 - 1."""
        return len(set(self.exponents)) < len(self.exponents)

    def polynomial(self, field, values=None):
        """Concrete polynomial; ``values`` maps coefficient tags to elements."""
        values = dict(values or {})
        terms = SparsePolynomial(field)
        for (tag, _), e in zip(self.entry.terms, self.exponents):
            if tag in values:
                c = field(values[tag])
            elif tag == '1':
                c = field.one
            else:
                raise ValueError(f'{self.label}: no value for coefficient {tag!r}')
            terms = terms + SparsePolynomial(field, {e: c})
        return terms


def parse_catalog(text):
    entries, cur = [], None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        key, _, val = line.partition(' ')
        val = val.strip()
        if key == 'entry':
            if cur is not None:
                raise ValueError(f'line {lineno}: entry inside entry')
            cur = {'label': val, 'terms': [], 'constraints': [], 'm_condition': None,
                   'table': None, 'char': None, 'source': '', 'note': ''}
        elif cur is None:
            raise ValueError(f'line {lineno}: {key!r} outside an entry')
        elif key == 'term':
            tag, sep, expr = val.partition(' : ')
            if not sep:
                raise ValueError(f'line {lineno}: term needs "<coeff> : <exponent>"')
            cur['terms'].append((tag.strip(), expr.strip()))
        elif key == 'constraint':
            cur['constraints'].append(val)
        elif key == 'm':
            cur['m_condition'] = parse_m_condition(val)
        elif key in ('table', 'char', 'source', 'note'):
            cur[key] = val
        elif key == 'end':
            missing = [k for k in ('table', 'char', 'm_condition') if cur[k] is None]
            if missing or not cur['terms']:
                raise ValueError(f'line {lineno}: entry {cur["label"]} lacks {missing or ["terms"]}')
            if cur['char'] not in ('even', 'odd'):
                raise ValueError(f'line {lineno}: char must be even or odd')
            entries.append(CatalogEntry(cur['label'], cur['table'], cur['char'], tuple(cur['terms']),
                                        tuple(cur['constraints']), cur['m_condition'],
                                        cur['source'], cur['note']))
            cur = None
        else:
            raise ValueError(f'line {lineno}: unknown key {key!r}')
    if cur is not None:
        raise ValueError('unterminated entry')
    labels = [e.label for e in entries]
    if len(set(labels)) != len(labels):
        raise ValueError('duplicate labels')
    return entries


def load_catalog():
    text = importlib.resources.files(__package__).joinpath('catalog.txt').read_text()
    return parse_catalog(text)


@dataclasses.dataclass(frozen=True)
class CatalogListing:
    q: int
    present: tuple        # CatalogInstance
    omitted: tuple        # (label, reason)

    def get(self, label):
        for inst in self.present:
            if inst.label == label:
                return inst
        raise KeyError(label)

    def table(self, name):
        return [i for i in self.present if i.entry.table == name]


def prime_power(q):
    if q < 2:
        raise ValueError(f'{q} is not a prime power')
    p = next(d for d in range(2, q + 1) if q % d == 0)
    m, r = 0, q
    while r % p == 0:
        r //= p
        m += 1
    if r != 1:
        raise ValueError(f'{q} is not a prime power')
    return p, m


def catalog(q, entries=None):
    p, m = prime_power(q)
    present, omitted = [], []
    for e in entries if entries is not None else load_catalog():
        ok, why = e.applies(p, m)
        if ok:
            present.append(e.instantiate(q))
        else:
            omitted.append((e.label, why))
    return CatalogListing(q, tuple(present), tuple(omitted))
