"""Command-line interface.

Exit codes: 0 when every result matches its prediction, 1 when a check fails
(or ``invert`` is given a non-permutation), 2 for usage errors.
"""

import argparse
import dataclasses
import json
import shlex
import sys

import numpy as np

from . import equiv, families, linearized, verify
from .families import FAMILY_IDS, FamilySpec, build, closed_inverse, parse_family
from .field import make_field
from .perm import brute_inverse, compose_check, is_permutation
from .poly import parse_poly

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

FAMILY_THEOREM = {'F1': 'T31', 'F2': 'T32', 'F3': 'T33', 'F4': 'T34', 'F5': 'T35', 'F_XIE': 'T35'}
INVERT_METHODS = ('formula', 'dickson', 'brute')


class UsageError(Exception):
    pass


@dataclasses.dataclass(frozen=True)
class CommandConfig:
    command: str
    targets: tuple = ()
    p: int = None
    m: str = None
    k: int = None
    q: int = None
    a: str = None
    b: str = None
    a_index: int = None
    b_index: int = None
    method: str = None
    mode: str = 'auto'
    form: str = 'stated'
    trials: int = 100
    grid: str = None
    format: str = 'text'
    seed: int = 0
    jobs: int = 1
    timing: bool = False

    def to_argv(self):
        """Canonical command line: subcommand, targets, then non-default flags."""
        argv = [self.command, *self.targets]
        for f in dataclasses.fields(self):
            if f.name in ('command', 'targets'):
                continue
            v = getattr(self, f.name)
            if v == f.default:
                continue
            flag = '--' + f.name.replace('_', '-')
            argv += [flag] if v is True else [flag, str(v)]
        return argv

    def to_command_line(self):
        return shlex.join(['ffperm', *self.to_argv()])


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--p', type=int, help='characteristic')
    common.add_argument('--m', help='m, a range like 1..5, or a list like 1,3')
    common.add_argument('--a', help='parameter a (element text, or an integer n meaning n*1)')
    common.add_argument('--b', help='parameter b')
    common.add_argument('--a-index', type=int, help='a = N-th element of F_q^* in enumeration order')
    common.add_argument('--b-index', type=int, help='b = N-th element of F_q^* in enumeration order')
    common.add_argument('--format', choices=('text', 'json'), default='text')
    common.add_argument('--seed', type=int, default=0)
    common.add_argument('--jobs', type=int, default=1, help='worker processes')

    ap = argparse.ArgumentParser(prog='ffperm', description=__doc__.splitlines()[0],
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest='command', required=True)

    v = sub.add_parser('verify', parents=[common], help='run theorem checks over a grid')
    v.add_argument('targets', nargs=1, metavar='TARGET',
                   help='family (F1..F5, F_XIE, or F1:p=2,m=3,...), theorem id (T31..P44) or "all"')
    v.add_argument('--grid', help='cells: m values, p:m pairs (T35) or q values (P41-P44)')
    v.add_argument('--timing', action='store_true', help='include wall time in records')

    i = sub.add_parser('invert', parents=[common], help='compositional inverse of a family member')
    i.add_argument('targets', nargs=1, metavar='FAMILY')
    i.add_argument('--method', help='comma list of formula, dickson, brute (default formula)')

    e = sub.add_parser('equiv', parents=[common], help='decide QM equivalence of f and g')
    e.add_argument('targets', nargs=2, metavar=('F', 'G'),
                   help='family id, F5INV, catalog label (f1, k5, Q1, ...) or polynomial text')
    e.add_argument('--mode', choices=('auto', 'filter'), default='auto')

    r = sub.add_parser('resultant-check', parents=[common], help='sample a resultant identity')
    r.add_argument('targets', nargs=1, metavar='IDENTITY', choices=('t31', 't35'))
    r.add_argument('--trials', type=int, default=100)
    r.add_argument('--form', choices=verify.FORMS, default='stated')

    c = sub.add_parser('catalog', parents=[common], help='list catalog entries at q')
    c.add_argument('--q', type=int)

    fi = sub.add_parser('field-info', parents=[common], help='describe GF(p^k)')
    fi.add_argument('--k', type=int)
    return ap


def config_from_args(ns):
    fields = {f.name for f in dataclasses.fields(CommandConfig)}
    kw = {k: v for k, v in vars(ns).items() if k in fields and v is not None}
    kw['targets'] = tuple(kw.get('targets', ()))
    return CommandConfig(**kw)


def parse_config(argv):
    return config_from_args(build_parser().parse_args(argv))


def parse_m(text):
    text = str(text).strip()
    try:
        if '..' in text:
            lo, hi = text.split('..')
            vals = list(range(int(lo), int(hi) + 1))
        else:
            vals = [int(t) for t in text.split(',')]
    except ValueError:
        raise UsageError(f'bad m value {text!r}') from None
    if not vals or min(vals) < 1:
        raise UsageError(f'bad m value {text!r}')
    return vals


def _element(F, text):
    text = text.strip()
    if ':' in text:
        return F.parse(text)
    return F(int(text))


def _single_m(cfg, default=1):
    if cfg.m is None:
        return default
    ms = parse_m(cfg.m)
    if len(ms) != 1:
        raise UsageError('this command takes a single m')
    return ms[0]


def family_from_config(cfg, text):
    """FamilySpec from text like F1 or F1:m=2,a=... with flags filling the gaps."""
    ident, _, rest = text.partition(':')
    ident = ident.strip().upper()
    if ident not in FAMILY_IDS:
        raise UsageError(f'unknown family {text!r}')
    params = dict(item.split('=', 1) for item in rest.split(',') if item) if rest else {}
    if cfg.p is not None:
        params.setdefault('p', str(cfg.p))
    if cfg.m is not None:
        params.setdefault('m', str(_single_m(cfg)))
    for name in ('a', 'b'):
        if getattr(cfg, name) is not None:
            params.setdefault(name, getattr(cfg, name))
        elif getattr(cfg, f'{name}_index') is not None:
            params.setdefault(f'{name}_index', str(getattr(cfg, f'{name}_index')))
    p = int(params.get('p', 2 if ident in families._CHAR2 else 3))
    m = int(params.get('m', 1))
    F = make_field(p, 3 * m)
    for name in ('a', 'b'):
        if name in params and ':' not in params[name]:
            params[name] = str(_element(F, params[name]))
    try:
        return parse_family(ident + ':' + ','.join(f'{k}={v}' for k, v in params.items()))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def emit(cfg, out, record, text):
    if cfg.format == 'json':
        out.write(json.dumps(record, sort_keys=True) + '\n')
    else:
        out.write(text + '\n')


def _describe_cell(c):
    params = ' '.join(f'{k}={v}' for k, v in c.params.items())
    extra = ''
    if isinstance(c.witness, dict):
        keep = {k: v for k, v in c.witness.items() if v not in (None, [], '')}
        if 'verdict' in keep:
            keep = {k: keep[k] for k in ('method', 'd_candidates_examined', 'surviving_d') if k in keep}
        extra = ' ' + json.dumps(keep, sort_keys=True)
    return (f'{c.theorem} {params}: {"pass" if c.passed else "FAIL"} '
            f'(expected {c.expected}, observed {c.observed}){extra}')


def _verify_grid(cfg, theorem, spec=None):
    grid = {}
    if spec is not None:
        if theorem == 'T35':
            grid['pm'] = [(spec.p, spec.m)]
        else:
            grid['m'] = [spec.m]
        if theorem in ('T31', 'T32') and (cfg.a or cfg.b or cfg.a_index is not None
                                          or cfg.b_index is not None):
            U = spec.field.subfield_elements(spec.q, nonzero=True)
            grid['ab'] = [(U.index(spec.a), U.index(spec.b))]
    elif cfg.m is not None:
        ms = parse_m(cfg.m)
        if theorem == 'T35':
            grid['pm'] = [(cfg.p or 3, m) for m in ms]
        elif theorem in ('P41', 'P42', 'P43'):
            grid['q'] = [1 << m for m in ms]
        elif theorem == 'P44':
            grid['q'] = [(cfg.p or 3) ** m for m in ms]
        else:
            grid['m'] = ms
    if cfg.grid:
        items = [t for t in cfg.grid.split(',') if t]
        try:
            if theorem == 'T35':
                grid['pm'] = [tuple(int(x) for x in t.split(':')) for t in items]
            elif theorem.startswith('P4'):
                grid['q'] = [int(t) for t in items]
            else:
                grid['m'] = [int(t) for t in items]
        except ValueError:
            raise UsageError(f'bad grid {cfg.grid!r}') from None
    return grid


def cmd_verify(cfg, out):
    target = cfg.targets[0]
    head = target.partition(':')[0].upper()
    if target.lower() == 'all':
        jobs = [(t, _verify_grid(cfg, t)) for t in verify.THEOREMS]
    elif head in verify.THEOREMS:
        jobs = [(head, _verify_grid(cfg, head))]
    elif head in FAMILY_THEOREM:
        theorem = FAMILY_THEOREM[head]
        single = (':' in target or any(v is not None for v in (cfg.a, cfg.b, cfg.a_index, cfg.b_index))
                  or (cfg.m is not None and len(parse_m(cfg.m)) == 1))
        spec = family_from_config(cfg, target) if single else None
        jobs = [(theorem, _verify_grid(cfg, theorem, spec))]
    else:
        raise UsageError(f'unknown verify target {target!r}')
    ok = True
    for theorem, grid in jobs:
        rep = verify.run_theorem(theorem, grid, seed=cfg.seed, jobs=cfg.jobs)
        for c in rep.cells:
            emit(cfg, out, c.to_record(rep.seed, cfg.timing), _describe_cell(c))
        good = len(rep.cells) - len(rep.failures)
        if cfg.format == 'text':
            out.write(f'{theorem}: {good}/{len(rep.cells)} cells match predictions\n')
        ok &= rep.passed
    return EXIT_OK if ok else EXIT_FAIL


def cmd_invert(cfg, out):
    spec = family_from_config(cfg, cfg.targets[0])
    methods = [s.strip() for s in (cfg.method or 'formula').split(',') if s.strip()]
    bad = [mth for mth in methods if mth not in INVERT_METHODS]
    if bad or not methods:
        raise UsageError(f'unknown method(s) {bad}; choose from {", ".join(INVERT_METHODS)}')
    F = spec.field
    f = build(spec)
    v = is_permutation(f, F)
    if not v.is_permutation:
        x1, x2 = v.witness
        emit(cfg, out, {'record': 'not_a_permutation', 'family': str(spec),
                        'witness': [str(x1), str(x2)], 'image_size': v.image_size},
             f'{spec} is not a permutation: f({x1}) = f({x2}); image has {v.image_size} elements')
        return EXIT_FAIL
    tables = {}
    for mth in methods:
        if mth == 'formula':
            inv = closed_inverse(spec)
            tables[mth] = inv.table()
            ok = compose_check(f, tables[mth], F)
            emit(cfg, out, {'record': 'inverse', 'method': 'formula', 'family': str(spec),
                            'construction': inv.method, 'composes': ok, 'points': F.order},
                 f'formula ({inv.method}): composes with f on {F.order if ok else "not all"}'
                 f'/{F.order} points')
        elif mth == 'dickson':
            if spec.id not in ('F2', 'F3', 'F4'):
                raise UsageError(f'{spec.id} has no linearized factorization; use formula or brute')
            L, s = families.linear_part(spec)
            Linv = linearized.linv(L)
            e = pow(s, -1, F.order - 1)
            tables[mth] = F.v_pow(Linv.table(), e)
            coeffs = [str(c) for c in Linv.coeffs]
            emit(cfg, out, {'record': 'inverse', 'method': 'dickson', 'family': str(spec),
                            'linv_coefficients': coeffs, 'base': L.base, 'exponent': e},
                 '\n'.join([f'L^-1 coefficients of X^(2^i), i = 0..{L.n - 1}:', *coeffs,
                            f'inverse = (L^-1)^{e}']))
        else:
            tables[mth] = brute_inverse(f, F).table()
            if len(methods) == 1:
                vals = [str(F.from_index(int(y))) for y in tables[mth]]
                emit(cfg, out, {'record': 'inverse_table', 'family': str(spec), 'values': vals},
                     '\n'.join(f'{F.from_index(x)} -> {y}' for x, y in enumerate(vals)))
    if len(tables) > 1:
        ref_name, ref = next(iter(tables.items()))
        for name, t in list(tables.items())[1:]:
            agree = int(np.sum(t == ref))
            emit(cfg, out, {'record': 'agreement', 'methods': [ref_name, name], 'agree': agree,
                            'points': F.order},
                 f'{ref_name} and {name} agree on {agree}/{F.order} points')
            if agree != F.order:
                return EXIT_FAIL
    return EXIT_OK


def _own_field_operand(cfg, text):
    """Families (and F5INV) carry their own field; anything else returns None."""
    head = text.partition(':')[0].upper()
    if head == 'F5INV':
        p, m = cfg.p or 3, _single_m(cfg)
        if p == 2:
            raise UsageError('F5INV needs odd p')
        return families.f5_inverse_polynomial(p, m)
    if head in FAMILY_IDS:
        return build(family_from_config(cfg, text))
    return None


def _field_operand(text, F):
    """A catalog label present at q = |F|^(1/3), or polynomial text over F."""
    if F.k % 3 == 0:
        listing = equiv.catalog(F.p ** (F.k // 3))
        if text in {i.label for i in listing.present}:
            return listing.get(text)
        omitted = dict(listing.omitted)
        if text in omitted:
            raise UsageError(f'{text} does not apply over {F.canonical_id}: {omitted[text]}')
    try:
        return parse_poly(F, text)
    except ValueError:
        raise UsageError(f'cannot read {text!r} as a family, catalog label or polynomial') from None


def cmd_equiv(cfg, out):
    ftext, gtext = cfg.targets
    ops = [_own_field_operand(cfg, t) for t in (ftext, gtext)]
    fields = [o.field for o in ops if o is not None]
    F = fields[0] if fields else make_field(cfg.p or 2, 3 * _single_m(cfg))
    if any(G != F for G in fields):
        raise UsageError(f'{ftext} and {gtext} live over different fields')
    f, g = (o if o is not None else _field_operand(t, F) for o, t in zip(ops, (ftext, gtext)))
    if isinstance(f, equiv.CatalogInstance):
        try:
            f = f.polynomial(F)
        except ValueError as exc:
            raise UsageError(f'first operand must be concrete: {exc}') from None
    rep = equiv.qm_decide(f, g, mode=cfg.mode, seed=cfg.seed)
    rec = {'record': 'equivalence', 'f': ftext, 'g': gtext, 'field': F.canonical_id,
           **rep.to_record()}
    lines = [f'{ftext} vs {gtext} over {F.canonical_id}: {rep.verdict}',
             f'method: {rep.method}; units d examined: {rep.d_candidates_examined}; '
             f'surviving d: {list(rep.surviving_d)}']
    if rep.witness:
        d, a, b = rep.witness
        lines.append(f'witness: d={d}, a={a}, b={b} ({rep.note})')
    elif rep.note:
        lines.append(rep.note)
    emit(cfg, out, rec, '\n'.join(lines))
    return EXIT_OK


def cmd_resultant_check(cfg, out):
    identity = cfg.targets[0]
    if identity == 't31':
        p = cfg.p or 2
        if p != 2:
            raise UsageError('t31 lives in characteristic 2')
    else:
        p = cfg.p or 3
    ms = parse_m(cfg.m) if cfg.m else ([2, 3] if identity == 't31' else [1])
    ok = True
    for m in ms:
        rep = verify.sample_resultant_checks(identity, p, m, cfg.trials, cfg.seed, cfg.form)
        emit(cfg, out, rep.to_record(),
             f'{identity} over {rep.field} ({rep.form} form): {rep.passed}/{rep.trials} samples agree'
             f' ({rep.resamples} degenerate draws replaced)')
        ok &= rep.ok
    return EXIT_OK if ok else EXIT_FAIL


def cmd_catalog(cfg, out):
    if cfg.q is not None:
        q = cfg.q
    else:
        q = (cfg.p or 2) ** _single_m(cfg)
    try:
        listing = equiv.catalog(q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    for inst in listing.present:
        e = inst.entry
        emit(cfg, out, {'record': 'catalog_entry', 'q': q, 'label': e.label, 'table': e.table,
                        'exponents': list(inst.exponents), 'coefficients': [t for t, _ in e.terms],
                        'constraints': list(e.constraints), 'degenerate': inst.degenerate},
             f'{e.label:5} {e.table:20} exponents {list(inst.exponents)}'
             + (f'  [{"; ".join(e.constraints)}]' if e.constraints else ''))
    for label, reason in listing.omitted:
        emit(cfg, out, {'record': 'catalog_omitted', 'q': q, 'label': label, 'reason': reason},
             f'{label:5} omitted: {reason}')
    return EXIT_OK


def format_modulus(coeffs):
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        mono = '1' if i == 0 else ('x' if i == 1 else f'x^{i}')
        terms.append(mono if c == 1 else (str(c) if i == 0 else f'{c}*{mono}'))
    return ' + '.join(terms)


def cmd_field_info(cfg, out):
    p = cfg.p or 2
    k = cfg.k if cfg.k is not None else 3 * _single_m(cfg)
    try:
        F = make_field(p, k)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    gen = F.from_index(F._find_primitive())
    sub = p ** (k // 3) if k % 3 == 0 else None
    emit(cfg, out, {'record': 'field', 'id': F.canonical_id, 'p': p, 'k': k, 'order': F.order,
                    'modulus': list(F.modulus), 'primitive': str(gen), 'subfield_q': sub},
         '\n'.join([f'{F.canonical_id}: GF({p}^{k}), {F.order} elements',
                    f'modulus: {format_modulus(F.modulus)}',
                    f'primitive element: {gen}',
                    f'GF(q^3) with q = {sub}' if sub else 'k is not a multiple of 3']))
    return EXIT_OK


COMMANDS = {'verify': cmd_verify, 'invert': cmd_invert, 'equiv': cmd_equiv,
            'resultant-check': cmd_resultant_check, 'catalog': cmd_catalog,
            'field-info': cmd_field_info}


def main(argv=None, out=None):
    out = out or sys.stdout
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:     # argparse already printed usage
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return COMMANDS[cfg.command](cfg, out)
    except UsageError as exc:
        print(f'ffperm: error: {exc}', file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f'ffperm: error: {exc}', file=sys.stderr)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
