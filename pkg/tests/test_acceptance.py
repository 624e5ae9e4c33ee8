"""Acceptance criteria 1-10, each exact and exhaustive at its grid.

Every test prints one line ``criterion N: PASS|FAIL ...`` to the terminal
(capture is bypassed) before asserting.
"""

import io
import itertools
import random
import time

import numpy as np
import pytest

from ffperm import cli, families, linearized
from ffperm.equiv import catalog, confirm, qm_decide, units
from ffperm.families import FamilySpec, build, closed_inverse, expected_pp, f5_inverse_polynomial
from ffperm.field import inv_frobenius_root, make_field
from ffperm.linearized import LinearizedPolynomial, det, dickson_matrix, linv
from ffperm.perm import brute_inverse, compose_check, is_permutation
from ffperm.poly import SparsePolynomial, transform
from ffperm.verify import exponent_congruence, sample_resultant_checks


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f'\ncriterion {n}: {"PASS" if ok else "FAIL"} - {detail}')
        return ok
    return emit


def _units(m):
    return make_field(2, 3 * m).subfield_elements(1 << m, nonzero=True)


def test_criterion_1_f1_bijective_iff_a_equals_b(report):
    t0 = time.perf_counter()
    problems = []
    cells = 0
    for m in (1, 2, 3, 4):
        F = make_field(2, 3 * m)
        for a, b in itertools.product(_units(m), repeat=2):
            if a != b and m < 2:
                continue
            cells += 1
            f = build(FamilySpec('F1', 2, m, a, b))
            v = is_permutation(f, F)
            if a == b and not v.is_permutation:
                problems.append((m, str(a), 'not bijective'))
            if a != b and (v.is_permutation or f(a + b) != f(F.zero)):
                problems.append((m, str(a), str(b), 'no {0, a+b} collision'))
    secs = time.perf_counter() - t0
    ok = not problems and secs < 10
    report(1, ok, f'{cells} (m, a, b) cells over m=1..4, {len(problems)} mismatches, {secs:.2f}s (< 10s)')
    assert not problems
    assert secs < 10


def test_criterion_2_f1_inverse_matches_brute(report):
    bad = []
    n = 0
    for m in (1, 2, 3, 4):
        F = make_field(2, 3 * m)
        for a in _units(m):
            spec = FamilySpec('F1', 2, m, a, a)
            n += 1
            if not np.array_equal(closed_inverse(spec).table(), brute_inverse(build(spec), F).table()):
                bad.append((m, str(a)))
    report(2, not bad, f'closed-form f1^-1 equals brute inverse pointwise for {n - len(bad)}/{n} (m, a)')
    assert not bad


def test_criterion_3_f2_dickson_inverse_and_congruence(report):
    bad = []
    n = 0
    for m in (1, 2, 3):
        F = make_field(2, 3 * m)
        for a in _units(m):
            spec = FamilySpec('F2', 2, m, a, a)
            f = build(spec)
            inv = closed_inverse(spec)
            n += 1
            if not (is_permutation(f, F).is_permutation and inv.method == 'dickson_power'
                    and compose_check(f, inv, F)):
                bad.append((m, str(a)))
    cong = [m for m in range(1, 7) if not exponent_congruence(m)]
    ok = not bad and not cong
    report(3, ok, f'f2 bijective with Dickson inverse composing both ways on {n - len(bad)}/{n} (m, a); '
                  f'exponent congruence holds for m=1..6: {not cong}')
    assert not bad and not cong


def test_criterion_4_f3_f4_patterns_and_circulant(report):
    p3 = [is_permutation(build(FamilySpec('F3', 2, m)), make_field(2, 3 * m)).is_permutation
          for m in range(1, 6)]
    p4 = [is_permutation(build(FamilySpec('F4', 2, m)), make_field(2, 3 * m)).is_permutation
          for m in range(1, 6)]
    circ, dets = [], []
    for m in range(1, 6):
        c = [0] * (3 * m)
        for i in (0, 1, 2 * m):
            c[i % (3 * m)] ^= 1
        circ.append(linearized.circulant_invertible(c, 3 * m, 2))
        L, _ = families.linear_part(FamilySpec('F3', 2, m))
        dets.append(bool(det(dickson_matrix(L))))
    want_circ = [m % 3 != 1 for m in range(1, 6)]
    T, F_ = True, False
    ok = (p3 == [F_, T, T, F_, T] and p4 == [T, F_, T, T, F_]
          and circ == want_circ and dets == want_circ)
    report(4, ok, f'f3 {p3}, f4 {p4}; gcd(1+x+x^2m, x^3m-1)=1 {circ} vs det route {dets}')
    assert p3 == [F_, T, T, F_, T]
    assert p4 == [T, F_, T, T, F_]
    assert circ == want_circ == dets


def test_criterion_5_f3_f4_inverses_compose(report):
    done, bad = [], []
    for fam in ('F3', 'F4'):
        for m in (1, 2, 3, 4):
            spec = FamilySpec(fam, 2, m)
            if not expected_pp(spec):
                continue
            done.append(f'{fam}/m={m}')
            if not compose_check(build(spec), closed_inverse(spec), spec.field):
                bad.append(done[-1])
    report(5, not bad, f'inverses compose exhaustively for {", ".join(done)}; failures {bad}')
    assert not bad


def test_criterion_6_f5(report):
    bad = []
    for p, m in ((3, 1), (3, 2), (5, 1), (7, 1)):
        spec, xie = FamilySpec('F5', p, m), FamilySpec('F_XIE', p, m)
        F, q = spec.field, spec.q
        f5, fx = build(spec), build(xie)
        xs = F.all()
        checks = [is_permutation(f5, F).is_permutation,
                  np.array_equal(closed_inverse(spec).table(), brute_inverse(f5, F).table()),
                  np.array_equal(fx.values(xs), f5.values(F.v_pow(xs, q))),
                  compose_check(fx, closed_inverse(xie), F)]
        if not all(checks):
            bad.append((p, m, checks))
    report(6, not bad, 'f5 bijective, closed inverse = brute, f(X) = f5(X^q), f^-1 composes '
                       f'at (3,1) (3,2) (5,1) (7,1); failures {bad}')
    assert not bad


def test_criterion_7_resultant_identities(report):
    runs = [('t31', 2, 2), ('t31', 2, 3), ('t35', 3, 1), ('t35', 5, 1)]
    reps = [sample_resultant_checks(i, p, m, trials=100, seed=0) for i, p, m in runs]
    fixed = [sample_resultant_checks(i, p, m, trials=100, seed=0, form='corrected') for i, p, m in runs]
    ok = all(r.ok for r in reps)
    summary = ', '.join(f'{r.identity}@{r.field} {r.passed}/{r.trials}' for r in reps)
    context = ''
    if not ok:
        context = ('; the displayed right-hand sides drop a factor X^4 (t31) and the square on the '
                   'quadratic (t35); with those restored: '
                   + ', '.join(f'{r.passed}/{r.trials}' for r in fixed))
    report(7, ok, f'stated identities: {summary}{context}')
    assert all(r.ok for r in fixed)
    assert ok, summary


def _random_linearized(rng, F):
    n = F.k
    return LinearizedPolynomial(F, 2, [F.from_index(rng.randrange(F.order)) for _ in range(n)])


def test_criterion_8_linearized_inverse(report):
    rng = random.Random(2024)
    bad = []
    counts = {}
    for k in (6, 9):
        F = make_field(2, k)
        inv_seen = sing_seen = 0
        while inv_seen < 20 or sing_seen < 20:
            L = _random_linearized(rng, F)
            d = det(dickson_matrix(L))
            if d and inv_seen < 20:
                inv_seen += 1
                if not compose_check(L, linv(L), F):
                    bad.append((k, 'linv', L.coeffs))
            elif not d and sing_seen < 20:
                sing_seen += 1
                if is_permutation(L, F).is_permutation:
                    bad.append((k, 'singular but injective', L.coeffs))
        counts[k] = (inv_seen, sing_seen)
    report(8, not bad, f'GF(2^6), GF(2^9): {counts} invertible/singular samples; {len(bad)} failures')
    assert not bad


def test_criterion_9_equivalence_at_desk_scale(report):
    notes, bad = [], []
    t4 = {n: build(FamilySpec(f, 2, 2)) for n, f in (('f1', 'F1'), ('f2', 'F2'), ('f3', 'F3'))}
    for x, y in itertools.combinations(t4, 2):
        r = qm_decide(t4[x], t4[y])
        if not (r.verdict == 'inequivalent' and r.method == 'full_decision'
                and r.d_candidates_examined == 36):
            bad.append((4, x, y, r.verdict))
    notes.append('q=4 pairs full decision')
    t8 = {n: build(FamilySpec(f, 2, 3)) for n, f in
          (('f1', 'F1'), ('f2', 'F2'), ('f3', 'F3'), ('f4', 'F4'))}
    for other in ('f1', 'f2', 'f3'):
        r = qm_decide(t8['f4'], t8[other], mode='filter')
        if r.verdict != 'inequivalent_by_filter':
            bad.append((8, 'f4', other, r.verdict))
    notes.append('q=8 f4 pairs filter-only')
    f = f5_inverse_polynomial(3, 1)
    quads = catalog(3).table('known-quadrinomials')
    for inst in quads:
        r = qm_decide(f, inst)
        if r.verdict != 'inequivalent' or r.method != 'full_decision':
            bad.append((3, 'f5inv', inst.label, r.verdict))
    notes.append(f'f5^-1 vs {len(quads)} quadrinomials at q=3')
    F = make_field(2, 6)
    rng = random.Random(99)
    us = [int(u) for u in units(63)]
    recovered = 0
    for _ in range(50):
        exps = rng.sample(range(1, 64), 3)
        g = SparsePolynomial(F, {e: F.from_index(rng.randrange(1, 64)) for e in exps})
        a, b, d = F.from_index(rng.randrange(1, 64)), F.from_index(rng.randrange(1, 64)), rng.choice(us)
        h = transform(g, a, b, d)
        r = qm_decide(h, g)
        if r.verdict == 'equivalent':
            ok, _, exhaustive = confirm(h, g, r.witness)
            recovered += ok and exhaustive
    if recovered != 50:
        bad.append(('planted', recovered))
    notes.append(f'{recovered}/50 planted transforms recovered with confirmed witness')
    report(9, not bad, '; '.join(notes) + (f'; failures {bad}' if bad else ''))
    assert not bad


def test_criterion_10_runtime(report):
    import test_field
    import test_poly

    t0 = time.perf_counter()
    code = cli.main(['verify', 'all', '--jobs', '1'], io.StringIO())
    grid_secs = time.perf_counter() - t0

    props = [test_field.test_field_axioms, test_field.test_mul_matches_oracle,
             test_field.test_power_laws, test_poly.test_normalize_preserves_function,
             test_poly.test_resultant_gcd_duality, test_poly.test_resultant_product_formula]
    t1 = time.perf_counter()
    for prop in props:
        prop()
    prop_secs = time.perf_counter() - t1
    ok = code == cli.EXIT_OK and grid_secs < 120 and prop_secs < 30
    report(10, ok, f'verify all: exit {code} in {grid_secs:.1f}s (< 120s); '
                   f'property suites (field axioms, normalize, resultant-gcd) {prop_secs:.1f}s (< 30s)')
    assert code == cli.EXIT_OK
    assert grid_secs < 120 and prop_secs < 30
