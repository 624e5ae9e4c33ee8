import json
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ffperm import equiv
from ffperm.equiv import (EquivalenceReport, brute_decide, catalog, confirm, d_filter, eval_exponent,
                          exponent_set, parse_catalog, parse_m_condition, qm_decide, solve_coefficients,
                          units)
from ffperm.families import FamilySpec, build, f5_inverse_polynomial
from ffperm.field import make_field
from ffperm.poly import SparsePolynomial, transform

GF64 = make_field(2, 6)
GF27 = make_field(3, 3)


def table1(m):
    return {name: build(FamilySpec(fam, 2, m)) for name, fam in
            (('f1', 'F1'), ('f2', 'F2'), ('f3', 'F3'), ('f4', 'F4'))
            if m % 3 != {'F3': 1, 'F4': 2}.get(fam, -1)}


@st.composite
def trinomials(draw, F=GF64):
    n = F.order - 1
    exps = draw(st.lists(st.integers(1, n), min_size=3, max_size=3, unique=True))
    cs = draw(st.lists(st.integers(1, n), min_size=3, max_size=3))
    return SparsePolynomial(F, {e: F.from_index(c) for e, c in zip(exps, cs)})


@st.composite
def planted(draw, F=GF64):
    n = F.order - 1
    g = draw(trinomials(F))
    a = F.from_index(draw(st.integers(1, n)))
    b = F.from_index(draw(st.integers(1, n)))
    d = draw(st.sampled_from([int(u) for u in units(n)]))
    return g, transform(g, a, b, d), (d, a, b)


# ---- exponent sets and the d filter -----------------------------------

def test_exponent_set_examples():
    assert set(exponent_set(SparsePolynomial.monomial(GF64, 5))) == {5}
    assert set(exponent_set(build(FamilySpec('F1', 2, 2)))) == {32, 19, 13}
    q = 3
    assert set(exponent_set(f5_inverse_polynomial(3, 1))) == {1, q, q * q, (q * q + 1) // 2}


def test_units_of_z63():
    assert len(units(63)) == 36
    assert list(units(1)) == [1]


def test_d_filter_rejects_q():
    E = exponent_set(build(FamilySpec('F1', 2, 2)))
    k1 = catalog(4).get('k1')
    assert set(k1.exponents) == {2, 5, 17}
    fset = equiv.ExponentSet(frozenset(k1.exponents), 63)
    assert 32 * 4 % 63 == 2 and 19 * 4 % 63 == 13
    assert 4 not in d_filter(E, fset)


def test_d_filter_identity_and_constants():
    E = exponent_set(build(FamilySpec('F3', 2, 2)))
    assert 1 in d_filter(E, E)
    with_const = exponent_set(build(FamilySpec('F3', 2, 2)) + SparsePolynomial(GF64, {0: 1}))
    assert d_filter(E, with_const) == []


@given(st.sets(st.integers(1, 62), min_size=1, max_size=4))
def test_d_filter_matches_naive_search(es):
    src = equiv.ExponentSet(frozenset(es), 63)
    d0 = random.Random(len(es)).choice([int(u) for u in units(63)])
    dst = equiv.ExponentSet(frozenset((e * d0 - 1) % 63 + 1 for e in es), 63)
    naive = [d for d in range(1, 63) if np.gcd(d, 63) == 1
             and {(e * d - 1) % 63 + 1 for e in es} == set(dst)]
    assert d_filter(src, dst) == naive and d0 in naive


# ---- decisions ---------------------------------------------------------

def test_reflexive_with_trivial_witness():
    f = build(FamilySpec('F1', 2, 2))
    r = qm_decide(f, f)
    assert r.verdict == 'equivalent' and r.method == 'full_decision' and r.authoritative
    d, a, b = r.witness
    assert (d, a, b) == (1, GF64.one, GF64.one)


def test_f1_f2_inequivalent():
    t = table1(2)
    r = qm_decide(t['f1'], t['f2'])
    assert r.verdict == 'inequivalent'
    assert r.d_candidates_examined == 36


def test_f5inv_not_q1():
    inst = catalog(3).get('Q1')
    r = qm_decide(f5_inverse_polynomial(3, 1), inst)
    assert r.verdict == 'inequivalent' and r.authoritative


@pytest.mark.parametrize('x,y', [('f1', 'f2'), ('f1', 'f3'), ('f2', 'f3')])
def test_table1_pairs_at_q4(x, y):
    t = table1(2)
    assert qm_decide(t[x], t[y]).verdict == 'inequivalent'
    assert brute_decide(t[x], t[y]) is None


@pytest.mark.parametrize('other', ['f1', 'f2', 'f3'])
def test_f4_pairs_at_q8_filter_mode(other):
    t = table1(3)
    r = qm_decide(t['f4'], t[other], mode='filter')
    assert r.verdict == 'inequivalent_by_filter' and r.method == 'exponent_filter'


def test_filter_mode_never_claims_full_inequivalence():
    f = build(FamilySpec('F3', 2, 2))
    g = transform(f, GF64.from_index(3), GF64.from_index(7), 5)
    r = qm_decide(f, g, mode='filter')
    assert r.verdict == 'equivalent' and r.method == 'exponent_filter'
    h = table1(2)['f2']
    r = qm_decide(f, h, mode='filter')
    assert r.verdict in ('inequivalent_by_filter', 'undecided')
    assert r.verdict != 'inequivalent'
    if r.verdict == 'undecided':
        assert not r.authoritative


@pytest.mark.parametrize('q', [3, 5])
def test_f5inv_against_quadrinomials(q):
    f = f5_inverse_polynomial(q, 1)
    for inst in catalog(q).table('known-quadrinomials'):
        r = qm_decide(f, inst)
        assert r.verdict == 'inequivalent', inst.label


def test_pattern_with_free_coefficients_is_not_overclaimed():
    f = build(FamilySpec('F1', 2, 2))
    r = qm_decide(f, catalog(4).get('f1'))
    assert r.verdict == 'undecided' and not r.authoritative


@settings(max_examples=50)
@given(planted())
def test_planted_transforms_recovered(case):
    g, f, (d, a, b) = case
    assert d in d_filter(exponent_set(g), exponent_set(f))
    r = qm_decide(f, g)
    assert r.verdict == 'equivalent'
    ok, pts, exhaustive = confirm(f, g, r.witness)
    assert ok and exhaustive and pts == GF64.order


@settings(max_examples=25)
@given(planted())
def test_symmetric_with_inverted_witness(case):
    g, f, _ = case
    r1, r2 = qm_decide(f, g), qm_decide(g, f)
    assert r1.equivalent and r2.equivalent
    d, a, b = r1.witness
    dinv = pow(d, -1, 63)
    inverse = (dinv, a.inverse(), b.inverse() ** dinv)
    assert confirm(g, f, inverse)[0]


@settings(max_examples=20)
@given(trinomials(make_field(2, 3)), trinomials(make_field(2, 3)))
def test_agrees_with_brute_force_oracle(f, g):
    r = qm_decide(f, g)
    w = brute_decide(f, g)
    assert r.equivalent == (w is not None)


def test_solve_coefficients_non_unique_roots():
    # exponent differences 6 and 18 are not units mod 63, so b is only pinned by log congruences
    f = SparsePolynomial(GF64, {3: 1, 9: 1, 21: 1})
    g = transform(f, GF64.from_index(9), GF64.from_index(41), 1)
    a, b = solve_coefficients(g, f, 1)
    assert confirm(g, f, (1, a, b))[0]


def test_report_validation_and_roundtrip():
    with pytest.raises(ValueError):
        EquivalenceReport('maybe', 'full_decision', 1)
    with pytest.raises(ValueError):
        EquivalenceReport('equivalent', 'full_decision', 1)
    f = build(FamilySpec('F3', 2, 2))
    g = transform(f, GF64.from_index(3), GF64.from_index(7), 5)
    r = qm_decide(f, g)
    rec = json.loads(json.dumps(r.to_record()))
    assert EquivalenceReport.from_record(rec) == r
    assert EquivalenceReport.from_record(rec, GF64) == r


# ---- catalog -----------------------------------------------------------

def test_catalog_q4_table1():
    listing = catalog(4)
    present = {i.label for i in listing.table('new-trinomials')}
    assert present == {'f1', 'f2', 'f3'}
    assert 'f4' in dict(listing.omitted)


def test_catalog_frozen_exponents():
    assert catalog(8).get('k4').exponents == (1, 64, 456)
    assert catalog(3).get('Q5').exponents == (1, 3, 9, 7)


def test_catalog_characteristic_split():
    assert {i.entry.char for i in catalog(4).present} == {'even'}
    assert {i.entry.char for i in catalog(5).present} == {'odd'}


def test_every_entry_roundtrips_through_text():
    entries = equiv.load_catalog()
    assert len(entries) == 4 + 16 + 5
    text = '\n\n'.join(e.to_text() for e in entries)
    assert parse_catalog(text) == entries


def test_catalog_parse_errors():
    with pytest.raises(ValueError):
        parse_catalog('entry x\ntable t\nchar even\nm all\nend')           # no terms
    with pytest.raises(ValueError):
        parse_catalog('entry x\ntable t\nchar even\nterm 1 : q\nm all')     # unterminated
    with pytest.raises(ValueError):
        parse_catalog('table t')


def test_m_conditions():
    c = parse_m_condition('m mod 3 != 2 and m mod 2 == 0')
    assert c == ((3, '!=', 2), (2, '==', 0))
    assert parse_m_condition('all') == ()
    with pytest.raises(ValueError):
        parse_m_condition('m > 3')


def test_exponent_expressions():
    assert eval_exponent('q*(q^2-q+1)', 4) == 52
    assert eval_exponent('2*q^2+2*q', 8) == 144
    with pytest.raises(ValueError):
        eval_exponent('__import__("os")', 2)


def test_instances_build_concrete_polynomials():
    inst = catalog(4).get('k5')
    F = GF64
    with pytest.raises(ValueError):
        inst.polynomial(F)
    g = inst.polynomial(F, {'a': F.one, 'b': F.one})
    assert set(g.terms) == set(inst.exponents)


def test_prime_power():
    assert equiv.prime_power(8) == (2, 3)
    assert equiv.prime_power(25) == (5, 2)
    with pytest.raises(ValueError):
        equiv.prime_power(12)
