import io
import json
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from ffperm import cli
from ffperm.equiv import EquivalenceReport
from ffperm.field import make_field
from ffperm.verify import ResultantCheckReport, TheoremReport


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out)
    return code, out.getvalue()


def records(text):
    return [json.loads(line) for line in text.splitlines()]


ZETA = str(make_field(2, 6).subfield_elements(4, nonzero=True)[1])


# ---- verify --------------------------------------------------------------

def test_verify_f3_pattern():
    code, out = run('verify', 'F3', '--m', '1..5', '--format', 'json')
    assert code == cli.EXIT_OK
    assert [r['observed'] for r in records(out)] == [False, True, True, False, True]


def test_verify_f1_converse_reports_witness():
    code, out = run('verify', 'F1', '--m', '2', '--a', '1', '--b', ZETA, '--format', 'json')
    assert code == cli.EXIT_OK
    (rec,) = records(out)
    assert rec['observed'] is False and rec['verdict'] == 'pass'
    a_plus_b = make_field(2, 6).one + make_field(2, 6).parse(ZETA)
    assert rec['witness']['named_pair'] == ['gf2_6:000000', str(a_plus_b)]
    assert rec['witness']['named_pair_collides']


def test_verify_unknown_family():
    assert run('verify', 'F9')[0] == cli.EXIT_USAGE


def test_verify_theorem_id_and_grid():
    code, out = run('verify', 'T35', '--grid', '3:1,5:1')
    assert code == cli.EXIT_OK
    assert 'T35: 2/2 cells match predictions' in out


def test_verify_all_passes():
    code, out = run('verify', 'all')
    assert code == cli.EXIT_OK
    assert 'FAIL' not in out


# ---- invert --------------------------------------------------------------

def test_invert_f5_formula_vs_brute():
    code, out = run('invert', 'F5', '--p', '3', '--m', '1', '--method', 'formula,brute')
    assert code == cli.EXIT_OK
    assert 'agree on 27/27 points' in out


def test_invert_f2_dickson():
    code, out = run('invert', 'F2', '--m', '2', '--a', '1', '--b', '1', '--method', 'dickson',
                    '--format', 'json')
    assert code == cli.EXIT_OK
    (rec,) = records(out)
    assert len(rec['linv_coefficients']) == 6
    assert rec['exponent'] * 5 % 63 == 1


def test_invert_non_permutation():
    code, out = run('invert', 'F1', '--m', '2', '--a', '1', '--b', ZETA, '--format', 'json')
    assert code == cli.EXIT_FAIL
    (rec,) = records(out)
    assert rec['record'] == 'not_a_permutation' and len(rec['witness']) == 2


def test_invert_brute_table():
    code, out = run('invert', 'F4', '--m', '1', '--method', 'brute', '--format', 'json')
    assert code == cli.EXIT_OK
    assert len(records(out)[0]['values']) == 8


def test_invert_bad_method():
    assert run('invert', 'F5', '--method', 'magic')[0] == cli.EXIT_USAGE
    assert run('invert', 'F5', '--method', 'dickson')[0] == cli.EXIT_USAGE


# ---- equiv ---------------------------------------------------------------

def test_equiv_f1_f2():
    code, out = run('equiv', 'F1', 'F2', '--m', '2', '--format', 'json')
    assert code == cli.EXIT_OK
    (rec,) = records(out)
    assert rec['verdict'] == 'inequivalent' and rec['d_candidates_examined'] == 36
    assert EquivalenceReport.from_record(rec).verdict == 'inequivalent'


def test_equiv_reflexive():
    code, out = run('equiv', 'F1', 'F1', '--m', '2', '--format', 'json')
    (rec,) = records(out)
    assert rec['verdict'] == 'equivalent' and rec['witness']['d'] == 1


def test_equiv_f5inv_q1():
    code, out = run('equiv', 'F5INV', 'Q1', '--p', '3', '--m', '1')
    assert code == cli.EXIT_OK and 'inequivalent' in out.splitlines()[0]


def test_equiv_polynomial_text_operand():
    x = 'gf2_6:010000'
    code, out = run('equiv', 'F3', f'{x}*X^5+{x}*X^17+{x}*X^10',
                    '--m', '2', '--format', 'json')
    assert code == cli.EXIT_OK
    assert records(out)[0]['verdict'] == 'equivalent'


def test_equiv_mismatched_fields():
    assert run('equiv', 'F1', 'F5')[0] == cli.EXIT_USAGE
    assert run('equiv', 'F1', 'k2', '--m', '2')[0] == cli.EXIT_USAGE   # k2 needs m != 2 mod 3
    assert run('equiv', 'F1', 'nonsense', '--m', '2')[0] == cli.EXIT_USAGE


# ---- resultant-check, catalog, field-info --------------------------------

def test_resultant_check_forms():
    code, out = run('resultant-check', 't35', '--trials', '20', '--format', 'json')
    assert code == cli.EXIT_FAIL
    rep = ResultantCheckReport.from_record(records(out)[0])
    assert rep.passed < rep.trials
    code, _ = run('resultant-check', 't35', '--trials', '20', '--form', 'corrected')
    assert code == cli.EXIT_OK
    assert run('resultant-check', 't31', '--p', '3')[0] == cli.EXIT_USAGE


def test_catalog_listing():
    code, out = run('catalog', '--q', '8', '--format', 'json')
    assert code == cli.EXIT_OK
    recs = {r['label']: r for r in records(out)}
    assert recs['k4']['exponents'] == [1, 64, 456]
    assert recs['Q1']['record'] == 'catalog_omitted'
    assert run('catalog', '--q', '12')[0] == cli.EXIT_USAGE


def test_field_info():
    code, out = run('field-info', '--p', '2', '--k', '6')
    assert code == cli.EXIT_OK
    assert 'modulus: x^6 + x + 1' in out
    assert run('field-info', '--p', '4', '--k', '1')[0] == cli.EXIT_USAGE


def test_missing_subcommand_is_usage():
    assert run()[0] == cli.EXIT_USAGE
    assert run('verify')[0] == cli.EXIT_USAGE


# ---- determinism and round trips ---------------------------------------

@pytest.mark.parametrize('jobs', ['1', '3'])
def test_structured_output_is_byte_identical(jobs):
    argv = ['verify', 'T31', '--m', '1..3', '--format', 'json', '--seed', '4']
    first = run(*argv)[1]
    assert run(*argv, '--jobs', jobs)[1] == first
    rep = TheoremReport.from_jsonl(first)
    assert rep.to_jsonl() == first and rep.seed == 4


def test_resultant_records_are_deterministic():
    argv = ['resultant-check', 't31', '--m', '2', '--trials', '10', '--seed', '9', '--format', 'json']
    assert run(*argv) == run(*argv)


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, '-m', 'ffperm.cli', 'verify', 'F9'],
                          capture_output=True, text=True)
    assert proc.returncode == cli.EXIT_USAGE


configs = st.sampled_from([('verify', ('F1',)), ('invert', ('F5',)), ('resultant-check', ('t31',))]).flatmap(
    lambda ct: st.builds(
        cli.CommandConfig,
        command=st.just(ct[0]),
        targets=st.just(ct[1]),        p=st.none() | st.sampled_from([2, 3, 5]),
        m=st.none() | st.sampled_from(['1', '1..4', '2,3']),
        a=st.none() | st.just('gf2_6:100000'),
        a_index=st.none() | st.integers(0, 3),
        seed=st.integers(0, 100),
        jobs=st.integers(1, 4),
        format=st.sampled_from(['text', 'json']),
    ))


@given(configs)
def test_config_argv_roundtrip(cfg):
    argv = cfg.to_argv()
    parsed = cli.parse_config(argv)
    assert parsed == cfg
    assert parsed.to_command_line().startswith('ffperm ' + cfg.command)
