import json
import math
from fractions import Fraction

import pytest

from trispec import __version__
from trispec.cli import run
from trispec.export import OutputRecord


def _run(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify(capsys):
    assert _run(capsys, 'classify', '2', '3', '6') == (0, 'euclidean\n', '')
    code, out, _ = _run(capsys, 'classify', '5', '3', '2', '--describe')
    assert code == 0
    assert out.splitlines()[0] == 'spherical'
    assert 'name: icosahedral' in out
    assert 'order: 60' in out
    assert _run(capsys, 'classify', '2', '3', '7')[1] == 'hyperbolic\n'


def test_square_spectrum_json(capsys):
    code, out, _ = _run(capsys, 'spectrum', '2', '4', '4', '--max', '10', '--format', 'json')
    assert code == 0
    record = OutputRecord.from_json(out)
    rows = [(e.lambda_, e.mult) for e in record.entries]
    assert rows == [(0, 1), (1, 1), (2, 1), (4, 1), (5, 2), (8, 1), (9, 1), (10, 2)]
    assert record.metadata['version'] == __version__
    assert record.metadata['geometry_name'] == 'square'


def test_spectrum_csv_matches_json(capsys):
    _, as_csv, _ = _run(capsys, 'spectrum', '2', '3', '6', '--max', '50', '--format', 'csv')
    _, as_json, _ = _run(capsys, 'spectrum', '2', '3', '6', '--max', '50', '--format', 'json')
    csv_rows = [tuple(int(x) for x in line.split(',') if x)
                for line in as_csv.strip().split('\n')[1:]]
    json_rows = [(e['lambda'], e['multiplicity']) for e in json.loads(as_json)['entries']]
    assert csv_rows == json_rows
    assert as_csv.startswith('lambda,degree_l,multiplicity\n')


def test_spectrum_include_zeros(capsys):
    _, out, _ = _run(capsys, 'spectrum', '2', '4', '4', '--max', '3', '--format', 'csv',
                     '--include-zeros')
    assert out.strip().split('\n')[1:] == ['0,,1', '1,,1', '2,,1', '3,,0']


def test_spectrum_by_degree(capsys):
    _, out, _ = _run(capsys, 'spectrum', '2', '3', '5', '--max', '15', '--by-degree',
                     '--format', 'json')
    record = OutputRecord.from_json(out)
    assert record.entries[-1].degree_l == 15
    assert record.entries[-1].mult == 1


def test_spectrum_output_file(capsys, tmp_path):
    target = tmp_path / 'spec.json'
    code, out, _ = _run(capsys, 'spectrum', '3', '3', '3', '--max', '20', '--format', 'json',
                        '--output', str(target))
    assert code == 0 and out == ''
    assert OutputRecord.from_json(target.read_text(encoding='utf-8')).group == [3, 3, 3]


# rotation angles (in turns) with their counts, listed by hand
CENSUSES = {
    (2, 2, 7): {**{Fraction(k, 7): 1 for k in range(7)}, Fraction(1, 2): 7},
    (2, 3, 3): {Fraction(0): 1, Fraction(1, 3): 4, Fraction(2, 3): 4, Fraction(1, 2): 3},
    (2, 3, 4): {Fraction(0): 1, Fraction(1, 3): 4, Fraction(2, 3): 4, Fraction(1, 4): 3,
                Fraction(3, 4): 3, Fraction(1, 2): 9},
    (2, 3, 5): {**{Fraction(k, 5): 6 for k in range(1, 5)}, Fraction(0): 1,
                Fraction(1, 3): 10, Fraction(2, 3): 10, Fraction(1, 2): 15},
}


def _character_sum(census, l):
    total = 0.0
    for turn, count in census.items():
        if turn == 0:
            total += count * (2 * l + 1)
        else:
            total += count * math.sin((2 * l + 1) * math.pi * turn) / math.sin(math.pi * turn)
    return round(total / sum(census.values()))


def _residue_divisors(N, modulus):
    counts = [[0] * modulus for _ in range(N + 1)]
    for d in range(1, N + 1):
        for multiple in range(d, N + 1, d):
            counts[multiple][d % modulus] += 1
    return counts


def _lattice_table(sig, N):
    if sig == (2, 4, 4):
        per, modulus, plus, minus, quotient = 4, 4, 1, 3, 4
    else:
        per, modulus, plus, minus, quotient = 6, 3, 1, 2, 6 if sig == (2, 3, 6) else 3
    counts = _residue_divisors(N, modulus)
    return [1] + [per * (counts[lam][plus] - counts[lam][minus]) // quotient
                  for lam in range(1, N + 1)]


@pytest.mark.parametrize('sig', sorted(CENSUSES))
def test_spherical_spectrum_matches_character_sum(capsys, sig):
    code, out, _ = _run(capsys, 'spectrum', *map(str, sig), '--max', '100', '--by-degree',
                        '--include-zeros', '--format', 'json')
    assert code == 0
    rows = [(e['degree_l'], e['lambda'], e['multiplicity']) for e in json.loads(out)['entries']]
    assert rows == [(l, l * (l + 1), _character_sum(CENSUSES[sig], l)) for l in range(101)]


@pytest.mark.parametrize('sig', [(2, 3, 6), (2, 4, 4), (3, 3, 3)])
def test_euclidean_spectrum_matches_divisor_counts(capsys, sig):
    code, out, _ = _run(capsys, 'spectrum', *map(str, sig), '--max', '10000',
                        '--include-zeros', '--format', 'json')
    assert code == 0
    rows = [e['multiplicity'] for e in json.loads(out)['entries']]
    assert rows == _lattice_table(sig, 10000)


def test_multiplicity(capsys):
    assert _run(capsys, 'multiplicity', '2', '3', '5', '--degree', '15')[1] == '1\n'
    assert _run(capsys, 'multiplicity', '2', '3', '5', '--lambda', '240')[1] == '1\n'
    assert _run(capsys, 'multiplicity', '2', '3', '5', '--lambda', '241')[1] == '0\n'
    assert _run(capsys, 'multiplicity', '2', '4', '4', '--lambda', '10')[1] == '2\n'
    assert _run(capsys, 'multiplicity', '2', '4', '4', '--lambda', '2.5')[1] == '0\n'
    assert _run(capsys, 'multiplicity', '3', '3', '3', '--lambda', '0')[1] == '1\n'


def test_multiplicity_degree_on_euclidean_is_usage_error(capsys):
    code, _, err = _run(capsys, 'multiplicity', '2', '4', '4', '--degree', '3')
    assert code == 2
    assert 'spherical' in err


def test_census(capsys):
    code, out, _ = _run(capsys, 'census', '2', '2', '4', '--format', 'json')
    assert code == 0
    census = {row['turn']: row['count'] for row in json.loads(out)['metadata']['census']}
    assert census == {'0': 1, '1/4': 1, '1/2': 5, '3/4': 1}
    code, out, _ = _run(capsys, 'census', '2', '4', '4')
    assert code == 0
    assert 'quotient_order' in out
    _, out, _ = _run(capsys, 'census', '2', '3', '3', '--format', 'csv')
    assert out.split('\n')[0] == 'turn,angle,count'


def test_count(capsys):
    code, out, _ = _run(capsys, 'count', '2', '3', '5', '--max', '30')
    assert code == 0
    assert 'leading coefficient = 1/60' in out
    code, out, _ = _run(capsys, 'count', '2', '4', '4', '--max', '10')
    assert out.splitlines()[0] == 'N(10) = 10'


def test_hyperbolic_spectrum_is_usage_error(capsys):
    code, _, err = _run(capsys, 'spectrum', '2', '3', '7', '--max', '10')
    assert code == 2
    assert 'not supported' in err


def test_usage_errors(capsys):
    assert _run(capsys, 'spectrum', '2', '2', 'inf', '--max', '3')[0] == 2
    assert _run(capsys, 'spectrum', '1', '2', '3', '--max', '3')[0] == 2
    assert _run(capsys, 'bogus')[0] == 2
    assert _run(capsys, 'multiplicity', '2', '3', '5')[0] == 2


def test_version(capsys):
    code, out, _ = _run(capsys, '--version')
    assert code == 0
    assert __version__ in out


def test_config(capsys, isolated_prefs):
    assert _run(capsys, 'config', 'set', 'format', 'csv')[0] == 0
    code, out, _ = _run(capsys, 'config', 'show')
    assert 'format = "csv"' in out
    assert (isolated_prefs / 'prefs.json').exists()
    # the stored format becomes the spectrum default
    _, out, _ = _run(capsys, 'spectrum', '2', '4', '4', '--max', '2')
    assert out.startswith('lambda,degree_l,multiplicity\n')
    assert _run(capsys, 'config', 'set', 'jobs', 'many')[0] == 2
    assert _run(capsys, 'config', 'set', 'colour', 'red')[0] == 2
    _run(capsys, 'config', 'reset')
    _, out, _ = _run(capsys, 'config', 'show')
    assert 'format = "text"' in out


def test_verify_relations(capsys):
    code, out, _ = _run(capsys, 'verify', '--suite', 'relations', '--jobs', '1', '--seed', '4')
    assert code == 0
    assert out.startswith('PASS relations')
    assert 'seed = 4' in out


def test_verify_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv('TRISPEC_SEED', '23')
    code, out, _ = _run(capsys, 'verify', '--suite', 'relations', '--jobs', '1')
    assert code == 0
    assert 'seed = 23' in out
    monkeypatch.setenv('TRISPEC_SEED', 'x')
    assert _run(capsys, 'verify', '--suite', 'relations', '--jobs', '1')[0] == 2


def test_verify_failure_exit_code(capsys, monkeypatch):
    import trispec.verify as verify

    def broken(limit, seed):
        return [('broken', lambda: [verify.CheckResult('always fails', False, 'x')], ())]

    monkeypatch.setitem(verify.SUITES, 'relations', broken)
    code, out, _ = _run(capsys, 'verify', '--suite', 'relations', '--jobs', '1')
    assert code == 1
    assert 'FAIL relations' in out
    assert 'always fails' in out
