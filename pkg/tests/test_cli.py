import json

import pytest
from click.testing import CliRunner

from spbw.cli import cli


@pytest.fixture
def invoke():
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(cli, list(args))

    return invoke


def test_verify_annihilators(invoke, tmp_path):
    path = tmp_path / 'report.json'
    result = invoke(
        'verify',
        '--preset',
        'f4z2-ext',
        '--thm',
        'ann-subsets',
        '--trials',
        '20',
        '--seed',
        '7',
        '--degree',
        '1',
        '--json',
        str(path),
    )
    assert result.exit_code == 0
    assert 'ann-subsets: yes' in result.output
    report = json.loads(path.read_text())
    assert report['verdict'] is True
    assert report['command'] == 'verify'
    assert report['seed'] == 7


def test_check_compat_failure(invoke):
    result = invoke('check-compat', '--preset', 's2z4', '--mode', 'both')
    assert result.exit_code == 1
    assert 's3' in result.output
    assert 'derived laws' in result.output


def test_check_compat_sampled(invoke):
    result = invoke('check-compat', '--preset', 't2z-symbolic')
    assert result.exit_code == 1
    assert 'sampled' in result.output


def test_mul(invoke):
    result = invoke('mul', '--preset', 'qplane5', 'y', 'x')
    assert result.exit_code == 0
    assert result.output.strip() == '(2)*x*y'


def test_mul_from_file(invoke, tmp_path):
    path = tmp_path / 'plane.spbw'
    path.write_text('ring K = GF(7);\nextension Q over K { vars x, y; y*x = 3*x*y; }\n')
    result = invoke('mul', '--file', str(path), 'y', 'x')
    assert result.exit_code == 0
    assert result.output.strip() == '(3)*x*y'


def test_ring_info(invoke):
    result = invoke('ring-info', '--preset', 'f4z2')
    assert result.exit_code == 0
    assert 'quotient(GF(4, a^2 + a + 1), z, z^2)' in result.output
    assert 's22' in result.output


def test_nilpoly(invoke):
    result = invoke('nilpoly', '--preset', 's2z4', 'e*x3')
    assert result.exit_code == 0
    assert 'is nilpotent' in result.output
    result = invoke('nilpoly', '--preset', 's2z4', '--mode', 'both', 'x1')
    assert result.exit_code == 0
    assert 'not nilpotent' in result.output


def test_weak_ann(invoke):
    result = invoke('weak-ann', '--preset', 'f4z2-ext', '--mode', 'both', 'x1 + z')
    assert result.exit_code == 0
    assert 'both_agree' in result.output
    result = invoke('weak-ann', '--preset', 'f4z2', 'a')
    assert result.exit_code == 0
    assert 'z' in result.output


def test_nass(invoke, tmp_path):
    path = tmp_path / 'nass.json'
    result = invoke('nass', '--preset', 'mat-kt2', '--json', str(path))
    assert result.exit_code == 0
    (entry,) = json.loads(path.read_text())['results']
    assert [p['cardinality'] for p in entry['primes']] == [8]


def test_nass_extension_on_other_extension(invoke):
    result = invoke(
        'verify', '--preset', 'mat-kt2', '--ext', 'A', '--thm', 'nass-ext', '--degree', '2'
    )
    assert result.exit_code == 0


def test_confluence_failure(invoke):
    result = invoke('verify', '--preset', 'corrupted-gf5', '--thm', 'confluence')
    assert result.exit_code == 1
    assert 'variables overlap' in result.output


def test_presets(invoke, tmp_path):
    path = tmp_path / 'presets.json'
    result = invoke('presets', '--json', str(path))
    assert result.exit_code == 0
    assert 'qplane5' in result.output
    (entry,) = json.loads(path.read_text())['results']
    assert 'aw3-gf7' in entry['presets']


@pytest.mark.parametrize(
    'args',
    [
        ['mul', '--preset', 'qplane5', 'w'],
        ['mul', '--preset', 'mat-kt2', '--ext', 'Z', 'x'],
        ['nass', '--preset', 'mat-kt2', '--cap', '8'],
        ['mul', '--file', 'does-not-exist.spbw', 'x'],
    ],
)
def test_errors(invoke, args):
    result = invoke(*args)
    assert result.exit_code == 2
    assert 'error:' in result.output


def test_missing_input(invoke):
    result = invoke('nass')
    assert result.exit_code == 2


@pytest.mark.parametrize('thm', ['ann-element', 'ann-principal'])
def test_ring_side_hypothesis_fails(invoke, tmp_path, thm):
    path = tmp_path / 'report.json'
    result = invoke('verify', '--preset', 's2z4', '--thm', thm, '--json', str(path))
    assert result.exit_code == 2
    assert 'error:' in result.output
    report = json.loads(path.read_text())
    assert report['error']['type'] == 'HypothesisFailedRingSide'
    assert report['error']['witness'] is not None
    assert report['verdict'] is None


def test_ring_info_without_nilpotency_index(invoke, tmp_path):
    source = tmp_path / 'matrices.spbw'
    source.write_text('ring M = matrices(GF(2), 2);\n')
    path = tmp_path / 'info.json'
    result = invoke('ring-info', '--file', str(source), '--json', str(path))
    assert result.exit_code == 0
    assert 'None' not in result.output
    (entry,) = json.loads(path.read_text())['results']
    assert entry['ni'] is False
    assert 'nilindex' not in entry
