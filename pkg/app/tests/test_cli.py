import json
from pathlib import Path

import pytest
from typer.testing import CliRunner

from app.audit import RunAudit
from app.config import load_run_config
from app.main import cli

SAMPLES = Path(__file__).resolve().parents[1] / 'data' / 'samples'

runner = CliRunner()


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / 'run.env'
    path.write_text(
        '\n'.join(
            [
                f'REPORTS_DIR={tmp_path / "reports"}',
                f'AUDIT_DB_PATH={tmp_path / "audit.sqlite"}',
                f'TARGETS_PATH={tmp_path / "targets.yaml"}',
            ]
        )
        + '\n',
        encoding='utf-8',
    )
    return path


def test_check_box_reports_reference_violation(config_file):
    result = runner.invoke(
        cli, ['check-box', str(SAMPLES / 'reference_box_delta2.json'), '--config', str(config_file)]
    )
    assert result.exit_code == 0, result.output
    report = json.loads(result.output)
    assert report['monogamy']['delta'] == pytest.approx(2.0)
    assert report['no_signaling']['is_nonsignaling'] is False
    offending = report['no_signaling']['offending']
    assert any(item.startswith('p(a,e|A0) varies by') for item in offending)
    assert any(item.startswith('p(b,e|B1) varies by') for item in offending)
    assert not any(item.startswith('p(b,e|B0)') for item in offending)
    assert report['channels']['max_capacity'] == pytest.approx(0.158, abs=0.01)


def test_check_box_on_uniform_box(config_file):
    result = runner.invoke(
        cli, ['check-box', str(SAMPLES / 'uniform_box.json'), '--config', str(config_file)]
    )
    assert result.exit_code == 0, result.output
    report = json.loads(result.output)
    assert report['monogamy']['delta'] <= 0
    assert report['channels']['max_capacity'] == 0.0


def test_check_box_rejects_truncated_json(tmp_path, config_file):
    broken = tmp_path / 'broken.json'
    broken.write_text('{"m": 2, "table": [', encoding='utf-8')
    result = runner.invoke(cli, ['check-box', str(broken), '--config', str(config_file)])
    assert result.exit_code == 2
    records = RunAudit(load_run_config(config_file)).recent()
    assert records[0].command == 'check-box' and records[0].action == 'rejected'


def test_curve_command_writes_csv(tmp_path, config_file):
    out = tmp_path / 'curve.csv'
    result = runner.invoke(
        cli,
        ['curve', '--m', '2', '--step', '1.0', '--out', str(out), '--config', str(config_file)],
    )
    assert result.exit_code == 0, result.output
    lines = out.read_text(encoding='utf-8').splitlines()
    assert len(lines) == 4
    assert lines[0].startswith('delta,c_delta,family_value,gava_m2,gava_m3')


def test_curve_command_relaxed_mode(tmp_path, config_file):
    out = tmp_path / 'relaxed.csv'
    result = runner.invoke(
        cli,
        ['curve', '--relaxed', '--step', '1.0', '--out', str(out), '--config', str(config_file)],
    )
    assert result.exit_code == 0, result.output
    lines = out.read_text(encoding='utf-8').splitlines()
    assert len(lines) == 4
    assert lines[0].endswith('x_a0,y_a0')

    rejected = runner.invoke(
        cli, ['curve', '--m', '3', '--relaxed', '--step', '1.0', '--config', str(config_file)]
    )
    assert rejected.exit_code == 2


def test_curve_command_rejects_bad_step(config_file):
    result = runner.invoke(cli, ['curve', '--step', '0.3', '--config', str(config_file)])
    assert result.exit_code == 2


def test_verify_minimal_set_passes_and_is_audited(config_file):
    result = runner.invoke(cli, ['verify', 'minimal-set', '--config', str(config_file)])
    assert result.exit_code == 0, result.output
    settings = load_run_config(config_file)
    assert (settings.REPORTS_DIR / 'verify_minimal-set.json').exists()
    records = RunAudit(settings).recent()
    assert records[0].command == 'verify' and records[0].action == 'passed'


def test_verify_unknown_target(config_file):
    result = runner.invoke(cli, ['verify', 'appendix-z', '--config', str(config_file)])
    assert result.exit_code == 2


def test_verify_reports_failures_with_exit_code_one(config_file):
    settings = load_run_config(config_file)
    settings.TARGETS_PATH.write_text(
        'targets:\n  minimal-set:\n    count_m2: {expected: 2}\n    count_m3: {expected: 1}\n'
        '    count_m2_short: {expected: 0}\n    count_m3_short: {expected: 0}\n',
        encoding='utf-8',
    )
    result = runner.invoke(cli, ['verify', 'minimal-set', '--config', str(config_file)])
    assert result.exit_code == 1


def test_polytope_dump_matches_sample(config_file):
    result = runner.invoke(cli, ['polytope', '--delta', '2', '--config', str(config_file)])
    assert result.exit_code == 0, result.output
    assert result.output == (SAMPLES / 'q_delta_m2_delta2.txt').read_text(encoding='utf-8')


def test_reference_box_command_roundtrip(tmp_path, config_file):
    out = tmp_path / 'ref.json'
    result = runner.invoke(
        cli, ['reference-box', '--x', '0.46', '--out', str(out), '--config', str(config_file)]
    )
    assert result.exit_code == 0, result.output
    checked = runner.invoke(cli, ['check-box', str(out), '--config', str(config_file)])
    assert json.loads(checked.output)['monogamy']['lhs'] == pytest.approx(6.0)

    bad = runner.invoke(
        cli,
        [
            'reference-box',
            '--delta',
            '3',
            '--x',
            '0',
            '--out',
            str(out),
            '--config',
            str(config_file),
        ],
    )
    assert bad.exit_code == 2


def test_missing_config_file_is_an_input_error(tmp_path):
    result = runner.invoke(cli, ['verify', 'minimal-set', '--config', str(tmp_path / 'none.env')])
    assert result.exit_code == 2
