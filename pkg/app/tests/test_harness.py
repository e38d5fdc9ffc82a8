import pytest
from pydantic import ValidationError

from app.audit import RunAudit
from app.config import RunConfig, get_settings, load_run_config
from app.evaluation import TargetStore, run_verification, write_report
from app.telemetry import collect_metrics, p95, reset_metrics, span, summarize, timed


@pytest.fixture
def settings(tmp_path):
    return get_settings().with_overrides(
        reports_dir=tmp_path / 'reports',
        audit_db_path=tmp_path / 'audit.sqlite',
        targets_path=tmp_path / 'targets.yaml',
        property_samples=200,
        channel_samples=100,
    )


def test_target_store_seeds_defaults(settings):
    store = TargetStore(settings)
    assert settings.TARGETS_PATH.exists()
    alpha = store.targets('appendix-b')['alpha_star']
    assert alpha.expected == pytest.approx(0.459)
    assert alpha.tolerance == pytest.approx(0.002)
    assert '0.469' in alpha.note


def test_minimal_set_verification(settings):
    report = run_verification('minimal-set', settings)
    assert report.passed
    assert [check.name for check in report.checks] == [
        'count_m2',
        'count_m3',
        'count_m2_short',
        'count_m3_short',
    ]
    assert 'verify.minimal-set' in report.timings
    path = write_report(report, settings)
    assert path.exists() and path.parent == settings.REPORTS_DIR


def test_appendix_b_verification(settings):
    report = run_verification('appendix-b', settings)
    failed = [check for check in report.checks if not check.passed]
    assert not failed, failed
    assert 'strength.minimax' in report.timings


def test_property_suites_pass(settings):
    report = run_verification('properties', settings)
    failed = [check for check in report.checks if not check.passed]
    assert not failed, failed


def test_run_config_validation_and_overrides(tmp_path):
    with pytest.raises(ValidationError):
        RunConfig(SOLVER_TOL=0.0)
    with pytest.raises(ValidationError):
        RunConfig(GRID_STEP=0.2)
    config = tmp_path / 'run.env'
    config.write_text(
        f'SEED=11\nSOLVER_TOL=1e-5\nREPORTS_DIR={tmp_path / "reports"}\n', encoding='utf-8'
    )
    loaded = load_run_config(config, seed=3)
    assert loaded.SEED == 3
    assert loaded.SOLVER_TOL == pytest.approx(1e-5)
    assert loaded.REPORTS_DIR.exists()
    with pytest.raises(FileNotFoundError):
        load_run_config(tmp_path / 'missing.env')


def test_telemetry_spans_and_summary():
    reset_metrics()
    with span('unit.block'):
        pass

    @timed('unit.call')
    def double(x):
        return 2 * x

    assert double(4) == 8
    metrics = collect_metrics()
    assert set(metrics) == {'unit.block', 'unit.call'}
    summary = summarize()
    assert summary['unit.call']['calls'] == 1.0
    assert p95([]) == 0.0
    assert p95([1.0, 2.0, 3.0]) == 3.0


def test_run_audit_records_commands(settings):
    audit = RunAudit(settings)
    audit.log('curve', 'written', {'m': 2, 'rows': 21})
    audit.log('verify', 'passed', {'target': 'minimal-set'})
    recent = audit.recent(limit=2)
    assert [record.command for record in recent] == ['verify', 'curve']
    assert recent[1].payload == {'m': 2, 'rows': 21}
