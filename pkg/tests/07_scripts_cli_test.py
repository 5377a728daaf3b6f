import json
import pytest
from ftrt import __version__
from ftrt.scripts.ftrt import main, trace_path_for

SCENARIO = {
    'processors': 3,
    'horizon': 8,
    'policy': 'pb-overload',
    'tasks': "1 0 0 6 2\n2 0 0 6 2\n3 0 0 8 2\n",
    'faults': [],
}


@pytest.fixture
def scenario(tmp_path):
    path = tmp_path / 'three.json'
    path.write_text(json.dumps(SCENARIO))
    return path


def test_run_writes_report_and_trace(scenario, capsys):
    assert main(['run', '-s', str(scenario)]) == 0
    report = scenario.with_name('three.report.json')
    trace = scenario.with_name('three.trace')
    assert report.exists() and trace.exists()
    assert 't=2 DEALLOC task=1 proc=2 kind=B' in trace.read_text().splitlines()
    assert 'committed 3/3' in capsys.readouterr().out


def test_run_policy_and_output_overrides(scenario, tmp_path):
    out = tmp_path / 'edf' / 'result.json'
    assert main(['run', '-s', str(scenario), '-p', 'edf', '-o', str(out)]) == 0
    data = json.loads(out.read_text())
    assert data['config']['policy']['fault_tolerance'] is False
    assert data['ftrt_version'] == __version__
    assert (tmp_path / 'edf' / 'result.trace').exists()


def test_trace_sits_next_to_dotted_report_names(scenario, tmp_path):
    assert trace_path_for('out/x.report.json').as_posix() == 'out/x.trace'
    assert trace_path_for('run.v2.json').name == 'run.v2.trace'
    assert trace_path_for('run.v2.out').name == 'run.v2.out.trace'
    out = tmp_path / 'run.v2.json'
    assert main(['run', '-s', str(scenario), '-o', str(out)]) == 0
    assert (tmp_path / 'run.v2.trace').exists()
    assert not (tmp_path / 'run.trace').exists()


def test_compare_and_gantt(scenario, tmp_path, capsys):
    out = tmp_path / 'cmp.json'
    assert main(['compare', '-s', str(scenario), '-o', str(out)]) == 0
    assert set(json.loads(out.read_text())['metrics']) == {'edf', 'pb', 'pb-overload'}
    capsys.readouterr()

    assert main(['run', '-s', str(scenario)]) == 0
    capsys.readouterr()
    assert main(['gantt', str(scenario.with_name('three.report.json'))]) == 0
    assert '*~1/~3' in capsys.readouterr().out


def test_batch(tmp_path, capsys):
    path = tmp_path / 'gen.json'
    path.write_text(json.dumps({'processors': 3, 'workload': {'count': 6, 'arrival_window': [0, 8]},
                                'fault_rates': {'a': 0.02, 'c': 0.5}}))
    out = tmp_path / 'agg.json'
    assert main(['batch', '-s', str(path), '-n', '2', '--seed', '4', '-o', str(out)]) == 0
    assert json.loads(out.read_text())['seeds'] == [4, 5]
    assert 'pb-overload' in capsys.readouterr().out


def test_configuration_errors_exit_2(tmp_path, capsys):
    bad = tmp_path / 'bad.json'
    bad.write_text(json.dumps({**SCENARIO, 'horizon': 5}))
    assert main(['run', '-s', str(bad)]) == 2
    assert capsys.readouterr().err.startswith('error: bad.json')

    assert main(['run', '-s', str(tmp_path / 'none.json')]) == 2
    assert main(['gantt', str(tmp_path / 'none.report.json')]) == 2
    assert main([]) == 2


def test_unknown_policy_is_rejected_by_the_parser(scenario):
    with pytest.raises(SystemExit):
        main(['run', '-s', str(scenario), '-p', 'rm'])
