import json
import struct

import numpy as np
import pytest

from kcore_peel.cli.service import main
from kcore_peel.cli.views import ExitCode
from kcore_peel.graph.service import load_graph, save_graph
from kcore_peel.oracle.service import bz_coreness, load_coreness, save_coreness
from kcore_peel.oracle.views import CorenessArray


@pytest.fixture
def hcns_file(tmp_path, hcns3):
	path = tmp_path / 'hcns3.kcg'
	save_graph(hcns3, path)
	return path


def test_gen_writes_graph(tmp_path, capsys):
	out = tmp_path / 'grid.kcg'
	assert main(['gen', 'grid', '--w', '3', '--h', '3', '-o', str(out)]) == ExitCode.OK
	assert 'n=9 m2=24' in capsys.readouterr().out
	assert load_graph(out).n == 9


def test_gen_edge_list(tmp_path):
	out = tmp_path / 'ba.txt'
	assert main(['gen', 'ba', '--n', '50', '--a', '3', '--seed', '1', '-o', str(out), '--edge-list']) == ExitCode.OK
	assert not out.read_bytes().startswith(b'KCG1')
	assert load_graph(out).n == 50


def test_gen_rejects_bad_parameters(tmp_path):
	assert main(['gen', 'hcns', '--kmax', '0', '-o', str(tmp_path / 'x.kcg')]) == ExitCode.CONFIG


def test_run_and_verify(tmp_path, hcns_file, hcns3, capsys):
	coreness_path = tmp_path / 'out.kcc'
	stats_path = tmp_path / 'stats.json'
	code = main(['run', str(hcns_file), '--threads', '2', '--coreness-out', str(coreness_path), '--stats-out', str(stats_path)])
	assert code == ExitCode.OK
	assert 'kmax=3' in capsys.readouterr().out

	with open(coreness_path, 'rb') as f:
		assert load_coreness(f) == bz_coreness(hcns3)
	stats = json.loads(stats_path.read_text())
	assert stats['kmax'] == 3
	assert stats['config']['label'] == 'online:vgc128:auto'

	assert main(['verify', str(hcns_file), str(coreness_path)]) == ExitCode.OK
	assert 'matches' in capsys.readouterr().out


def test_verify_reports_mismatch(tmp_path, hcns_file, hcns3, capsys):
	wrong = bz_coreness(hcns3).values.copy()
	wrong[0] -= 1
	path = tmp_path / 'wrong.kcc'
	with open(path, 'wb') as f:
		save_coreness(CorenessArray(wrong), f)

	assert main(['verify', str(hcns_file), str(path)]) == ExitCode.MISMATCH
	assert 'mismatch at vertex 0' in capsys.readouterr().out


def test_verify_length_mismatch_and_bad_file(tmp_path, hcns_file):
	short = tmp_path / 'short.kcc'
	with open(short, 'wb') as f:
		save_coreness(CorenessArray(np.array([1, 2])), f)
	assert main(['verify', str(hcns_file), str(short)]) == ExitCode.FORMAT

	garbage = tmp_path / 'garbage.kcc'
	garbage.write_bytes(b'nonsense')
	assert main(['verify', str(hcns_file), str(garbage)]) == ExitCode.FORMAT


def test_oversized_header_counts_exit_with_format(tmp_path, hcns_file):
	coreness = tmp_path / 'huge.kcc'
	coreness.write_bytes(b'KCC1' + struct.pack('<Q', 2**63))
	assert main(['verify', str(hcns_file), str(coreness)]) == ExitCode.FORMAT

	graph = tmp_path / 'huge.kcg'
	graph.write_bytes(b'KCG1' + struct.pack('<QQ', 2**61, 0))
	assert main(['info', str(graph)]) == ExitCode.FORMAT


def test_run_rejects_unreadable_graphs(tmp_path):
	assert main(['run', str(tmp_path / 'missing.kcg')]) == ExitCode.FORMAT

	bad = tmp_path / 'bad.txt'
	bad.write_text('0 1\nnot an edge\n')
	assert main(['run', str(bad)]) == ExitCode.FORMAT

	binary = tmp_path / 'bad.bin'
	binary.write_bytes(b'\xff\xfe\x00\x81')
	assert main(['run', str(binary)]) == ExitCode.FORMAT


@pytest.mark.parametrize(
	'extra',
	[
		['--peel', 'offline', '--sampling', 'on'],
		['--peel', 'offline', '--vgc', '8'],
		['--bucketing', 'bogus'],
		['--threads', '0'],
		['--no-such-flag'],
	],
)
def test_run_rejects_bad_configuration(hcns_file, extra, capsys):
	assert main(['run', str(hcns_file), *extra]) == ExitCode.CONFIG


def test_run_kprime(tmp_path, hcns_file, capsys):
	assert main(['run', str(hcns_file), '--kprime', '3']) == ExitCode.OK
	assert capsys.readouterr().out.split() == ['0', '1', '2', '3']

	out = tmp_path / 'core.txt'
	assert main(['run', str(hcns_file), '--kprime', '2', '--subgraph-out', str(out)]) == ExitCode.OK
	assert out.read_text().split() == ['0', '1', '2', '3', '5']


def test_bench_report(tmp_path, hcns_file):
	report_path = tmp_path / 'report.json'
	code = main(
		[
			'bench',
			str(hcns_file),
			'--configs',
			'online:vgc0:hbs,offline:single,online:sampling:fixed:4',
			'--repeat',
			'2',
			'--threads',
			'1',
			'--report-out',
			str(report_path),
		]
	)
	assert code == ExitCode.OK

	records = json.loads(report_path.read_text())
	assert [r['label'] for r in records] == ['online:vgc0:hbs', 'offline:vgc0:single', 'online:vgc128:sampling:fixed:4']
	assert all(r['verified'] for r in records)
	assert all(len(r['runs']) == 2 for r in records)


def test_bench_without_timed_runs_still_verifies(tmp_path, hcns_file):
	report_path = tmp_path / 'report.json'
	assert main(['bench', str(hcns_file), '--repeat', '0', '--threads', '1', '--report-out', str(report_path)]) == ExitCode.OK
	records = json.loads(report_path.read_text())
	assert len(records) == 20
	assert all(r['runs'] == [] for r in records)


def test_bench_rejects_bad_label(hcns_file):
	assert main(['bench', str(hcns_file), '--configs', 'sideways:hbs']) == ExitCode.CONFIG


def test_info(hcns_file, capsys):
	assert main(['info', str(hcns_file)]) == ExitCode.OK
	out = capsys.readouterr().out
	assert 'n=6' in out
	assert 'kmax=3' in out
