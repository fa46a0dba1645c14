import logging

import pytest
from pydantic import ValidationError

from kcore_peel.bucketing.views import BucketKind
from kcore_peel.engine.service import PeelEngine, decompose, kcore_subgraph
from kcore_peel.engine.views import PeelConfig, PeelStrategy
from kcore_peel.graph.generators import gen_ba, gen_er, gen_grid, gen_hcns
from kcore_peel.oracle.service import bz_coreness
from kcore_peel.sampler.views import SamplingParams


def never_heads(u: int, v: int, generation: int, rate: float) -> bool:
	return False


GRAPHS = {
	'hcns': gen_hcns(25, seed=3),
	'er': gen_er(300, 6.0, seed=5),
	'grid': gen_grid(15, 15),
}


def test_decompose_k4(k4):
	coreness, stats = decompose(k4, PeelConfig(threads=1))
	assert coreness.tolist() == [3, 3, 3, 3]
	assert stats.kmax == 3
	assert stats.rounds == 4


def test_decompose_empty_and_isolated(graph_of):
	coreness, stats = decompose(graph_of(0, []), PeelConfig(threads=1))
	assert coreness.tolist() == []
	assert stats.rounds == 0

	coreness, _ = decompose(graph_of(3, []), PeelConfig(threads=1))
	assert coreness.tolist() == [0, 0, 0]


@pytest.mark.parametrize('name', sorted(GRAPHS))
@pytest.mark.parametrize('config', list(PeelConfig.matrix(threads=2)), ids=lambda c: c.label)
def test_every_config_matches_reference(name, config):
	graph = GRAPHS[name]
	coreness, stats = PeelEngine(config).decompose(graph)
	assert coreness == bz_coreness(graph)

	assert stats.sum_active == sum(1 + kappa for kappa in coreness.tolist())
	assert stats.sum_active <= graph.n + graph.m2
	if config.sampling is None:
		assert stats.decrements <= graph.m2


@pytest.mark.parametrize('threads', [1, 2, 8])
def test_thread_count_does_not_change_result(threads):
	graph = gen_ba(1500, 8, seed=4)
	coreness, _ = decompose(graph, PeelConfig(threads=threads))
	assert coreness == bz_coreness(graph)


@pytest.mark.parametrize('graph', [gen_grid(30, 30), gen_hcns(40, seed=1)], ids=['grid', 'hcns'])
def test_local_search_never_adds_subrounds(graph):
	_, plain = decompose(graph, PeelConfig(vgc=0, threads=1))
	_, local = decompose(graph, PeelConfig(vgc=128, threads=1))
	assert local.subrounds <= plain.subrounds


def test_grid_local_search_collapses_subrounds():
	graph = gen_grid(1, 400)
	_, plain = decompose(graph, PeelConfig(vgc=0, threads=1))
	_, local = decompose(graph, PeelConfig(vgc=128, threads=1))
	assert local.subrounds < plain.subrounds


def test_sampling_is_exact_on_hub_graph():
	graph = gen_ba(5000, 20, seed=1)
	config = PeelConfig(sampling=SamplingParams(seed=3), threads=4)
	coreness, stats = decompose(graph, config)
	assert coreness == bz_coreness(graph)
	assert stats.samples > 0


def test_debug_checks_pass_with_sampling():
	graph = gen_ba(2000, 12, seed=6)
	config = PeelConfig(sampling=SamplingParams(), debug_checks=True, threads=2)
	coreness, _ = decompose(graph, config)
	assert coreness == bz_coreness(graph)


def test_debug_checks_pass_offline():
	graph = GRAPHS['er']
	coreness, _ = decompose(graph, PeelConfig(peel=PeelStrategy.OFFLINE, debug_checks=True, threads=2))
	assert coreness == bz_coreness(graph)


def test_sampling_failure_restarts_until_exact(graph_of, caplog):
	logging.getLogger('kcore_peel').addHandler(caplog.handler)
	leaves = 400
	graph = graph_of(leaves + 1, [(0, i) for i in range(1, leaves + 1)])
	engine = PeelEngine(PeelConfig(sampling=SamplingParams(), threads=1), coin=never_heads)

	coreness, stats = engine.decompose(graph)

	assert coreness.tolist() == [1] * (leaves + 1)
	assert stats.restarts == 3
	logging.getLogger('kcore_peel').removeHandler(caplog.handler)
	assert len({id(r) for r in caplog.records if 'restarting' in r.getMessage()}) == 3


def test_kcore_subgraph(hcns3, star5):
	assert kcore_subgraph(hcns3, 3, PeelConfig(threads=1)) == [0, 1, 2, 3]
	assert kcore_subgraph(hcns3, 4, PeelConfig(threads=1)) == []
	assert kcore_subgraph(hcns3, 0) == list(range(hcns3.n))
	assert kcore_subgraph(star5, 1) == list(range(6))
	assert kcore_subgraph(star5, 2, PeelConfig(peel=PeelStrategy.OFFLINE)) == []

	with pytest.raises(ValueError):
		kcore_subgraph(star5, -1)


def test_kcore_subgraph_matches_coreness():
	graph = GRAPHS['er']
	coreness = bz_coreness(graph)
	for kprime in range(coreness.kmax + 2):
		assert kcore_subgraph(graph, kprime, PeelConfig(threads=2)) == coreness.core(kprime).tolist()


def test_config_defaults():
	assert PeelConfig().vgc == 128
	assert PeelConfig(peel=PeelStrategy.OFFLINE).vgc == 0
	assert PeelConfig().bucketing.kind == BucketKind.AUTO


@pytest.mark.parametrize(
	'fields',
	[
		{'peel': 'offline', 'sampling': SamplingParams()},
		{'peel': 'offline', 'vgc': 16},
		{'threads': 0},
		{'vgc': -1},
	],
)
def test_config_rejects_invalid_combinations(fields):
	with pytest.raises(ValidationError):
		PeelConfig(**fields)


def test_config_labels():
	config = PeelConfig.from_label('online:vgc0:sampling:fixed:16')
	assert config.vgc == 0
	assert config.sampling is not None
	assert config.bucketing.b == 16
	assert config.label == 'online:vgc0:sampling:fixed:16'

	assert PeelConfig.from_label('offline:hbs').label == 'offline:vgc0:hbs'
	assert PeelConfig.from_label('online').label == 'online:vgc128:auto'
	assert PeelConfig.from_label('online:auto:32', threads=3).threads == 3


def test_config_matrix():
	configs = list(PeelConfig.matrix(threads=1))
	assert len(configs) == 20
	assert len({c.label for c in configs}) == 20
	assert all(c.sampling is None for c in configs if c.peel == PeelStrategy.OFFLINE)


def test_stats_json(k4):
	_, stats = decompose(k4, PeelConfig(threads=1, record_frontiers=True))
	assert stats.frontiers == [[], [], [], [0, 1, 2, 3]]
	payload = stats.to_json_dict()
	assert {'n', 'm2', 'kmax', 'rounds', 'subrounds', 'decrements', 'samples', 'restarts', 'sum_active', 'max_hot_updates', 'wall_ms', 'config'} <= set(payload)
	assert 'frontiers' not in payload
	assert 'bucket_insertions' not in payload
	assert payload['config']['label'] == stats.config['label']
