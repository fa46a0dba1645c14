import pytest

from kcore_peel.graph.generators import gen_ba, gen_cube, gen_er, gen_grid, gen_hcns
from kcore_peel.graph.views import GeneratorParameterError
from kcore_peel.oracle.service import bz_coreness


def test_gen_grid():
	cycle = gen_grid(2, 2)
	assert cycle.degrees().tolist() == [2, 2, 2, 2]

	path = gen_grid(1, 5)
	assert path.degrees().tolist() == [1, 2, 2, 2, 1]

	grid = gen_grid(100, 100)
	assert grid.n == 10_000
	assert bz_coreness(grid).kmax == 2


def test_gen_cube():
	assert gen_cube(2, 2, 2).degrees().tolist() == [3] * 8
	assert gen_cube(1, 1, 4).degrees().tolist() == [1, 2, 2, 1]
	assert bz_coreness(gen_cube(8, 8, 8)).kmax == 3


def test_gen_hcns_profile():
	graph = gen_hcns(3, seed=5)
	assert graph.n == 6
	assert sorted(bz_coreness(graph).tolist()) == [1, 2, 3, 3, 3, 3]

	edge = gen_hcns(1, seed=5)
	assert edge.n == 2
	assert bz_coreness(edge).tolist() == [1, 1]


def test_gen_hcns_large_profile():
	kmax = 100
	profile = bz_coreness(gen_hcns(kmax, seed=2)).profile()
	assert profile[kmax] == kmax + 1
	assert all(profile[i] == 1 for i in range(1, kmax))


def test_gen_hcns_rejects_kmax_zero():
	with pytest.raises(GeneratorParameterError):
		gen_hcns(0)


def test_gen_ba():
	graph = gen_ba(5, 2, seed=7)
	assert graph.m == 7
	assert graph.m2 == 14

	assert gen_ba(3, 2, seed=7).degrees().tolist() == [2, 2, 2]
	assert gen_ba(500, 3, seed=11) == gen_ba(500, 3, seed=11)


def test_gen_ba_minimum_degree_is_attach_degree():
	graph = gen_ba(2000, 4, seed=3)
	assert graph.degrees().min() >= 4
	assert graph.dmax > 40


def test_gen_ba_rejects_small_n():
	with pytest.raises(GeneratorParameterError):
		gen_ba(2, 2)


def test_gen_er():
	graph = gen_er(200, 4.0, seed=1)
	assert graph.n == 200
	assert graph.average_degree <= 4.0
	assert gen_er(200, 4.0, seed=1) == graph
	assert gen_er(0, 4.0).n == 0

	with pytest.raises(GeneratorParameterError):
		gen_er(-1, 1.0)
