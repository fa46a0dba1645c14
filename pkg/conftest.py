import os
import sys

import pytest

# Get the absolute path to the project root
project_root = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, project_root)

from kcore_peel.graph.generators import gen_hcns
from kcore_peel.graph.service import from_edges
from kcore_peel.graph.views import CsrGraph, EdgeList
from kcore_peel.logging_config import setup_logging

setup_logging()


def _graph(n: int, edges: list[tuple[int, int]]) -> CsrGraph:
	return from_edges(EdgeList(n=n, edges=edges))


@pytest.fixture
def graph_of():
	"""Factory: graph_of(n, edges) builds a CsrGraph"""
	return _graph


@pytest.fixture
def k4() -> CsrGraph:
	return _graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


@pytest.fixture
def star5() -> CsrGraph:
	"""Center 0 with leaves 1..5"""
	return _graph(6, [(0, i) for i in range(1, 6)])


@pytest.fixture
def triangle() -> CsrGraph:
	return _graph(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def p5() -> CsrGraph:
	"""Path v1..v5 as ids 0..4"""
	return _graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])


@pytest.fixture
def hcns3() -> CsrGraph:
	return gen_hcns(3, seed=1)
