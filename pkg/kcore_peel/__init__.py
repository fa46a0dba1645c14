from kcore_peel.logging_config import setup_logging

setup_logging()

from kcore_peel.bag.service import HashBag as HashBag
from kcore_peel.bucketing.views import BucketStrategy as BucketStrategy
from kcore_peel.engine.service import PeelEngine as PeelEngine
from kcore_peel.engine.service import decompose as decompose
from kcore_peel.engine.service import kcore_subgraph as kcore_subgraph
from kcore_peel.engine.views import PeelConfig as PeelConfig
from kcore_peel.engine.views import PeelStats as PeelStats
from kcore_peel.graph.service import from_edges as from_edges
from kcore_peel.graph.service import load_graph as load_graph
from kcore_peel.graph.views import CsrGraph as CsrGraph
from kcore_peel.graph.views import EdgeList as EdgeList
from kcore_peel.oracle.service import bz_coreness as bz_coreness
from kcore_peel.oracle.service import verify_coreness as verify_coreness
from kcore_peel.oracle.views import CorenessArray as CorenessArray
from kcore_peel.sampler.views import SamplingParams as SamplingParams

__all__ = [
	'PeelEngine',
	'PeelConfig',
	'PeelStats',
	'SamplingParams',
	'BucketStrategy',
	'CsrGraph',
	'EdgeList',
	'CorenessArray',
	'HashBag',
	'decompose',
	'kcore_subgraph',
	'bz_coreness',
	'verify_coreness',
	'from_edges',
	'load_graph',
]
