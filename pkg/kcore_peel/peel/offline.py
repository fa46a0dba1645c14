import logging
from collections import Counter
from typing import Optional, Sequence

from kcore_peel.peel.pool import WorkerPool
from kcore_peel.peel.views import PeelState

logger = logging.getLogger(__name__)


def _merge(parts: list[Counter]) -> dict[int, int]:
	total: Counter = Counter()
	for part in parts:
		total.update(part)
	return dict(total)


def histogram(vertices: Sequence[int], pool: Optional[WorkerPool] = None) -> dict[int, int]:
	"""Multiplicity of every distinct id; per-chunk counts are merged by key"""
	if pool is None:
		return dict(Counter(vertices))
	return _merge(pool.map_chunks(vertices, Counter))


def peel_offline(state: PeelState, frontier: Sequence[int], k: int, pool: Optional[WorkerPool] = None) -> list[int]:
	"""
	Batch-synchronous subround.

	Counts how often each vertex appears in the frontier's neighbor lists, then applies
	one subtraction per vertex whose d̃ is still above k. Vertices that drop to k or
	below form the next frontier. Every v in frontier must already have coreness k.
	"""
	pool = pool or WorkerPool(1)
	degrees = state.degrees

	def count_neighbors(chunk: Sequence[int]) -> Counter:
		counts: Counter = Counter()
		for v in chunk:
			counts.update(state.neighbors(v))
		return counts

	pairs = list(_merge(pool.map_chunks(frontier, count_neighbors)).items())

	def apply(chunk: Sequence[tuple[int, int]]) -> list[int]:
		claimed = []
		decrements = 0
		for u, f in chunk:
			if degrees.load(u) <= k:
				continue
			pre = degrees.fetch_add(u, -f)
			decrements += f
			new = pre - f
			if new <= k:
				if state.claim(u, k):
					claimed.append(u)
			else:
				state.notify(u, pre, new, k)
		state.counters.add(decrements=decrements)
		return claimed

	next_frontier = [u for part in pool.map_chunks(pairs, apply) for u in part]
	logger.debug(f'offline subround k={k}: |F|={len(frontier)} -> |F_next|={len(next_frontier)}')
	return next_frontier
