from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Callable, Optional, Sequence

from kcore_peel.bag.service import HashBag
from kcore_peel.peel.pool import WorkerPool
from kcore_peel.peel.views import PeelState

if TYPE_CHECKING:
	from kcore_peel.sampler.views import SamplerTable

logger = logging.getLogger(__name__)

# Local queue capacity used when VGC is on and no other value is configured
DEFAULT_VGC_CAPACITY = 128


class OnlineSubround:
	"""
	One asynchronous peeling subround at round k.

	Every neighbor of a processed vertex gets an atomic decrement; the single decrement
	whose pre-value is k+1 claims the neighbor. Claims go to the claimant's local queue
	while it has room and to the next-frontier bag otherwise. Neighbors in sample mode
	take a coin instead of a decrement and land in the resample bag when their sample
	count reaches mu.
	"""

	def __init__(self, state: PeelState, k: int, vgc_cap: int = 0, sampler: Optional['SamplerTable'] = None):
		self.state = state
		self.k = k
		self.vgc_cap = vgc_cap
		self.sampler = sampler
		self.next_frontier = HashBag(state.n, seed=k)
		self.resample = HashBag(state.n, seed=k ^ 0x5BD1E995) if sampler is not None else None

	def process(self, v: int, enqueue: Callable[[int], None]) -> tuple[int, int]:
		state, k, sampler = self.state, self.k, self.sampler
		degrees = state.degrees
		decrements = samples = 0
		for u in state.neighbors(v):
			if sampler is not None and sampler.mode[u]:
				if sampler.toss(u, v):
					post = sampler.cnt.add_fetch_below(u, sampler.mu)
					if post is not None:
						samples += 1
						if post == sampler.mu:
							self.resample.insert(u)
				continue
			pre = degrees.fetch_add(u, -1)
			decrements += 1
			if pre == k + 1:
				if state.claim(u, k):
					enqueue(u)
			elif pre > k + 1:
				state.notify(u, pre, pre - 1, k)
		return decrements, samples

	def local_search(self, v: int, cap: int) -> tuple[int, int]:
		"""Process v, then drain a task-private FIFO of at most cap claimed vertices"""
		queue = [0] * cap
		head = tail = 0

		def enqueue(u: int) -> None:
			nonlocal tail
			if tail < cap:
				queue[tail] = u
				tail += 1
			else:
				self.next_frontier.insert(u)

		decrements, samples = self.process(v, enqueue)
		while head < tail:
			u = queue[head]
			head += 1
			self.state.coreness[u] = self.k
			d, s = self.process(u, enqueue)
			decrements += d
			samples += s
		return decrements, samples

	def run_chunk(self, chunk: Sequence[int]) -> None:
		decrements = samples = 0
		for v in chunk:
			if self.vgc_cap > 0:
				d, s = self.local_search(v, self.vgc_cap)
			else:
				d, s = self.process(v, self.next_frontier.insert)
			decrements += d
			samples += s
		self.state.counters.add(decrements=decrements, samples=samples)

	def run(self, frontier: Sequence[int], pool: WorkerPool) -> tuple[list[int], list[int]]:
		pool.map_chunks(frontier, self.run_chunk, min_chunk=16)
		next_frontier = self.next_frontier.extract_all()
		resample = self.resample.extract_all() if self.resample is not None else []
		logger.debug(f'online subround k={self.k}: |F|={len(frontier)} -> |F_next|={len(next_frontier)}, |C|={len(resample)}')
		return next_frontier, resample


def peel_online(
	state: PeelState,
	frontier: Sequence[int],
	k: int,
	vgc_cap: int = 0,
	pool: Optional[WorkerPool] = None,
) -> list[int]:
	next_frontier, _ = OnlineSubround(state, k, vgc_cap).run(frontier, pool or WorkerPool(1))
	return next_frontier


def local_search(state: PeelState, v: int, k: int, cap: int, next_frontier: HashBag) -> None:
	"""Local search from a vertex claimed for round k; overflowing claims go to next_frontier"""
	if cap < 1:
		raise ValueError(f'local queue capacity must be at least 1, got {cap}')
	subround = OnlineSubround(state, k, cap)
	subround.next_frontier = next_frontier
	decrements, samples = subround.local_search(v, cap)
	state.counters.add(decrements=decrements, samples=samples)
