import logging
import sys
from abc import ABC, abstractmethod
from bisect import bisect_left
from typing import Optional, Sequence

from kcore_peel.bag.service import HashBag
from kcore_peel.bucketing.views import SINGLE_KEY_BUCKETS, BucketContractError, BucketKind, BucketStrategy
from kcore_peel.peel.pool import WorkerPool
from kcore_peel.peel.views import AtomicIntArray, PeelState

logger = logging.getLogger(__name__)

UNBOUNDED = sys.maxsize


def hbs_index(d: int, k: int) -> int:
	"""Bucket of degree d for anchor k: single keys k..k+7, then [k+8, k+15], [k+16, k+31], ..."""
	if d < k:
		raise BucketContractError(f'degree {d} is below the anchor {k}')
	delta = d - k
	if delta < SINGLE_KEY_BUCKETS:
		return delta
	return SINGLE_KEY_BUCKETS + (delta // SINGLE_KEY_BUCKETS).bit_length() - 1


def relative_upper(i: int) -> int:
	"""Largest offset from the anchor that bucket i holds"""
	if i < SINGLE_KEY_BUCKETS:
		return i
	return SINGLE_KEY_BUCKETS * 2 ** (i - SINGLE_KEY_BUCKETS + 1) - 1


def hbs_bucket_count(dmax: int) -> int:
	"""Enough buckets for hbs_index(dmax, 0); the last one is unbounded"""
	blocks = max(1, -(-(dmax + 1) // SINGLE_KEY_BUCKETS))
	return SINGLE_KEY_BUCKETS + max(1, (blocks - 1).bit_length() + 1)


class FrontierGenerator(ABC):
	"""Produces each round's frontier; receives induced-degree changes of live vertices"""

	def __init__(self, state: PeelState, pool: Optional[WorkerPool] = None):
		self.state = state
		self.pool = pool or WorkerPool(1)

	@abstractmethod
	def next_frontier(self, active: Sequence[int], k: int) -> list[int]: ...

	def on_degree_change(self, v: int, old: int, new: int, k: int) -> None:
		pass

	def bucket_insertions(self) -> Optional[list[int]]:
		return None

	def _claim_live(self, candidates: Sequence[int], k: int) -> list[int]:
		state = self.state
		return [v for v in candidates if state.is_live(v) and state.degrees.load(v) <= k and state.claim(v, k)]


class SingleFrontier(FrontierGenerator):
	"""Packs {v in A : d̃[v] <= k} every round"""

	def next_frontier(self, active: Sequence[int], k: int) -> list[int]:
		parts = self.pool.map_chunks(active, lambda chunk: self._claim_live(chunk, k), min_chunk=1024)
		return [v for part in parts for v in part]


class HierBuckets(FrontierGenerator):
	"""
	Hierarchical bucketing structure.

	Buckets hold absolute key ranges given by a non-decreasing upper bound per bucket, the
	last one unbounded. At build time the ranges are single keys k..k+7 followed by
	ranges of doubling width. Every live vertex has a copy in the bucket whose range holds
	its current d̃; older copies stay behind. Extraction always drains the first non-empty
	bucket: copies of peeled or claimed vertices are dropped, and a live copy whose d̃ maps
	elsewhere is redistributed to that bucket. When the first non-empty bucket's range
	straddles the round, the empty buckets below it are re-anchored at the round to split
	that range, and its live entries are reinserted.
	"""

	def __init__(self, state: PeelState, active: Sequence[int], k: int, pool: Optional[WorkerPool] = None, seed: int = 0):
		super().__init__(state, pool)
		self.count = hbs_bucket_count(state.graph.dmax)
		self.bags = [HashBag(state.n, seed=seed + i) for i in range(self.count)]
		self.upper = [k + relative_upper(i) for i in range(self.count - 1)] + [UNBOUNDED]
		self.insertions = AtomicIntArray.filled(state.n, 0)
		self.build(active, k)

	def build(self, active: Sequence[int], k: int) -> None:
		state = self.state

		def insert_chunk(chunk: Sequence[int]) -> None:
			for v in chunk:
				if state.is_live(v) and not state.is_claimed(v):
					self._insert(v, self.locate(state.degrees.load(v)))

		self.pool.map_chunks(active, insert_chunk, min_chunk=1024)
		logger.debug(f'built {self.count} buckets over {len(active)} vertices at k={k}')

	def locate(self, d: int) -> int:
		return min(bisect_left(self.upper, d), self.count - 1)

	def lower(self, j: int) -> int:
		return self.upper[0] if j == 0 else self.upper[j - 1] + 1

	def _insert(self, v: int, j: int) -> None:
		self.bags[j].insert(v)
		self.insertions.fetch_add(v, 1)

	def on_degree_change(self, v: int, old: int, new: int, k: int) -> None:
		if new <= k:
			return
		j = self.locate(new)
		if j != self.locate(old):
			self._insert(v, j)

	def _first_nonempty(self) -> Optional[int]:
		for j, bag in enumerate(self.bags):
			if not bag.is_empty():
				return j
		return None

	def _extract_pending(self, j: int) -> list[int]:
		"""
		Drain bucket j, keeping one entry per live, unclaimed vertex.

		A d̃ above the bucket's range came from a recount that already placed a newer copy higher up.
		"""
		state = self.state
		hi = self.upper[j]
		seen: set[int] = set()
		pending = []
		for v in self.bags[j].extract_all():
			if v in seen or not state.is_live(v) or state.is_claimed(v):
				continue
			seen.add(v)
			if state.degrees.load(v) <= hi:
				pending.append(v)
		return pending

	def next_frontier(self, active: Sequence[int], k: int) -> list[int]:
		state = self.state
		frontier: list[int] = []
		while True:
			j = self._first_nonempty()
			if j is None:
				break
			pending = self._extract_pending(j)

			if self.lower(j) > k:
				# in-range entries go back uncounted; one whose d̃ fell below the range missed its re-bucketing
				stale = []
				for v in pending:
					if self.locate(state.degrees.load(v)) == j:
						self.bags[j].insert(v)
					else:
						stale.append(v)
				if not stale:
					break
				for v in stale:
					self._insert(v, self.locate(state.degrees.load(v)))
				continue

			hi = self.upper[j]
			if hi <= k:
				for v in pending:
					target = self.locate(state.degrees.load(v))
					if target != j:
						self._insert(v, target)
					elif state.claim(v, k):
						frontier.append(v)
				continue
			anchor = max(self.lower(j), k)
			for i in range(j):
				self.upper[i] = min(anchor + relative_upper(i), hi)
			for v in pending:
				self._insert(v, self.locate(state.degrees.load(v)))
		return frontier

	def bucket_insertions(self) -> Optional[list[int]]:
		return self.insertions.tolist()


class FixedBuckets(FrontierGenerator):
	"""
	Julienne-style baseline: b single-key buckets for the window [k0, k0 + b).

	Rebuilt from the active set every b rounds; vertices above the window wait in the
	active set until a decrement moves them into it.
	"""

	def __init__(self, state: PeelState, b: int, pool: Optional[WorkerPool] = None, seed: int = 0):
		super().__init__(state, pool)
		self.b = b
		self.bags = [HashBag(state.n, seed=seed + i) for i in range(b)]
		self.base: Optional[int] = None

	def _rebuild(self, active: Sequence[int], k: int) -> None:
		for bag in self.bags:
			bag.extract_all()
		self.base = k
		state = self.state

		def insert_chunk(chunk: Sequence[int]) -> None:
			for v in chunk:
				d = state.degrees.load(v)
				if state.is_live(v) and d < k + self.b:
					self.bags[max(d, k) - k].insert(v)

		self.pool.map_chunks(active, insert_chunk, min_chunk=1024)

	def on_degree_change(self, v: int, old: int, new: int, k: int) -> None:
		if self.base is not None and new > k and self.base <= new < self.base + self.b:
			self.bags[new - self.base].insert(v)

	def next_frontier(self, active: Sequence[int], k: int) -> list[int]:
		if self.base is None or k >= self.base + self.b:
			self._rebuild(active, k)
		return self._claim_live(self.bags[k - self.base].extract_all(), k)


class AutoFrontier(FrontierGenerator):
	"""Single-bucket packing until round theta, hierarchical buckets from then on"""

	def __init__(self, state: PeelState, theta: int, pool: Optional[WorkerPool] = None, seed: int = 0):
		super().__init__(state, pool)
		self.theta = theta
		self.seed = seed
		self.single = SingleFrontier(state, pool)
		self.hbs: Optional[HierBuckets] = None
		self.dense = state.graph.average_degree > theta

	def next_frontier(self, active: Sequence[int], k: int) -> list[int]:
		if self.hbs is None and (self.dense or k >= self.theta):
			logger.debug(f'switching to hierarchical buckets at k={k}')
			self.hbs = HierBuckets(self.state, active, k, self.pool, self.seed)
		if self.hbs is not None:
			return self.hbs.next_frontier(active, k)
		return self.single.next_frontier(active, k)

	def on_degree_change(self, v: int, old: int, new: int, k: int) -> None:
		if self.hbs is not None:
			self.hbs.on_degree_change(v, old, new, k)

	def bucket_insertions(self) -> Optional[list[int]]:
		return self.hbs.bucket_insertions() if self.hbs is not None else None


def make_frontier_generator(
	strategy: BucketStrategy, state: PeelState, active: Sequence[int], k: int = 0, pool: Optional[WorkerPool] = None, seed: int = 0
) -> FrontierGenerator:
	if strategy.kind == BucketKind.SINGLE:
		return SingleFrontier(state, pool)
	if strategy.kind == BucketKind.FIXED:
		return FixedBuckets(state, strategy.b, pool, seed)
	if strategy.kind == BucketKind.HBS:
		return HierBuckets(state, active, k, pool, seed)
	return AutoFrontier(state, strategy.theta, pool, seed)


def next_frontier(generator: FrontierGenerator, active: Sequence[int], k: int) -> list[int]:
	"""Claim and return the vertices peeled first in round k"""
	return generator.next_frontier(active, k)
