import logging
import threading

from kcore_peel.bag.views import EMPTY_SLOT, BagOverflowError, ChunkLayout
from kcore_peel.utils import mix64

logger = logging.getLogger(__name__)

_SLOT_LOCK_STRIPES = 64


class HashBag:
	"""
	Concurrent multiset of non-negative integers with a chunked geometric layout.

	Chunks have sizes 256, 512, 1024, ... Inserts hash into the active chunk and probe
	linearly; once the active chunk's occupancy counter reaches half its size, later inserts
	go to the next chunk. extract_all scans only chunks up to the active one, so its cost is
	proportional to what was inserted.

	insert may be called from any number of threads at once. extract_all needs exclusive
	access: callers alternate insert phases and extract phases.
	"""

	def __init__(self, capacity: int, seed: int = 0):
		if capacity < 0:
			raise ValueError(f'capacity must be non-negative, got {capacity}')
		self.capacity = capacity
		self.seed = seed
		self.layout = ChunkLayout.for_capacity(max(capacity, 1))
		self._chunks: list[list[int] | None] = [None] * self.layout.chunk_count
		self._occupancy = [0] * self.layout.chunk_count
		self._active = 0
		self._live = 0
		self._counter_lock = threading.Lock()
		self._slot_locks = [threading.Lock() for _ in range(_SLOT_LOCK_STRIPES)]
		self.last_scanned = 0

	def __len__(self) -> int:
		return self._live

	def is_empty(self) -> bool:
		return self._live == 0

	@property
	def active_chunk(self) -> int:
		return self._active

	def insert(self, x: int) -> None:
		with self._counter_lock:
			if self._live >= self.capacity:
				raise BagOverflowError(f'bag of capacity {self.capacity} is full')
			self._live += 1
			chunk = self._active
			self._occupancy[chunk] += 1
			if self._occupancy[chunk] >= self.layout.thresholds[chunk] and chunk + 1 < self.layout.chunk_count:
				self._active = chunk + 1
			slots = self._chunks[chunk]
			if slots is None:
				slots = self._chunks[chunk] = [EMPTY_SLOT] * self.layout.sizes[chunk]

		# chunk sizes are powers of two and occupancy stays at or below half, so probing terminates
		size_mask = len(slots) - 1
		i = mix64(self.seed ^ x) & size_mask
		while True:
			with self._slot_locks[i & (_SLOT_LOCK_STRIPES - 1)]:
				if slots[i] == EMPTY_SLOT:
					slots[i] = x
					return
			i = (i + 1) & size_mask

	def extract_all(self) -> list[int]:
		"""Return every element inserted since the last extraction and reset the bag"""
		with self._counter_lock:
			out: list[int] = []
			scanned = 0
			for chunk in range(self._active + 1):
				scanned += self.layout.sizes[chunk]
				slots = self._chunks[chunk]
				if slots is None or self._occupancy[chunk] == 0:
					continue
				out.extend(x for x in slots if x != EMPTY_SLOT)
				self._chunks[chunk] = [EMPTY_SLOT] * self.layout.sizes[chunk]
				self._occupancy[chunk] = 0
			self._active = 0
			self._live = 0
			self.last_scanned = scanned
		return out
