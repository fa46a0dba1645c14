from dataclasses import dataclass

# First chunk size; chunk i holds CHUNK_BASE * 2**i slots
CHUNK_BASE = 256
LOAD_FACTOR = 0.5
EMPTY_SLOT = -1


class BagError(Exception):
	"""Base class for all hash bag errors"""


class BagOverflowError(BagError):
	"""Error raised when a bag receives more live elements than its capacity"""


@dataclass(frozen=True)
class ChunkLayout:
	"""Geometric chunk layout of a bag: starts/sizes into the flat slot space"""

	starts: tuple[int, ...]
	sizes: tuple[int, ...]
	thresholds: tuple[int, ...]

	@classmethod
	def for_capacity(cls, capacity: int) -> 'ChunkLayout':
		starts, sizes, thresholds = [], [], []
		start, size, covered = 0, CHUNK_BASE, 0
		while True:
			threshold = int(size * LOAD_FACTOR)
			starts.append(start)
			sizes.append(size)
			thresholds.append(threshold)
			covered += threshold
			if covered >= capacity:
				break
			start += size
			size *= 2
		return cls(tuple(starts), tuple(sizes), tuple(thresholds))

	@property
	def chunk_count(self) -> int:
		return len(self.sizes)

	def slots_through(self, chunk: int) -> int:
		"""Slots in chunks 0..chunk"""
		return self.starts[chunk] + self.sizes[chunk]
