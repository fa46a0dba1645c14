from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Protocol

import numpy as np

from kcore_peel.graph.views import CsrGraph
from kcore_peel.oracle.views import CorenessArray

UNASSIGNED = -1
_LOCK_STRIPES = 256


class PeelError(Exception):
	"""Base class for all peeling errors"""


class FrozenDegreeWriteError(PeelError):
	"""Error raised when the induced degree of a vertex in sample mode is written"""


class InducedDegreeMismatchError(PeelError):
	"""Error raised when a live vertex's induced degree disagrees with its unpeeled neighbor count"""


class AtomicIntArray:
	"""
	Flat integer array whose read-modify-write operations are atomic per entry.

	Entries share a fixed set of striped locks. Every atomic update is also counted
	per entry in `updates`, which is how contention on hot vertices is measured.
	"""

	def __init__(self, values: Iterable[int] | np.ndarray):
		self._values: list[int] = np.asarray(values, dtype=np.int64).tolist()
		self._locks = [threading.Lock() for _ in range(_LOCK_STRIPES)]
		self.updates: list[int] = [0] * len(self._values)

	@classmethod
	def filled(cls, n: int, value: int) -> 'AtomicIntArray':
		return cls(np.full(n, value, dtype=np.int64))

	def __len__(self) -> int:
		return len(self._values)

	def _lock(self, i: int) -> threading.Lock:
		return self._locks[i & (_LOCK_STRIPES - 1)]

	def _check_write(self, i: int) -> None:
		pass

	def load(self, i: int) -> int:
		return self._values[i]

	def store(self, i: int, value: int) -> None:
		self._check_write(i)
		with self._lock(i):
			self._values[i] = value

	def fetch_add(self, i: int, delta: int) -> int:
		"""Add delta to entry i and return the value it held before"""
		self._check_write(i)
		with self._lock(i):
			pre = self._values[i]
			self._values[i] = pre + delta
			self.updates[i] += 1
		return pre

	def add_fetch(self, i: int, delta: int) -> int:
		return self.fetch_add(i, delta) + delta

	def add_fetch_below(self, i: int, limit: int) -> Optional[int]:
		"""Increment entry i only while it is below limit; the new value, or None when saturated"""
		self._check_write(i)
		with self._lock(i):
			value = self._values[i]
			if value >= limit:
				return None
			self._values[i] = value + 1
			self.updates[i] += 1
		return value + 1

	def compare_and_swap(self, i: int, expected: int, value: int) -> bool:
		self._check_write(i)
		with self._lock(i):
			if self._values[i] != expected:
				return False
			self._values[i] = value
			self.updates[i] += 1
		return True

	def mark_once(self, i: int, value: int) -> bool:
		"""Set an unmarked entry to value; True for exactly one caller per entry"""
		return self.compare_and_swap(i, UNASSIGNED, value)

	def snapshot(self) -> np.ndarray:
		return np.array(self._values, dtype=np.int64)

	def tolist(self) -> list[int]:
		return list(self._values)


class InducedDegrees(AtomicIntArray):
	"""
	Induced degree d̃[v] of every vertex: its degree among vertices not yet peeled.

	Starts at the graph degree and only decreases, except when a sampled vertex is
	recounted. With a watch predicate installed, writing an entry the predicate
	selects raises FrozenDegreeWriteError.
	"""

	def __init__(self, values: Iterable[int] | np.ndarray):
		super().__init__(values)
		self.watch: Optional[Callable[[int], bool]] = None

	def _check_write(self, i: int) -> None:
		if self.watch is not None and self.watch(i):
			raise FrozenDegreeWriteError(f'induced degree of vertex {i} written while it is in sample mode')


class DegreeListener(Protocol):
	"""Receives induced-degree changes of live vertices that stay above the round k"""

	def on_degree_change(self, v: int, old: int, new: int, k: int) -> None: ...


@dataclass
class PeelCounters:
	decrements: int = 0
	samples: int = 0
	_lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

	def add(self, decrements: int = 0, samples: int = 0) -> None:
		with self._lock:
			self.decrements += decrements
			self.samples += samples


class PeelState:
	"""
	Flat per-vertex state of one decomposition run.

	coreness[v] is UNASSIGNED until v is peeled, then the round that peeled it, so it
	doubles as the peeled epoch. marks[v] records the round in which v was claimed for
	a frontier; a vertex is claimed at most once per run.
	"""

	def __init__(self, graph: CsrGraph):
		self.graph = graph
		self.offsets, self.targets = graph.adjacency
		self.degrees = InducedDegrees(graph.degrees())
		self.coreness: list[int] = [UNASSIGNED] * graph.n
		self.marks = AtomicIntArray.filled(graph.n, UNASSIGNED)
		self.counters = PeelCounters()
		self.listener: Optional[DegreeListener] = None

	@property
	def n(self) -> int:
		return self.graph.n

	def neighbors(self, v: int) -> list[int]:
		return self.targets[self.offsets[v] : self.offsets[v + 1]]

	def is_live(self, v: int) -> bool:
		return self.coreness[v] == UNASSIGNED

	def is_claimed(self, v: int) -> bool:
		return self.marks.load(v) != UNASSIGNED

	def claim(self, v: int, k: int) -> bool:
		return self.marks.mark_once(v, k)

	def assign(self, frontier: Iterable[int], k: int) -> None:
		for v in frontier:
			self.coreness[v] = k

	def live_vertices(self) -> list[int]:
		return [v for v, kappa in enumerate(self.coreness) if kappa == UNASSIGNED]

	def notify(self, v: int, old: int, new: int, k: int) -> None:
		if self.listener is not None:
			self.listener.on_degree_change(v, old, new, k)

	def check_induced_degrees(self, skip: Optional[Callable[[int], bool]] = None) -> None:
		"""Every live vertex's d̃ must equal its number of unpeeled neighbors"""
		coreness = self.coreness
		for v in range(self.n):
			if coreness[v] != UNASSIGNED or (skip is not None and skip(v)):
				continue
			expected = sum(1 for u in self.neighbors(v) if coreness[u] == UNASSIGNED)
			actual = self.degrees.load(v)
			if actual != expected:
				raise InducedDegreeMismatchError(f'vertex {v}: induced degree {actual}, unpeeled neighbors {expected}')

	def coreness_array(self) -> CorenessArray:
		return CorenessArray(np.array(self.coreness, dtype=np.int64))
