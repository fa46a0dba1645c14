from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator

import numpy as np

# Vertex ids are dense 0..n-1 and stored as u64 on disk
MAX_VERTEX_COUNT = 2**63 - 1


class GraphError(Exception):
	"""Base class for all graph errors"""


class InputRangeError(GraphError):
	"""Error raised when an edge endpoint is not below the vertex count"""


class EdgeListParseError(GraphError):
	"""Error raised when a text edge list line cannot be parsed"""

	def __init__(self, line_number: int, message: str):
		self.line_number = line_number
		super().__init__(f'line {line_number}: {message}')


class GraphFormatError(GraphError):
	"""Error raised when a binary graph blob is malformed"""


class CapacityError(GraphError):
	"""Error raised when a generated graph would overflow the vertex id space"""


class GeneratorParameterError(GraphError):
	"""Error raised when a generator gets parameters outside its domain"""


@dataclass(frozen=True, eq=False)
class EdgeList:
	"""
	Raw edges as read from an input; may hold duplicates, self-loops and one-directional entries.

	edges is an (m, 2) int64 array.
	"""

	n: int
	edges: np.ndarray = field(default_factory=lambda: np.empty((0, 2), dtype=np.int64))

	def __post_init__(self):
		edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
		object.__setattr__(self, 'edges', edges)

	def __len__(self) -> int:
		return len(self.edges)

	def pairs(self) -> list[tuple[int, int]]:
		return [(int(u), int(v)) for u, v in self.edges]


@dataclass(frozen=True, eq=False)
class CsrGraph:
	"""
	Immutable simple symmetric graph in compressed adjacency form.

	offsets has n+1 entries, targets has m2 = 2|E| entries; the neighbors of v are
	targets[offsets[v]:offsets[v+1]], sorted ascending. Both arrays are read-only.
	"""

	n: int
	offsets: np.ndarray
	targets: np.ndarray

	def __post_init__(self):
		offsets = np.ascontiguousarray(self.offsets, dtype=np.int64)
		targets = np.ascontiguousarray(self.targets, dtype=np.int64)
		offsets.flags.writeable = False
		targets.flags.writeable = False
		object.__setattr__(self, 'offsets', offsets)
		object.__setattr__(self, 'targets', targets)

	@property
	def m2(self) -> int:
		return int(self.targets.shape[0])

	@property
	def m(self) -> int:
		return self.m2 // 2

	@cached_property
	def _degrees(self) -> np.ndarray:
		degrees = np.diff(self.offsets)
		degrees.flags.writeable = False
		return degrees

	def degrees(self) -> np.ndarray:
		return self._degrees

	def degree(self, v: int) -> int:
		return int(self.offsets[v + 1] - self.offsets[v])

	@cached_property
	def dmax(self) -> int:
		return int(self._degrees.max()) if self.n > 0 else 0

	@property
	def average_degree(self) -> float:
		return self.m2 / self.n if self.n > 0 else 0.0

	def neighbors(self, v: int) -> np.ndarray:
		return self.targets[self.offsets[v] : self.offsets[v + 1]]

	def edges(self) -> Iterator[tuple[int, int]]:
		"""Undirected edges as (u, v) with u < v, in adjacency order"""
		sources = np.repeat(np.arange(self.n, dtype=np.int64), self._degrees)
		keep = sources < self.targets
		for u, v in zip(sources[keep].tolist(), self.targets[keep].tolist()):
			yield u, v

	@cached_property
	def adjacency(self) -> tuple[list[int], list[int]]:
		"""Plain-list copies of offsets and targets for per-vertex loops"""
		return self.offsets.tolist(), self.targets.tolist()

	def check_invariants(self) -> None:
		"""Raise GraphFormatError unless the arrays describe a simple symmetric sorted graph"""
		if self.n < 0:
			raise GraphFormatError(f'negative vertex count {self.n}')
		if self.offsets.shape != (self.n + 1,):
			raise GraphFormatError(f'expected {self.n + 1} offsets, got {self.offsets.shape[0]}')
		if self.offsets[0] != 0:
			raise GraphFormatError(f'offsets[0] = {self.offsets[0]}, expected 0')
		if self.offsets[self.n] != self.m2:
			raise GraphFormatError(f'offsets[n] = {self.offsets[self.n]} does not match m2 = {self.m2}')
		if np.any(np.diff(self.offsets) < 0):
			raise GraphFormatError('offsets are not non-decreasing')
		if self.m2 == 0:
			return
		if self.targets.min() < 0 or self.targets.max() >= self.n:
			raise GraphFormatError('target id out of range')

		sources = np.repeat(np.arange(self.n, dtype=np.int64), self._degrees)
		if np.any(sources == self.targets):
			raise GraphFormatError('self-loop present')

		# sorted and duplicate-free within each list <=> (source, target) strictly increasing
		keys = sources * self.n + self.targets
		if np.any(np.diff(keys) <= 0):
			raise GraphFormatError('adjacency lists are not sorted and duplicate-free')

		reverse = np.sort(self.targets * self.n + sources)
		if not np.array_equal(keys, reverse):
			raise GraphFormatError('graph is not symmetric')

	def __eq__(self, other: object) -> bool:
		if not isinstance(other, CsrGraph):
			return NotImplemented
		return (
			self.n == other.n
			and np.array_equal(self.offsets, other.offsets)
			and np.array_equal(self.targets, other.targets)
		)

	def __hash__(self) -> int:
		return hash((self.n, self.m2, self.offsets.tobytes(), self.targets.tobytes()))

	def __repr__(self) -> str:
		return f'CsrGraph(n={self.n}, m={self.m}, dmax={self.dmax})'
