from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional

import numpy as np
from pydantic import BaseModel


class OracleError(Exception):
	"""Base class for all oracle errors"""


class CorenessLengthError(OracleError):
	"""Error raised when a coreness array does not match the graph's vertex count"""


class CorenessFormatError(OracleError):
	"""Error raised when a KCC1 blob is malformed"""


@dataclass(frozen=True, eq=False)
class CorenessArray:
	"""Per-vertex coreness, the result of a decomposition"""

	values: np.ndarray

	def __post_init__(self):
		values = np.ascontiguousarray(self.values, dtype=np.int64)
		values.flags.writeable = False
		object.__setattr__(self, 'values', values)

	def __len__(self) -> int:
		return int(self.values.shape[0])

	def __getitem__(self, v: int) -> int:
		return int(self.values[v])

	@property
	def kmax(self) -> int:
		return int(self.values.max()) if len(self) else 0

	def profile(self) -> dict[int, int]:
		"""Number of vertices per coreness value"""
		return dict(sorted(Counter(self.values.tolist()).items()))

	def core(self, k: int) -> np.ndarray:
		"""Sorted ids of the vertices in the k-core"""
		return np.flatnonzero(self.values >= k)

	def tolist(self) -> list[int]:
		return self.values.tolist()

	def __eq__(self, other: object) -> bool:
		if not isinstance(other, CorenessArray):
			return NotImplemented
		return np.array_equal(self.values, other.values)

	def __hash__(self) -> int:
		return hash(self.values.tobytes())

	def __repr__(self) -> str:
		return f'CorenessArray(n={len(self)}, kmax={self.kmax})'


class VerifyResult(BaseModel):
	"""Outcome of comparing a coreness array with the sequential oracle"""

	passed: bool
	vertex: Optional[int] = None
	expected: Optional[int] = None
	actual: Optional[int] = None

	def describe(self) -> str:
		if self.passed:
			return 'coreness matches the sequential oracle'
		return f'mismatch at vertex {self.vertex}: expected {self.expected}, got {self.actual}'
