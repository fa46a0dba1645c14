from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass
from typing import Any, Dict


def size_class(count: int) -> int:
	"""Order of magnitude of a count in bits: 0 for 0, 1 for 1, 2 for 2..3, 3 for 4..7, ..."""
	return max(count, 0).bit_length()


@dataclass
class BaseTelemetryEvent(ABC):
	@property
	@abstractmethod
	def name(self) -> str:
		pass

	@property
	def properties(self) -> Dict[str, Any]:
		return {k: v for k, v in asdict(self).items() if k != 'name'}


@dataclass
class DecomposeTelemetryEvent(BaseTelemetryEvent):
	n_class: int
	m2_class: int
	kmax: int
	config: str
	rounds: int
	subrounds: int
	restarts: int
	wall_ms: float
	name: str = 'decompose'


@dataclass
class BenchTelemetryEvent(BaseTelemetryEvent):
	n_class: int
	m2_class: int
	configs: list[str]
	repeat: int
	verified: bool
	name: str = 'bench'
