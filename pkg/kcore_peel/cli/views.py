from enum import IntEnum
from typing import Any

from pydantic import BaseModel, Field


class ExitCode(IntEnum):
	OK = 0
	MISMATCH = 1
	FORMAT = 2
	CONFIG = 3


class BenchRecord(BaseModel):
	"""Timed runs of one configuration, verified against the oracle before reporting"""

	label: str
	verified: bool
	mean_wall_ms: float
	runs: list[dict[str, Any]] = Field(default_factory=list)
