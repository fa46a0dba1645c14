from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from pydantic import BaseModel, ConfigDict, Field

from kcore_peel.peel.views import AtomicIntArray
from kcore_peel.utils import mix64

# A coin takes (sampled vertex, peeled neighbor, sampler generation, rate) and says heads or tails
CoinFn = Callable[[int, int, int, float], bool]

_TWO_TO_64 = float(1 << 64)


class SamplingError(Exception):
	"""Base class for all sampling errors"""


class DetectedError(SamplingError):
	"""
	A sampled vertex turned out to have fallen below the round it should have been peeled in.

	Raised by resample; the engine consumes it and restarts the run.
	"""

	def __init__(self, vertex: int, k: int, previous_count: int):
		self.vertex = vertex
		self.k = k
		self.previous_count = previous_count
		super().__init__(f'vertex {vertex} left sample mode at round {k} with only {previous_count} neighbors alive in the previous round')


class SamplingParams(BaseModel):
	"""
	Parameters of the sampling scheme.

	Default values:
		c: 1.0
			Confidence constant of the sample count, mu = ceil(4 (c + 2) ln n)

		r: 0.10
			A sampler is reset once the induced degree is expected to fall to this fraction

		threshold: 16
			r * degree must exceed this (and the round) for a vertex to be sampled

		seed: 0
			Seed of the coin hash

		mu_scale: 1
			Multiplier applied to mu; restarts double it

		mu_override: None
			Fixed mu instead of the formula
	"""

	model_config = ConfigDict(frozen=True)

	c: float = Field(default=1.0, ge=1.0)
	r: float = Field(default=0.10, gt=0.0, lt=1.0)
	threshold: int = Field(default=16, ge=0)
	seed: int = 0
	mu_scale: int = Field(default=1, ge=1)
	mu_override: Optional[int] = Field(default=None, ge=1)

	def mu(self, n: int) -> int:
		base = self.mu_override or math.ceil(4 * (self.c + 2) * math.log(max(n, 1)))
		return max(1, self.mu_scale * base)


@dataclass(frozen=True)
class Sampler:
	"""Sampler of one vertex: sample mode flag, sample rate and sample count"""

	mode: bool
	rate: float
	cnt: int


def hash_coin(seed: int) -> CoinFn:
	"""Deterministic coin keyed by (seed, sampled vertex, peeled neighbor, generation)"""

	def toss(u: int, v: int, generation: int, rate: float) -> bool:
		key = mix64(mix64(mix64(seed ^ u) ^ v) ^ generation)
		return key / _TWO_TO_64 < rate

	return toss


class SamplerTable:
	"""
	Samplers of all vertices as flat arrays.

	mode and rate change only at phase boundaries; cnt takes concurrent increments.
	generation[v] counts set_sampler calls on v and keys its coins.
	"""

	def __init__(self, n: int, params: SamplingParams, coin: Optional[CoinFn] = None):
		self.params = params
		self.mu = params.mu(n)
		self.mode: list[bool] = [False] * n
		self.rate: list[float] = [0.0] * n
		self.cnt = AtomicIntArray.filled(n, 0)
		self.generation: list[int] = [0] * n
		self.coin = coin or hash_coin(params.seed)

	def __len__(self) -> int:
		return len(self.mode)

	def get(self, v: int) -> Sampler:
		return Sampler(mode=self.mode[v], rate=self.rate[v], cnt=self.cnt.load(v))

	def toss(self, u: int, v: int) -> bool:
		return self.coin(u, v, self.generation[u], self.rate[u])

	def sampled_vertices(self) -> list[int]:
		return [v for v, on in enumerate(self.mode) if on]

	def is_sampled(self, v: int) -> bool:
		return self.mode[v]
