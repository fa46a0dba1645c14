from __future__ import annotations

from enum import Enum
from typing import Any, Iterator, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from kcore_peel.bucketing.views import BucketKind, BucketStrategy
from kcore_peel.peel.online import DEFAULT_VGC_CAPACITY
from kcore_peel.sampler.views import SamplingParams
from kcore_peel.utils import default_thread_count

SAMPLING_LABEL = 'sampling'


class PeelStrategy(str, Enum):
	ONLINE = 'online'
	OFFLINE = 'offline'


class PeelConfig(BaseModel):
	"""
	Configuration of one decomposition.

	Default values:
		peel: online
			online decrements atomically as vertices are peeled, offline batches each subround

		sampling: None
			SamplingParams turn the contention-reducing sampler on (online only)

		vgc: 128 for online, 0 for offline
			Local queue capacity of the local search; 0 turns it off (online only when > 0)

		bucketing: auto
			Frontier generation strategy

		threads: KCORE_PEEL_THREADS or the CPU count
			Worker threads

		seed: 0
			Seed of the hash bags

		record_frontiers: False
			Keep every round's frontier in the stats

		debug_checks: False
			Watch writes to frozen induced degrees and check d̃ against unpeeled neighbor
			counts at every round boundary
	"""

	model_config = ConfigDict(frozen=True)

	peel: PeelStrategy = PeelStrategy.ONLINE
	sampling: Optional[SamplingParams] = None
	vgc: Optional[int] = Field(default=None, ge=0)
	bucketing: BucketStrategy = Field(default_factory=BucketStrategy)
	threads: int = Field(default_factory=default_thread_count, ge=1)
	seed: int = 0
	record_frontiers: bool = False
	debug_checks: bool = False

	@model_validator(mode='after')
	def _check_combination(self) -> 'PeelConfig':
		if self.vgc is None:
			object.__setattr__(self, 'vgc', DEFAULT_VGC_CAPACITY if self.peel == PeelStrategy.ONLINE else 0)
		if self.peel == PeelStrategy.OFFLINE:
			if self.sampling is not None:
				raise ValueError('sampling requires online peel')
			if self.vgc > 0:
				raise ValueError('vgc requires online peel')
		return self

	@property
	def label(self) -> str:
		parts = [self.peel.value, f'vgc{self.vgc}']
		if self.sampling is not None:
			parts.append(SAMPLING_LABEL)
		parts.append(str(self.bucketing))
		return ':'.join(parts)

	@classmethod
	def from_label(cls, label: str, **overrides: Any) -> 'PeelConfig':
		"""Parse 'online:vgc128:sampling:hbs'; everything after the peel strategy is optional"""
		peel, *rest = label.strip().split(':')
		fields: dict[str, Any] = {'peel': peel}
		while rest and (rest[0] == SAMPLING_LABEL or (rest[0].startswith('vgc') and rest[0][3:].isdigit())):
			token = rest.pop(0)
			if token == SAMPLING_LABEL:
				fields['sampling'] = SamplingParams()
			else:
				fields['vgc'] = int(token[3:])
		if rest:
			fields['bucketing'] = BucketStrategy.parse(':'.join(rest))
		fields.update(overrides)
		return cls(**fields)

	@classmethod
	def matrix(cls, **overrides: Any) -> Iterator['PeelConfig']:
		"""Every legal combination of peel strategy, VGC, sampling and bucketing"""
		strategies = [
			BucketStrategy(kind=BucketKind.SINGLE),
			BucketStrategy(kind=BucketKind.FIXED),
			BucketStrategy(kind=BucketKind.HBS),
			BucketStrategy(kind=BucketKind.AUTO),
		]
		for bucketing in strategies:
			yield cls(peel=PeelStrategy.OFFLINE, vgc=0, bucketing=bucketing, **overrides)
		for vgc in (0, DEFAULT_VGC_CAPACITY):
			for sampling in (None, SamplingParams()):
				for bucketing in strategies:
					yield cls(peel=PeelStrategy.ONLINE, vgc=vgc, sampling=sampling, bucketing=bucketing, **overrides)


class PeelStats(BaseModel):
	"""
	Counters of one decomposition.

	sum_active is the total size of all active sets and equals the sum of 1 + coreness
	over all vertices. max_hot_updates is the largest number of atomic updates any one
	vertex received on its induced degree and sample count together.
	"""

	n: int = 0
	m2: int = 0
	kmax: int = 0
	rounds: int = 0
	subrounds: int = 0
	decrements: int = 0
	samples: int = 0
	resamples: int = 0
	restarts: int = 0
	sum_active: int = 0
	max_hot_updates: int = 0
	wall_ms: float = 0.0
	config: dict[str, Any] = Field(default_factory=dict)

	frontiers: Optional[list[list[int]]] = Field(default=None, exclude=True)
	bucket_insertions: Optional[list[int]] = Field(default=None, exclude=True)

	@property
	def max_bucket_insertions(self) -> int:
		return max(self.bucket_insertions, default=0) if self.bucket_insertions else 0

	def to_json_dict(self) -> dict[str, Any]:
		return self.model_dump(mode='json')
