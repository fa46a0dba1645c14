from __future__ import annotations

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator

# Keys k..k+7 get one bucket each before the ranges start doubling
SINGLE_KEY_BUCKETS = 8


class BucketingError(Exception):
	"""Base class for all bucketing errors"""


class BucketContractError(BucketingError):
	"""Error raised when a bucket index is asked for a degree below the round"""


class BucketKind(str, Enum):
	SINGLE = 'single'
	FIXED = 'fixed'
	HBS = 'hbs'
	AUTO = 'auto'


class BucketStrategy(BaseModel):
	"""
	How each round's frontier is generated.

	Default values:
		kind: auto
			single packs the active set every round, fixed keeps b single-key buckets
			rebuilt every b rounds, hbs uses hierarchical buckets, auto starts with single
			and switches to hbs once round theta is reached

		b: 16
			Bucket count of the fixed strategy

		theta: 16
			Switch round of auto; auto uses hbs from the start when the average degree exceeds it
	"""

	model_config = ConfigDict(frozen=True)

	kind: BucketKind = BucketKind.AUTO
	b: int = Field(default=16, ge=1)
	theta: int = Field(default=16, ge=0)

	@model_validator(mode='before')
	@classmethod
	def _from_text(cls, data):
		if isinstance(data, str):
			return cls._parse_fields(data)
		return data

	@staticmethod
	def _parse_fields(text: str) -> dict:
		kind, _, arg = text.strip().partition(':')
		fields: dict = {'kind': kind}
		if arg:
			if kind == BucketKind.FIXED.value:
				fields['b'] = int(arg)
			elif kind == BucketKind.AUTO.value:
				fields['theta'] = int(arg)
			else:
				raise ValueError(f'bucketing {kind!r} takes no argument, got {text!r}')
		return fields

	@classmethod
	def parse(cls, text: str) -> 'BucketStrategy':
		"""'single', 'fixed:16', 'hbs', 'auto' or 'auto:32'"""
		return cls.model_validate(text)

	def __str__(self) -> str:
		if self.kind == BucketKind.FIXED:
			return f'fixed:{self.b}'
		if self.kind == BucketKind.AUTO and self.theta != 16:
			return f'auto:{self.theta}'
		return self.kind.value
