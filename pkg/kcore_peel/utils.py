import logging
import os
import time
from functools import wraps
from typing import BinaryIO, Callable, ParamSpec, TypeVar

logger = logging.getLogger(__name__)


# Define generic type variables for return type and parameters
R = TypeVar('R')
P = ParamSpec('P')


def time_execution_sync(additional_text: str = '') -> Callable[[Callable[P, R]], Callable[P, R]]:
	def decorator(func: Callable[P, R]) -> Callable[P, R]:
		@wraps(func)
		def wrapper(*args: P.args, **kwargs: P.kwargs) -> R:
			start_time = time.perf_counter()
			result = func(*args, **kwargs)
			execution_time = time.perf_counter() - start_time
			logger.debug(f'{additional_text} Execution time: {execution_time:.3f} seconds')
			return result

		return wrapper

	return decorator


def singleton(cls):
	instance = [None]

	def wrapper(*args, **kwargs):
		if instance[0] is None:
			instance[0] = cls(*args, **kwargs)
		return instance[0]

	return wrapper


def default_thread_count() -> int:
	"""Worker count from KCORE_PEEL_THREADS, else the machine's hardware parallelism"""
	configured = os.getenv('KCORE_PEEL_THREADS')
	if configured:
		try:
			value = int(configured)
		except ValueError:
			logger.warning(f'Ignoring non-integer KCORE_PEEL_THREADS={configured!r}')
		else:
			if value >= 1:
				return value
			logger.warning(f'Ignoring KCORE_PEEL_THREADS={value}, must be at least 1')
	return os.cpu_count() or 1


_MASK64 = (1 << 64) - 1


def mix64(x: int) -> int:
	"""splitmix64 finalizer: a deterministic 64-bit scramble of x"""
	z = (x + 0x9E3779B97F4A7C15) & _MASK64
	z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
	z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
	return z ^ (z >> 31)


READ_CHUNK = 1 << 20


def read_up_to(source: BinaryIO, size: int) -> bytes:
	"""Read at most size bytes, stopping early at end of stream.

	A header count is untrusted, so the read proceeds in READ_CHUNK pieces and memory tracks what the stream holds.
	"""
	parts: list[bytes] = []
	remaining = size
	while remaining > 0:
		part = source.read(min(remaining, READ_CHUNK))
		if not part:
			break
		parts.append(part)
		remaining -= len(part)
	return b''.join(parts)
