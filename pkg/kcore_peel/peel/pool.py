import logging
import math
from concurrent.futures import ThreadPoolExecutor, wait
from typing import Callable, Sequence, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar('T')
R = TypeVar('R')

# Chunks per worker when splitting a parallel loop
CHUNKS_PER_WORKER = 4


class WorkerPool:
	"""
	Parallel-for over chunks of a sequence.

	Each map_chunks call is a full barrier: it returns only after every chunk finished,
	and it re-raises the first exception a chunk raised. With one thread everything
	runs inline on the caller.
	"""

	def __init__(self, threads: int = 1):
		if threads < 1:
			raise ValueError(f'threads must be at least 1, got {threads}')
		self.threads = threads
		self._executor = ThreadPoolExecutor(max_workers=threads, thread_name_prefix='kcore-peel') if threads > 1 else None

	def map_chunks(self, items: Sequence[T], fn: Callable[[Sequence[T]], R], min_chunk: int = 64) -> list[R]:
		if not items:
			return []
		if self._executor is None or len(items) <= min_chunk:
			return [fn(items)]
		size = max(min_chunk, math.ceil(len(items) / (self.threads * CHUNKS_PER_WORKER)))
		futures = [self._executor.submit(fn, items[i : i + size]) for i in range(0, len(items), size)]
		wait(futures)
		return [future.result() for future in futures]

	def close(self) -> None:
		if self._executor is not None:
			self._executor.shutdown(wait=True)
			self._executor = None

	def __enter__(self) -> 'WorkerPool':
		return self

	def __exit__(self, *exc) -> None:
		self.close()
