import logging
from typing import Optional, Sequence

from kcore_peel.peel.online import OnlineSubround
from kcore_peel.peel.pool import WorkerPool
from kcore_peel.peel.views import UNASSIGNED, PeelState
from kcore_peel.sampler.views import DetectedError, Sampler, SamplerTable

logger = logging.getLogger(__name__)


def set_sampler(state: PeelState, table: SamplerTable, v: int, k: int) -> Sampler:
	"""Turn sample mode on for v when r * d̃[v] exceeds both the threshold and k, off otherwise"""
	params = table.params
	d = state.degrees.load(v)
	if params.r * d > max(params.threshold, k):
		table.rate[v] = min(1.0, table.mu / ((1 - params.r) * d))
		table.cnt.store(v, 0)
		table.generation[v] += 1
		table.mode[v] = True
	else:
		table.mode[v] = False
	return table.get(v)


def validate(state: PeelState, table: SamplerTable, v: int, k: int) -> bool:
	"""False when v may no longer stay in sample mode through round k"""
	d = state.degrees.load(v)
	if k >= table.params.r * d:
		return False
	return table.cnt.load(v) < (d - k) * table.rate[v] / 4


def peel_sampled(
	state: PeelState,
	table: SamplerTable,
	frontier: Sequence[int],
	k: int,
	vgc_cap: int = 0,
	pool: Optional[WorkerPool] = None,
) -> tuple[list[int], list[int]]:
	"""Online subround where sampled neighbors take coins; returns the next frontier and the vertices to resample"""
	return OnlineSubround(state, k, vgc_cap, sampler=table).run(frontier, pool or WorkerPool(1))


def resample(state: PeelState, table: SamplerTable, v: int, k: int, frontier: list[int]) -> None:
	"""
	Recount v's induced degree and reset its sampler.

	The current count is v's unpeeled neighbors; the previous-round count also includes
	neighbors peeled in round k. A recount at or below k puts v on the frontier, unless
	fewer than k neighbors were alive at the start of the round, which means v should
	have been peeled earlier and DetectedError is raised.
	"""
	coreness = state.coreness
	current = previous = 0
	for u in state.neighbors(v):
		kappa = coreness[u]
		if kappa == UNASSIGNED:
			current += 1
			previous += 1
		elif kappa == k:
			previous += 1

	old = state.degrees.load(v)
	table.mode[v] = False
	state.degrees.store(v, current)
	if current <= k:
		if previous < k:
			raise DetectedError(v, k, previous)
		if state.claim(v, k):
			frontier.append(v)
		return
	set_sampler(state, table, v, k)
	if current != old:
		state.notify(v, old, current, k)


def resample_all(
	state: PeelState, table: SamplerTable, vertices: Sequence[int], k: int, pool: Optional[WorkerPool] = None
) -> list[int]:
	"""Resample every vertex in parallel; returns the vertices that joined the frontier"""

	def run(chunk: Sequence[int]) -> list[int]:
		joined: list[int] = []
		for v in chunk:
			resample(state, table, v, k, joined)
		return joined

	return [v for part in (pool or WorkerPool(1)).map_chunks(vertices, run) for v in part]


def sampling_round_prologue(
	state: PeelState, table: SamplerTable, k: int, frontier: list[int], pool: Optional[WorkerPool] = None
) -> int:
	"""Resample every live sampled vertex that fails validation at round k; returns how many were resampled"""
	failing = [v for v in table.sampled_vertices() if state.is_live(v) and not validate(state, table, v, k)]
	if failing:
		frontier.extend(resample_all(state, table, failing, k, pool))
		logger.debug(f'round {k}: resampled {len(failing)} vertices failing validation')
	return len(failing)
