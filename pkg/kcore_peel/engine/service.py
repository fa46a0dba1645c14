import logging
import time
from typing import Optional, Sequence

from kcore_peel.bucketing.service import FrontierGenerator, make_frontier_generator
from kcore_peel.engine.views import PeelConfig, PeelStats, PeelStrategy
from kcore_peel.graph.views import CsrGraph
from kcore_peel.oracle.views import CorenessArray
from kcore_peel.peel.offline import peel_offline
from kcore_peel.peel.online import peel_online
from kcore_peel.peel.pool import WorkerPool
from kcore_peel.peel.views import UNASSIGNED, PeelState
from kcore_peel.sampler.service import peel_sampled, resample_all, sampling_round_prologue, set_sampler
from kcore_peel.sampler.views import CoinFn, DetectedError, SamplerTable, SamplingParams
from kcore_peel.telemetry.service import ProductTelemetry
from kcore_peel.telemetry.views import DecomposeTelemetryEvent, size_class

logger = logging.getLogger(__name__)

# Restarts with a doubled mu before falling back to a run without sampling
MAX_SAMPLING_RESTARTS = 2


def refine_active(state: PeelState, active: Sequence[int], k: int, pool: WorkerPool) -> list[int]:
	"""Vertices of the active set that survive round k"""
	degrees, coreness = state.degrees, state.coreness

	def keep(chunk: Sequence[int]) -> list[int]:
		return [v for v in chunk if coreness[v] == UNASSIGNED and degrees.load(v) > k]

	return [v for part in pool.map_chunks(active, keep, min_chunk=1024) for v in part]


class PeelEngine:
	"""
	Round and subround driver.

	Round k starts from the frontier the bucketing strategy generates, peels subround
	after subround until no vertex is claimed for round k, and then refines the active
	set to the vertices whose induced degree stays above k. With sampling, sampled
	vertices are validated at the start of the round and again whenever the frontier runs
	dry, and vertices that collected mu samples are resampled after every subround.

	A sampling failure restarts the whole run: first with mu doubled, and after
	MAX_SAMPLING_RESTARTS failures without sampling.
	"""

	def __init__(self, config: Optional[PeelConfig] = None, coin: Optional[CoinFn] = None):
		self.config = config or PeelConfig()
		self.coin = coin
		self.telemetry = ProductTelemetry()

	def decompose(self, graph: CsrGraph) -> tuple[CorenessArray, PeelStats]:
		start = time.perf_counter()
		sampling = self.config.sampling
		restarts = 0
		with WorkerPool(self.config.threads) as pool:
			while True:
				try:
					coreness, stats = self._run(graph, sampling, pool)
					break
				except DetectedError as e:
					restarts += 1
					if restarts <= MAX_SAMPLING_RESTARTS:
						sampling = sampling.model_copy(update={'mu_scale': sampling.mu_scale * 2})
						logger.warning(f'Sampling failure ({e}); restarting with mu scaled by {sampling.mu_scale}')
					else:
						sampling = None
						logger.warning(f'Sampling failure ({e}); restarting without sampling')

		stats.restarts = restarts
		stats.wall_ms = (time.perf_counter() - start) * 1000
		logger.info(
			f'Decomposed n={graph.n} m2={graph.m2} with {self.config.label}: kmax={stats.kmax}, '
			f'{stats.rounds} rounds, {stats.subrounds} subrounds, {stats.wall_ms:.1f} ms'
		)
		self.telemetry.capture(
			DecomposeTelemetryEvent(
				n_class=size_class(graph.n),
				m2_class=size_class(graph.m2),
				kmax=stats.kmax,
				config=self.config.label,
				rounds=stats.rounds,
				subrounds=stats.subrounds,
				restarts=restarts,
				wall_ms=stats.wall_ms,
			)
		)
		return coreness, stats

	def _run(self, graph: CsrGraph, sampling: Optional[SamplingParams], pool: WorkerPool) -> tuple[CorenessArray, PeelStats]:
		config = self.config
		state = PeelState(graph)
		stats = PeelStats(n=graph.n, m2=graph.m2, config={'label': config.label, **config.model_dump(mode='json')})
		if config.record_frontiers:
			stats.frontiers = []

		table: Optional[SamplerTable] = None
		if sampling is not None:
			table = SamplerTable(graph.n, sampling, self.coin)
			for v in range(graph.n):
				set_sampler(state, table, v, 0)
			if config.debug_checks:
				state.degrees.watch = table.is_sampled

		active = list(range(graph.n))
		generator = make_frontier_generator(config.bucketing, state, active, 0, pool, config.seed)
		state.listener = generator

		k = 0
		while active:
			stats.sum_active += len(active)
			stats.rounds += 1
			frontier = generator.next_frontier(active, k)
			if stats.frontiers is not None:
				stats.frontiers.append(sorted(frontier))
			if table is not None:
				stats.resamples += sampling_round_prologue(state, table, k, frontier, pool)
			self._peel_round(state, table, generator, frontier, k, pool, stats)
			if config.debug_checks:
				state.check_induced_degrees(skip=table.is_sampled if table is not None else None)
			active = refine_active(state, active, k, pool)
			logger.debug(f'round {k} done: |A|={len(active)}')
			k += 1

		coreness = state.coreness_array()
		stats.kmax = coreness.kmax
		stats.decrements = state.counters.decrements
		stats.samples = state.counters.samples
		hot = state.degrees.updates
		if table is not None:
			hot = [d + c for d, c in zip(hot, table.cnt.updates)]
		stats.max_hot_updates = max(hot, default=0)
		stats.bucket_insertions = generator.bucket_insertions()
		return coreness, stats

	def _peel_round(
		self,
		state: PeelState,
		table: Optional[SamplerTable],
		generator: FrontierGenerator,
		frontier: list[int],
		k: int,
		pool: WorkerPool,
		stats: PeelStats,
	) -> None:
		config = self.config
		while True:
			while frontier:
				stats.subrounds += 1
				state.assign(frontier, k)
				if table is not None:
					frontier, resample = peel_sampled(state, table, frontier, k, config.vgc, pool)
					if resample:
						stats.resamples += len(resample)
						frontier.extend(resample_all(state, table, resample, k, pool))
				elif config.peel == PeelStrategy.OFFLINE:
					frontier = peel_offline(state, frontier, k, pool)
				else:
					frontier = peel_online(state, frontier, k, config.vgc, pool)
			if table is None:
				return
			# sampled vertices whose neighbors all went this round surface here
			stats.resamples += sampling_round_prologue(state, table, k, frontier, pool)
			if not frontier:
				return

	def kcore_subgraph(self, graph: CsrGraph, kprime: int) -> list[int]:
		"""Vertices of the k'-core: peel every vertex with induced degree below k' until none is left"""
		if kprime < 0:
			raise ValueError(f'kprime must be non-negative, got {kprime}')
		config = self.config
		state = PeelState(graph)
		k = kprime - 1
		with WorkerPool(config.threads) as pool:
			frontier = [v for v in range(graph.n) if state.degrees.load(v) <= k and state.claim(v, k)]
			while frontier:
				state.assign(frontier, k)
				if config.peel == PeelStrategy.OFFLINE:
					frontier = peel_offline(state, frontier, k, pool)
				else:
					frontier = peel_online(state, frontier, k, config.vgc, pool)
		return state.live_vertices()


def decompose(graph: CsrGraph, config: Optional[PeelConfig] = None) -> tuple[CorenessArray, PeelStats]:
	return PeelEngine(config).decompose(graph)


def kcore_subgraph(graph: CsrGraph, kprime: int, config: Optional[PeelConfig] = None) -> list[int]:
	return PeelEngine(config).kcore_subgraph(graph, kprime)
