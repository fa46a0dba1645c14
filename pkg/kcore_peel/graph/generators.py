"""
Seeded synthetic graphs: lattices, a high-coreness gadget, preferential attachment and uniform random graphs.

Every generator is a pure function of its parameters and seed.
"""

import logging

import numpy as np

from kcore_peel.graph.service import from_edges
from kcore_peel.graph.views import (
	MAX_VERTEX_COUNT,
	CapacityError,
	CsrGraph,
	EdgeList,
	GeneratorParameterError,
)
from kcore_peel.utils import time_execution_sync

logger = logging.getLogger(__name__)


def _check_capacity(*dims: int) -> int:
	total = 1
	for d in dims:
		total *= d
	if total > MAX_VERTEX_COUNT:
		raise CapacityError(f'{" x ".join(map(str, dims))} = {total} vertices exceeds the id space ({MAX_VERTEX_COUNT})')
	return total


def _lattice_edges(dims: tuple[int, ...]) -> np.ndarray:
	"""Nearest-neighbor pairs of a row-major lattice without wraparound"""
	n = int(np.prod(dims))
	ids = np.arange(n, dtype=np.int64).reshape(dims[::-1])
	parts = []
	for axis in range(len(dims)):
		if ids.shape[axis] < 2:
			continue
		lo = np.take(ids, range(ids.shape[axis] - 1), axis=axis).ravel()
		hi = np.take(ids, range(1, ids.shape[axis]), axis=axis).ravel()
		parts.append(np.stack([lo, hi], axis=1))
	if not parts:
		return np.empty((0, 2), dtype=np.int64)
	return np.concatenate(parts)


def gen_grid(w: int, h: int) -> CsrGraph:
	"""w x h 4-neighbor grid, vertex (x, y) has id y*w + x"""
	if w < 1 or h < 1:
		raise GeneratorParameterError(f'grid dimensions must be at least 1, got {w} x {h}')
	n = _check_capacity(w, h)
	return from_edges(EdgeList(n=n, edges=_lattice_edges((w, h))))


def gen_cube(x: int, y: int, z: int) -> CsrGraph:
	"""x * y * z 6-neighbor lattice, vertex (i, j, l) has id (l*y + j)*x + i"""
	if x < 1 or y < 1 or z < 1:
		raise GeneratorParameterError(f'cube dimensions must be at least 1, got {x} x {y} x {z}')
	n = _check_capacity(x, y, z)
	return from_edges(EdgeList(n=n, edges=_lattice_edges((x, y, z))))


def gen_hcns(kmax: int, seed: int = 0) -> CsrGraph:
	"""
	Clique on kmax+1 vertices (ids 0..kmax) plus, for each i in 1..kmax-1, one pendant vertex
	joined to i distinct clique vertices chosen by the seed.

	The pendant for i has coreness exactly i and every clique vertex has coreness kmax.
	"""
	if kmax < 1:
		raise GeneratorParameterError(f'kmax must be at least 1, got {kmax}')
	clique = kmax + 1
	n = _check_capacity(clique + kmax - 1)
	rng = np.random.default_rng(seed)

	iu, ju = np.triu_indices(clique, k=1)
	parts = [np.stack([iu, ju], axis=1).astype(np.int64)]
	for i in range(1, kmax):
		pendant = clique + i - 1
		anchors = rng.choice(clique, size=i, replace=False)
		parts.append(np.stack([np.full(i, pendant, dtype=np.int64), anchors.astype(np.int64)], axis=1))
	return from_edges(EdgeList(n=n, edges=np.concatenate(parts)))


@time_execution_sync('--gen_ba')
def gen_ba(n: int, a: int, seed: int = 0) -> CsrGraph:
	"""
	Preferential attachment seeded with the clique K_{a+1}.

	Each new vertex attaches to a distinct existing vertices, drawn from the running list of
	edge endpoints (so proportional to degree) with duplicates rejected and redrawn.
	"""
	if a < 1:
		raise GeneratorParameterError(f'attach degree must be at least 1, got {a}')
	if n < a + 1:
		raise GeneratorParameterError(f'need n >= a + 1, got n={n}, a={a}')
	_check_capacity(n)
	rng = np.random.default_rng(seed)

	seed_edges = a * (a + 1) // 2
	total_edges = seed_edges + a * (n - a - 1)
	edges = np.empty((total_edges, 2), dtype=np.int64)
	endpoints = np.empty(2 * total_edges, dtype=np.int64)

	iu, ju = np.triu_indices(a + 1, k=1)
	edges[:seed_edges, 0] = iu
	edges[:seed_edges, 1] = ju
	endpoints[0 : 2 * seed_edges : 2] = iu
	endpoints[1 : 2 * seed_edges : 2] = ju
	filled = seed_edges

	for v in range(a + 1, n):
		pool_size = 2 * filled
		chosen: list[int] = []
		while len(chosen) < a:
			for idx in rng.integers(0, pool_size, size=a - len(chosen)).tolist():
				u = int(endpoints[idx])
				if u not in chosen:
					chosen.append(u)
					if len(chosen) == a:
						break
		targets = np.array(chosen, dtype=np.int64)
		edges[filled : filled + a, 0] = v
		edges[filled : filled + a, 1] = targets
		endpoints[2 * filled : 2 * (filled + a) : 2] = v
		endpoints[2 * filled + 1 : 2 * (filled + a) : 2] = targets
		filled += a

	logger.debug(f'Generated preferential attachment graph n={n} a={a} with {filled} edges')
	return from_edges(EdgeList(n=n, edges=edges))


def gen_er(n: int, avg_degree: float, seed: int = 0) -> CsrGraph:
	"""Uniform random graph: round(n * avg_degree / 2) random pairs, self-loops and repeats dropped"""
	if n < 0 or avg_degree < 0:
		raise GeneratorParameterError(f'need n >= 0 and avg_degree >= 0, got n={n}, avg_degree={avg_degree}')
	_check_capacity(n)
	rng = np.random.default_rng(seed)
	pairs = int(round(n * avg_degree / 2)) if n > 1 else 0
	edges = rng.integers(0, max(n, 1), size=(pairs, 2), dtype=np.int64)
	return from_edges(EdgeList(n=n, edges=edges))
