import logging
import struct
from typing import BinaryIO

import numpy as np

from kcore_peel.graph.views import CsrGraph
from kcore_peel.oracle.views import (
	CorenessArray,
	CorenessFormatError,
	CorenessLengthError,
	VerifyResult,
)
from kcore_peel.utils import read_up_to, time_execution_sync

logger = logging.getLogger(__name__)

CORENESS_MAGIC = b'KCC1'
_COUNT = struct.Struct('<Q')
_U64 = np.dtype('<u8')


@time_execution_sync('--bz_coreness')
def bz_coreness(graph: CsrGraph) -> CorenessArray:
	"""
	Sequential bucket-sort peeling in O(n + m).

	Vertices sit in an array ordered by current degree; bin[d] is where degree d starts.
	Removing the front vertex and moving each higher-degree neighbor one bin down is a
	swap with the first vertex of its bin.
	"""
	n = graph.n
	if n == 0:
		return CorenessArray(np.empty(0, dtype=np.int64))
	offsets, targets = graph.adjacency
	deg = graph.degrees().tolist()
	dmax = max(deg)

	bin_start = [0] * (dmax + 2)
	for d in deg:
		bin_start[d + 1] += 1
	for d in range(1, dmax + 2):
		bin_start[d] += bin_start[d - 1]

	vert = [0] * n
	pos = [0] * n
	fill = bin_start[:]
	for v in range(n):
		pos[v] = fill[deg[v]]
		vert[pos[v]] = v
		fill[deg[v]] += 1

	for i in range(n):
		v = vert[i]
		dv = deg[v]
		for u in targets[offsets[v] : offsets[v + 1]]:
			du = deg[u]
			if du > dv:
				pu = pos[u]
				pw = bin_start[du]
				w = vert[pw]
				if u != w:
					vert[pu], vert[pw] = w, u
					pos[u], pos[w] = pw, pu
				bin_start[du] += 1
				deg[u] = du - 1

	return CorenessArray(np.array(deg, dtype=np.int64))


def verify_coreness(graph: CsrGraph, coreness: CorenessArray) -> VerifyResult:
	"""Recompute with the oracle and report the least mismatching vertex"""
	if len(coreness) != graph.n:
		raise CorenessLengthError(f'coreness has {len(coreness)} entries, graph has {graph.n} vertices')
	expected = bz_coreness(graph)
	mismatches = np.flatnonzero(expected.values != coreness.values)
	if mismatches.size == 0:
		return VerifyResult(passed=True)
	v = int(mismatches[0])
	logger.error(f'Coreness mismatch at vertex {v}: expected {expected[v]}, got {coreness[v]}')
	return VerifyResult(passed=False, vertex=v, expected=expected[v], actual=coreness[v])


def witness_violations(graph: CsrGraph, coreness: CorenessArray) -> list[int]:
	"""Vertices v with fewer than k[v] neighbors u such that k[u] >= k[v]"""
	if graph.m2 == 0:
		return [v for v in range(graph.n) if coreness[v] > 0]
	sources = np.repeat(np.arange(graph.n, dtype=np.int64), graph.degrees())
	values = coreness.values
	supported = values[graph.targets] >= values[sources]
	support = np.bincount(sources[supported], minlength=graph.n)
	return np.flatnonzero(support < values).tolist()


def save_coreness(coreness: CorenessArray, sink: BinaryIO) -> None:
	sink.write(CORENESS_MAGIC)
	sink.write(_COUNT.pack(len(coreness)))
	sink.write(coreness.values.astype(_U64).tobytes())


def load_coreness(source: BinaryIO) -> CorenessArray:
	magic = source.read(len(CORENESS_MAGIC))
	if magic != CORENESS_MAGIC:
		raise CorenessFormatError(f'bad magic {magic!r}, expected {CORENESS_MAGIC!r}')
	header = source.read(_COUNT.size)
	if len(header) != _COUNT.size:
		raise CorenessFormatError('truncated stream while reading the vertex count')
	(n,) = _COUNT.unpack(header)
	payload = read_up_to(source, 8 * n)
	if len(payload) != 8 * n:
		raise CorenessFormatError(f'truncated stream: expected {n} values, got {len(payload) // 8}')
	values = np.frombuffer(payload, dtype=_U64)
	if n and values.max() >= 2**62:
		raise CorenessFormatError('coreness value out of range')
	return CorenessArray(values.astype(np.int64))
