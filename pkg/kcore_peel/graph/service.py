import logging
import struct
from pathlib import Path
from typing import BinaryIO, TextIO

import numpy as np

from kcore_peel.graph.views import (
	CsrGraph,
	EdgeList,
	EdgeListParseError,
	GraphFormatError,
	InputRangeError,
)
from kcore_peel.utils import read_up_to

logger = logging.getLogger(__name__)

GRAPH_MAGIC = b'KCG1'
_HEADER = struct.Struct('<QQ')
_U64 = np.dtype('<u8')


def from_edges(edge_list: EdgeList) -> CsrGraph:
	"""Symmetrize, drop self-loops, merge duplicates and sort adjacency"""
	n = edge_list.n
	edges = edge_list.edges
	if n < 0:
		raise InputRangeError(f'negative vertex count {n}')
	if len(edges) and (edges.min() < 0 or edges.max() >= n):
		bad = edges[(edges < 0).any(axis=1) | (edges >= n).any(axis=1)][0]
		raise InputRangeError(f'edge ({bad[0]}, {bad[1]}) has an endpoint outside 0..{n - 1}')

	edges = edges[edges[:, 0] != edges[:, 1]]
	sources = np.concatenate([edges[:, 0], edges[:, 1]])
	targets = np.concatenate([edges[:, 1], edges[:, 0]])

	# one sort over (source, target) keys gives dedup and ascending adjacency at once
	keys = np.unique(sources * max(n, 1) + targets)
	sources = keys // max(n, 1)
	targets = keys % max(n, 1)

	offsets = np.zeros(n + 1, dtype=np.int64)
	np.cumsum(np.bincount(sources, minlength=n), out=offsets[1:])
	return CsrGraph(n=n, offsets=offsets, targets=targets)


def load_edge_list(stream: TextIO) -> EdgeList:
	"""
	Parse a whitespace separated edge list.

	Lines starting with '#' or '%' are comments, except that a first '# <n>' line fixes the
	vertex count. Without it n = 1 + the largest id seen.
	"""
	declared_n: int | None = None
	seen_edge = False
	pairs: list[tuple[int, int]] = []

	for line_number, raw in enumerate(stream, start=1):
		line = raw.strip()
		if not line:
			continue
		if line[0] in '#%':
			header = line[1:].split()
			if line[0] == '#' and declared_n is None and not seen_edge and len(header) == 1 and header[0].isdigit():
				declared_n = int(header[0])
			continue

		tokens = line.split()
		if len(tokens) < 2:
			raise EdgeListParseError(line_number, f'expected two vertex ids, got {line!r}')
		try:
			u, v = int(tokens[0]), int(tokens[1])
		except ValueError:
			raise EdgeListParseError(line_number, f'non-integer vertex id in {line!r}') from None
		if u < 0 or v < 0:
			raise EdgeListParseError(line_number, f'negative vertex id in {line!r}')
		if declared_n is not None and (u >= declared_n or v >= declared_n):
			raise InputRangeError(f'line {line_number}: edge ({u}, {v}) exceeds declared n = {declared_n}')
		pairs.append((u, v))
		seen_edge = True

	if declared_n is not None:
		n = declared_n
	else:
		n = 1 + max((max(u, v) for u, v in pairs), default=-1)

	logger.debug(f'Parsed edge list with n={n} and {len(pairs)} entries')
	return EdgeList(n=n, edges=np.array(pairs, dtype=np.int64).reshape(-1, 2))


def write_edge_list(graph: CsrGraph, stream: TextIO) -> None:
	stream.write(f'# {graph.n}\n')
	for u, v in graph.edges():
		stream.write(f'{u} {v}\n')


def save_binary(graph: CsrGraph, sink: BinaryIO) -> None:
	"""Write the KCG1 blob: magic | u64 n | u64 m2 | (n+1) u64 offsets | m2 u64 targets"""
	sink.write(GRAPH_MAGIC)
	sink.write(_HEADER.pack(graph.n, graph.m2))
	sink.write(graph.offsets.astype(_U64).tobytes())
	sink.write(graph.targets.astype(_U64).tobytes())


def _read_exact(source: BinaryIO, size: int, what: str) -> bytes:
	data = read_up_to(source, size)
	if len(data) != size:
		raise GraphFormatError(f'truncated stream while reading {what}: expected {size} bytes, got {len(data)}')
	return data


def load_binary(source: BinaryIO) -> CsrGraph:
	magic = source.read(len(GRAPH_MAGIC))
	if magic != GRAPH_MAGIC:
		raise GraphFormatError(f'bad magic {magic!r}, expected {GRAPH_MAGIC!r}')
	n, m2 = _HEADER.unpack(_read_exact(source, _HEADER.size, 'header'))
	if n >= 2**62 or m2 >= 2**62:
		raise GraphFormatError(f'implausible header n={n} m2={m2}')

	offsets = np.frombuffer(_read_exact(source, 8 * (n + 1), 'offsets'), dtype=_U64)
	targets = np.frombuffer(_read_exact(source, 8 * m2, 'targets'), dtype=_U64)
	if n > 0 and offsets.max() >= 2**62:
		raise GraphFormatError('offset out of range')
	if m2 > 0 and targets.max() >= 2**62:
		raise GraphFormatError('target out of range')

	graph = CsrGraph(n=int(n), offsets=offsets.astype(np.int64), targets=targets.astype(np.int64))
	graph.check_invariants()
	return graph


def load_graph(path: str | Path) -> CsrGraph:
	"""Load a KCG1 file, or a text edge list when the magic is absent"""
	path = Path(path)
	with open(path, 'rb') as f:
		head = f.read(len(GRAPH_MAGIC))
	if head == GRAPH_MAGIC:
		with open(path, 'rb') as f:
			return load_binary(f)
	try:
		with open(path, 'r', encoding='utf-8') as f:
			return from_edges(load_edge_list(f))
	except UnicodeDecodeError as e:
		raise GraphFormatError(f'{path} is neither a KCG1 file nor a text edge list') from e


def save_graph(graph: CsrGraph, path: str | Path, edge_list: bool = False) -> None:
	path = Path(path)
	path.parent.mkdir(parents=True, exist_ok=True)
	if edge_list:
		with open(path, 'w', encoding='utf-8') as f:
			write_edge_list(graph, f)
	else:
		with open(path, 'wb') as f:
			save_binary(graph, f)
