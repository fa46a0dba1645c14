import io
import struct

import numpy as np
import pytest

from kcore_peel import utils
from kcore_peel.graph.service import (
	from_edges,
	load_binary,
	load_edge_list,
	load_graph,
	save_binary,
	save_graph,
	write_edge_list,
)
from kcore_peel.graph.views import (
	CsrGraph,
	EdgeList,
	EdgeListParseError,
	GraphFormatError,
	InputRangeError,
)


def test_from_edges_merges_duplicates_and_drops_self_loops():
	graph = from_edges(EdgeList(n=3, edges=[(0, 1), (1, 0), (1, 1), (1, 2)]))
	assert graph.degrees().tolist() == [1, 2, 1]
	assert list(graph.edges()) == [(0, 1), (1, 2)]
	graph.check_invariants()


def test_from_edges_empty_and_clique(k4):
	empty = from_edges(EdgeList(n=2, edges=[]))
	assert empty.degrees().tolist() == [0, 0]
	assert empty.m2 == 0

	assert k4.degrees().tolist() == [3, 3, 3, 3]
	assert k4.m == 6
	assert k4.neighbors(0).tolist() == [1, 2, 3]


def test_from_edges_rejects_out_of_range_endpoint():
	with pytest.raises(InputRangeError):
		from_edges(EdgeList(n=2, edges=[(0, 2)]))


def test_load_edge_list():
	edges = load_edge_list(io.StringIO('0 1\n1 2\n'))
	assert edges.n == 3
	assert edges.pairs() == [(0, 1), (1, 2)]

	declared = load_edge_list(io.StringIO('# 5\n0 1\n'))
	assert declared.n == 5
	assert declared.pairs() == [(0, 1)]


def test_load_edge_list_skips_comments():
	edges = load_edge_list(io.StringIO('% generated\n\n# not a header\n3 4\n'))
	assert edges.n == 5
	assert edges.pairs() == [(3, 4)]


def test_load_edge_list_reports_line_number():
	with pytest.raises(EdgeListParseError) as exc_info:
		load_edge_list(io.StringIO('0 x\n'))
	assert exc_info.value.line_number == 1
	assert 'line 1' in str(exc_info.value)

	with pytest.raises(EdgeListParseError) as exc_info:
		load_edge_list(io.StringIO('0 1\n2\n'))
	assert exc_info.value.line_number == 2


def test_load_edge_list_rejects_ids_above_declared_n():
	with pytest.raises(InputRangeError):
		load_edge_list(io.StringIO('# 2\n0 5\n'))


def test_binary_round_trip(k4):
	buffer = io.BytesIO()
	save_binary(k4, buffer)
	blob = buffer.getvalue()
	assert blob[:4] == b'KCG1'
	assert len(blob) % 8 == 4
	assert load_binary(io.BytesIO(blob)) == k4


def test_binary_empty_graph():
	buffer = io.BytesIO()
	save_binary(from_edges(EdgeList(n=0)), buffer)
	graph = load_binary(io.BytesIO(buffer.getvalue()))
	assert graph.n == 0
	assert graph.m2 == 0


def test_binary_rejects_bad_magic_and_truncation(k4):
	with pytest.raises(GraphFormatError):
		load_binary(io.BytesIO(b'NOPE' + b'\0' * 16))

	buffer = io.BytesIO()
	save_binary(k4, buffer)
	with pytest.raises(GraphFormatError):
		load_binary(io.BytesIO(buffer.getvalue()[:-8]))


@pytest.mark.parametrize('n,m2', [(2**61, 0), (1000, 2**60), (3, 0)])
def test_binary_header_counts_beyond_the_payload_are_truncation(n, m2):
	with pytest.raises(GraphFormatError, match='truncated'):
		load_binary(io.BytesIO(b'KCG1' + struct.pack('<QQ', n, m2)))


def test_read_up_to_crosses_chunks_and_stops_at_eof(monkeypatch):
	monkeypatch.setattr(utils, 'READ_CHUNK', 3)
	assert utils.read_up_to(io.BytesIO(b'abcdefgh'), 7) == b'abcdefg'
	assert utils.read_up_to(io.BytesIO(b'abcdefgh'), 2**70) == b'abcdefgh'
	assert utils.read_up_to(io.BytesIO(b'abc'), 0) == b''


def test_binary_rejects_offsets_not_matching_m2(k4):
	buffer = io.BytesIO()
	save_binary(k4, buffer)
	blob = bytearray(buffer.getvalue())
	# offsets[n] sits right after the 20-byte header and n offsets
	last_offset = 4 + 16 + 8 * k4.n
	blob[last_offset : last_offset + 8] = (7).to_bytes(8, 'little')
	with pytest.raises(GraphFormatError):
		load_binary(io.BytesIO(bytes(blob)))


def test_check_invariants_rejects_asymmetric_graph():
	graph = CsrGraph(n=2, offsets=np.array([0, 1, 1]), targets=np.array([1]))
	with pytest.raises(GraphFormatError, match='symmetric'):
		graph.check_invariants()


def test_edge_list_text_round_trip(hcns3):
	stream = io.StringIO()
	write_edge_list(hcns3, stream)
	stream.seek(0)
	assert from_edges(load_edge_list(stream)) == hcns3


def test_load_graph_sniffs_format(tmp_path, k4):
	binary = tmp_path / 'k4.kcg'
	text = tmp_path / 'k4.txt'
	save_graph(k4, binary)
	save_graph(k4, text, edge_list=True)
	assert load_graph(binary) == k4
	assert load_graph(text) == k4


def test_graph_arrays_are_read_only(k4):
	with pytest.raises(ValueError):
		k4.targets[0] = 3
