"""graph6 encoder/decoder plus sparse6 input.

graph6 layout: ``N(n)`` followed by the upper triangle of the adjacency matrix
in column order (``x(0,1) x(0,2) x(1,2) x(0,3) ...``), packed six bits per
byte, most significant bit first, each byte offset by 63.
"""

from __future__ import annotations

import logging
from typing import IO, Iterable, Iterator, Tuple, Union

import networkx as nx

from ctl.core.config import settings
from ctl.core.errors import GraphFormatError, SizingError
from ctl.core.graph import Graph

logger = logging.getLogger(__name__)

__all__ = ["parse_graph6", "emit_graph6", "parse_sparse6", "parse_graph", "read_graphs"]

GRAPH6_HEADER = b">>graph6<<"
SPARSE6_HEADER = b">>sparse6<<"

_MIN_BYTE = 63
_MAX_BYTE = 126


def _to_bytes(text: Union[bytes, str]) -> bytes:
    if isinstance(text, str):
        try:
            return text.encode("ascii")
        except UnicodeEncodeError as exc:
            raise GraphFormatError("non-ASCII character in graph6 input", offset=exc.start) from exc
    return bytes(text)


def _strip_newline(data: bytes) -> bytes:
    return data.rstrip(b"\r\n")


def _encode_n(n: int) -> bytes:
    if n <= 62:
        return bytes([n + _MIN_BYTE])
    if n <= 258047:
        return bytes([_MAX_BYTE] + [((n >> shift) & 0x3F) + _MIN_BYTE for shift in (12, 6, 0)])
    return bytes([_MAX_BYTE, _MAX_BYTE] + [((n >> shift) & 0x3F) + _MIN_BYTE for shift in (30, 24, 18, 12, 6, 0)])


def _decode_n(data: bytes, pos: int) -> Tuple[int, int]:
    """Return ``(n, next_pos)`` for the size header starting at ``pos``."""
    if pos >= len(data):
        raise GraphFormatError("missing size header", offset=pos)
    if data[pos] != _MAX_BYTE:
        return data[pos] - _MIN_BYTE, pos + 1
    if pos + 1 < len(data) and data[pos + 1] == _MAX_BYTE:
        width, start = 6, pos + 2
    else:
        width, start = 3, pos + 1
    if start + width > len(data):
        raise GraphFormatError("truncated size header", offset=len(data))
    n = 0
    for byte in data[start : start + width]:
        n = (n << 6) | (byte - _MIN_BYTE)
    return n, start + width


def emit_graph6(g: Graph) -> bytes:
    """Encode ``g`` as graph6 bytes under its current vertex order (no newline)."""
    out = bytearray(_encode_n(g.n))
    group = 0
    filled = 0
    for j in range(1, g.n):
        row = g.adj[j]
        for i in range(j):
            group = (group << 1) | ((row >> i) & 1)
            filled += 1
            if filled == 6:
                out.append(group + _MIN_BYTE)
                group = 0
                filled = 0
    if filled:
        out.append((group << (6 - filled)) + _MIN_BYTE)
    return bytes(out)


def parse_graph6(text: Union[bytes, str]) -> Graph:
    """Decode one graph6 string; a leading ``>>graph6<<`` header is accepted.

    Raises:
        GraphFormatError: malformed header, bytes outside ``63..126``, nonzero
            padding bits, truncated data or trailing garbage. ``offset`` is
            the index of the offending byte in ``text``.
        SizingError: the declared order exceeds the vertex cap.
    """
    data = _strip_newline(_to_bytes(text))
    pos = len(GRAPH6_HEADER) if data.startswith(GRAPH6_HEADER) else 0
    for offset in range(pos, len(data)):
        if not _MIN_BYTE <= data[offset] <= _MAX_BYTE:
            raise GraphFormatError(f"byte {data[offset]} outside 63..126", offset=offset)

    n, pos = _decode_n(data, pos)
    if n > settings.VERTEX_CAP:
        raise SizingError(f"graph6 input declares {n} vertices, above the cap of {settings.VERTEX_CAP}")
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    body = data[pos:]
    if len(body) < nbytes:
        raise GraphFormatError(f"truncated adjacency data: expected {nbytes} bytes, got {len(body)}", offset=len(data))
    if len(body) > nbytes:
        raise GraphFormatError("trailing garbage after adjacency data", offset=pos + nbytes)

    padding = nbytes * 6 - nbits
    if padding and (body[-1] - _MIN_BYTE) & ((1 << padding) - 1):
        raise GraphFormatError("nonzero padding bits", offset=len(data) - 1)

    adj = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = body[k // 6] - _MIN_BYTE
            if (byte >> (5 - k % 6)) & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            k += 1
    return Graph(n, adj)


def parse_sparse6(text: Union[bytes, str]) -> Graph:
    """Decode sparse6 through networkx; loops and multi-edges are rejected."""
    data = _strip_newline(_to_bytes(text))
    if data.startswith(SPARSE6_HEADER):
        data = data[len(SPARSE6_HEADER) :]
    try:
        G = nx.from_sparse6_bytes(data)
    except (nx.NetworkXError, ValueError, IndexError) as exc:
        raise GraphFormatError(f"invalid sparse6 data: {exc}") from exc
    if G.is_multigraph() or nx.number_of_selfloops(G):
        raise GraphFormatError("sparse6 input is not a simple graph")
    if G.number_of_nodes() > settings.VERTEX_CAP:
        raise SizingError(
            f"sparse6 input declares {G.number_of_nodes()} vertices, above the cap of {settings.VERTEX_CAP}"
        )
    return Graph.from_edges(G.number_of_nodes(), G.edges())


def parse_graph(text: Union[bytes, str]) -> Graph:
    """Decode either format, dispatching on the sparse6 ``:`` prefix or header."""
    data = _strip_newline(_to_bytes(text))
    if data.startswith(b":") or data.startswith(SPARSE6_HEADER):
        return parse_sparse6(data)
    return parse_graph6(data)


def read_graphs(stream: Union[IO[bytes], IO[str], Iterable[Union[bytes, str]]]) -> Iterator[Tuple[int, Graph]]:
    """Yield ``(line_number, graph)`` for each graph line of ``stream``.

    Blank lines and bare ``>>graph6<<`` / ``>>sparse6<<`` header lines are skipped.

    Errors are re-raised annotated with the 1-based line number.
    """
    for line_number, raw in enumerate(stream, start=1):
        try:
            line = _strip_newline(_to_bytes(raw)).strip()
            if not line or line in (GRAPH6_HEADER, SPARSE6_HEADER):
                continue
            graph = parse_graph(line)
        except GraphFormatError as exc:
            logger.error(f"Unparseable graph on line {line_number}: {exc}")
            raise exc.at_line(line_number) from exc
        yield line_number, graph
