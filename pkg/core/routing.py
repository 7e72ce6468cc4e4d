"""
TreeCode Hub - Routing Tables
Path-vector tables as labeled rooted trees and the TreeExplorer packet codec

Packet layout, bit-exact:
    byte 0     version/flags: 0x10 structure only, 0x11 with labels
    bytes 1-2  node count n, big-endian
    body       TreeExplorer codeword, then n labels of max(1, ceil(log2 n))
               bits each in traversal order, zero-padded to a byte boundary;
               bits are packed most-significant first

The body does not say where the structure codeword ends. Its length is fixed
by n and the leaf count, so the decoder tries each leaf count whose total fits
the byte count. It keeps the first whose tree re-encodes to exactly those bits
and whose labels and padding check out.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from bitarray import bitarray
from bitarray.util import ba2int, int2ba

from .analysis import label_width
from .codec import (CodingMethod, decode_pc, decode_td, encode_tree_explorer, lengths_for,
                    visit_order_pc, visit_order_td)
from .errors import CodecError, PacketError, RoutingTableError, TreeStructureError
from .tree import MAX_NODES, Tree, canonical_order

logger = logging.getLogger(__name__)

PACKET_VERSION = 0x1
FLAG_LABELS = 0x1
HEADER_BYTES = 3

Route = Tuple[int, Tuple[int, ...]]


@dataclass(frozen=True)
class LabeledTree:
    """Canonical tree with a distinct label in [0, n) on every node"""
    tree: Tree
    labels: Tuple[int, ...]

    def __post_init__(self):
        n = self.tree.n
        if len(self.labels) != n:
            raise RoutingTableError(f"{len(self.labels)} labels given for {n} nodes")
        if sorted(self.labels) != list(range(n)):
            raise RoutingTableError(f"labels must be a permutation of 0..{n - 1}")

    @property
    def n(self) -> int:
        return self.tree.n

    def label_of_root(self) -> int:
        return self.labels[0]


@dataclass(frozen=True)
class PathVectorTable:
    """Source label plus one hop sequence per destination, each starting at source"""
    source: int
    routes: Tuple[Route, ...] = ()

    def destinations(self) -> List[int]:
        return [destination for destination, _ in self.routes]

    def label_count(self) -> int:
        seen = {self.source}
        for _, hops in self.routes:
            seen.update(hops)
        return len(seen)


def make_table(source: int, routes: Union[Dict[int, Sequence[int]], Sequence[Sequence[int]]]) -> PathVectorTable:
    """Build a table from {destination: hops} or from a list of hop sequences"""
    if isinstance(routes, dict):
        pairs = [(dest, tuple(hops)) for dest, hops in routes.items()]
    else:
        pairs = []
        for hops in routes:
            if not hops:
                raise RoutingTableError("empty route")
            pairs.append((hops[-1], tuple(hops)))
    return PathVectorTable(source=source, routes=tuple(pairs))


def table_from_paths(table: PathVectorTable) -> LabeledTree:
    """Merge the routes of a path-vector table into one tree rooted at the source"""
    parent_of: Dict[int, Optional[int]] = {table.source: None}
    destinations = set()
    for destination, hops in table.routes:
        if destination in destinations:
            raise RoutingTableError(f"duplicate destination {destination}")
        destinations.add(destination)
        if len(hops) < 2 or hops[0] != table.source:
            raise RoutingTableError(f"route to {destination} does not start at source {table.source}")
        if hops[-1] != destination:
            raise RoutingTableError(f"route to {destination} ends at {hops[-1]}")
        if len(set(hops)) != len(hops):
            raise RoutingTableError(f"route to {destination} revisits a label")
        for previous, hop in zip(hops, hops[1:]):
            known = parent_of.get(hop, previous)
            if known != previous:
                raise RoutingTableError(f"label {hop} is reached through conflicting parents "
                                        f"{known} and {previous}")
            parent_of[hop] = previous

    n = len(parent_of)
    if sorted(parent_of) != list(range(n)):
        raise RoutingTableError(f"labels must be the dense range 0..{n - 1}")
    raw = [parent_of[label] for label in range(n)]
    try:
        tree, order = canonical_order(raw)
    except TreeStructureError as exc:
        raise RoutingTableError(f"routes do not form a tree: {exc}") from None
    return LabeledTree(tree=tree, labels=tuple(order))


def tree_to_table(labeled: LabeledTree) -> PathVectorTable:
    """One route per non-root node, sorted by destination"""
    tree, labels = labeled.tree, labeled.labels
    paths: List[Tuple[int, ...]] = [(labels[0],)]
    for node in range(1, tree.n):
        paths.append(paths[tree.parents[node]] + (labels[node],))
    routes = sorted((labels[node], paths[node]) for node in range(1, tree.n))
    return PathVectorTable(source=labels[0], routes=tuple(routes))


def baseline_path_vector_bits(table: PathVectorTable) -> int:
    """Cost of one message per destination listing every hop at ceil(log2 n) bits"""
    if not table.routes:
        return 0
    width = label_width(table.label_count())
    return sum(len(hops) * width for _, hops in table.routes)


# Packets

def _label_order(tree: Tree, method: CodingMethod) -> List[int]:
    return visit_order_pc(tree) if method is CodingMethod.PC else visit_order_td(tree)


def encode_packet(labeled: Union[LabeledTree, Tree], include_labels: bool = True) -> bytes:
    """Frame a tree, and optionally its labels, as a packet"""
    tree = labeled.tree if isinstance(labeled, LabeledTree) else labeled
    if include_labels and not isinstance(labeled, LabeledTree):
        raise PacketError("labels requested for an unlabeled tree")
    if not 1 <= tree.n <= MAX_NODES:
        raise PacketError(f"node count {tree.n} does not fit the 16-bit header")

    body = encode_tree_explorer(tree)
    if include_labels:
        width = label_width(tree.n)
        for node in _label_order(tree, CodingMethod(body[0])):
            label = labeled.labels[node]
            if not 0 <= label < tree.n:
                raise PacketError(f"label {label} out of range for {tree.n} nodes")
            body.extend(int2ba(label, length=width))

    flags = (PACKET_VERSION << 4) | (FLAG_LABELS if include_labels else 0)
    return bytes([flags]) + tree.n.to_bytes(2, "big") + body.tobytes()


def _structure_lengths(n: int, method: CodingMethod) -> List[int]:
    if n == 1:
        return [0]
    index = 0 if method is CodingMethod.PC else 1
    return sorted({lengths_for(n, l)[index] for l in range(1, n)})


def decode_packet(data: bytes, search_limit: Optional[int] = None
                  ) -> Tuple[Union[LabeledTree, Tree], bool]:
    """Parse a packet into a LabeledTree (or a bare Tree) and the labels flag"""
    if len(data) < HEADER_BYTES + 1:
        raise PacketError("truncated packet", len(data))
    flags = data[0]
    if flags >> 4 != PACKET_VERSION or flags & 0x0F & ~FLAG_LABELS:
        raise PacketError(f"unsupported version/flags byte 0x{flags:02X}", 0)
    has_labels = bool(flags & FLAG_LABELS)
    n = int.from_bytes(data[1:3], "big")
    if n < 1:
        raise PacketError("packet declares zero nodes", 1)

    body = bitarray()
    body.frombytes(bytes(data[HEADER_BYTES:]))
    total = len(body)
    method = CodingMethod(body[0])
    width = label_width(n) if has_labels else 0
    label_bits = n * width

    fitting = [s for s in _structure_lengths(n, method) if total - 8 < 1 + s + label_bits <= total]
    if not fitting:
        shortest = 1 + _structure_lengths(n, method)[0] + label_bits
        if shortest > total:
            raise PacketError(f"truncated body: {total} bits for {n} nodes", len(data))
        raise PacketError("body is longer than its structure and labels", len(data))

    # Keep the error of the attempt that got furthest: structure, labels, padding
    best: Tuple[int, Optional[PacketError]] = (-1, None)
    for length in fitting:
        end = 1 + length
        try:
            decoder = decode_pc if method is CodingMethod.PC else decode_td
            tree = decoder(body[1:end], n, search_limit)
        except CodecError as exc:
            if best[0] < 0:
                best = (0, PacketError(f"structure decode failed: {exc}", HEADER_BYTES))
            continue
        if encode_tree_explorer(tree) != body[:end]:
            # Labels follow the traversal of the tree the sender coded
            if best[0] < 0:
                best = (0, PacketError("structure codeword is not canonical", HEADER_BYTES))
            continue

        labels: List[int] = [0] * n
        if has_labels:
            values = [ba2int(body[end + k * width:end + (k + 1) * width]) for k in range(n)]
            if any(v >= n for v in values) or len(set(values)) != n:
                if best[0] < 1:
                    best = (1, PacketError("labels are not a permutation of 0..n-1",
                                           HEADER_BYTES + end // 8))
                continue
            for node, value in zip(_label_order(tree, method), values):
                labels[node] = value

        if body[end + label_bits:].any():
            best = (2, PacketError("nonzero padding bits", len(data) - 1))
            continue

        logger.debug("decoded %d-node packet with %d-bit structure", n, length)
        if has_labels:
            return LabeledTree(tree=tree, labels=tuple(labels)), True
        return tree, False
    raise best[1]


# Route-list text

def read_route_list(text: str) -> PathVectorTable:
    """Parse 'source <label>' followed by one space-separated route per line"""
    lines = [(number, line.split()) for number, line in enumerate(text.splitlines(), 1)]
    lines = [(number, tokens) for number, tokens in lines if tokens]
    if not lines or lines[0][1][0] != "source" or len(lines[0][1]) != 2:
        raise RoutingTableError("route list must start with 'source <label>'", 1)
    try:
        source = int(lines[0][1][1])
        routes = [[int(token) for token in tokens] for _, tokens in lines[1:]]
    except ValueError as exc:
        raise RoutingTableError(f"route list holds a non-integer label: {exc}") from None
    return make_table(source, routes)


def write_route_list(table: PathVectorTable) -> str:
    lines = [f"source {table.source}"]
    lines.extend(" ".join(str(hop) for hop in hops) for _, hops in table.routes)
    return "\n".join(lines) + "\n"
