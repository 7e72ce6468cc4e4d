"""
TreeCode Hub - Tree Structure Codes
Pit-climbing (PC), Tunnel-digging (TD) and the TreeExplorer hybrid

Both traversals log ternary moves which are rendered in binary with one
two-bit symbol: PC uses climb-new 1, fall 0, climb-seen 00; TD uses leaf 1,
tunnel 0, internal 00. The node count n always travels out of band.

The binary renderings are not uniquely decodable: distinct trees can share a
codeword (the smallest TD case has 5 nodes, PC 7, TreeExplorer 6). Decoders
therefore return a canonical tree whose codeword equals the input, searching
parses with backtracking; ``decode_candidates`` lists every such tree.
"""

import logging
from enum import Enum
from typing import Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

from bitarray import bitarray

from .errors import CodecError
from .tree import Tree, TreeStats, from_level_sequence, stats

logger = logging.getLogger(__name__)

BitString = bitarray

DEFAULT_SEARCH_LIMIT = 200_000


class CodingMethod(Enum):
    """Structure code selected by the TreeExplorer prefix bit"""
    PC = 0
    TD = 1


class Move(Enum):
    """Pit-climbing moves"""
    CLIMB_NEW = "↑"
    CLIMB_SEEN = "⇑"
    FALL = "↓"


class Dig(Enum):
    """Tunnel-digging moves"""
    LEAF = "←"
    INTERNAL = "→"
    TUNNEL = "⇒"


PC_BITS = {Move.CLIMB_NEW: "1", Move.FALL: "0", Move.CLIMB_SEEN: "00"}
TD_BITS = {Dig.LEAF: "1", Dig.TUNNEL: "0", Dig.INTERNAL: "00"}


class CodeLengths(NamedTuple):
    pc: int
    td: int
    te: int


def as_bitstring(bits: Union[BitString, str]) -> BitString:
    """Accept a bitarray or an ASCII '0'/'1' string"""
    if isinstance(bits, bitarray):
        return bits
    text = bits.strip()
    if any(ch not in "01" for ch in text):
        raise CodecError("codeword text may only contain '0' and '1'")
    return bitarray(text)


def render_trace(trace: Sequence[Enum]) -> str:
    return "".join(move.value for move in trace)


# Traversals

def _pc_walk(tree: Tree) -> Tuple[List[Move], List[int]]:
    children = [tree.children(node) for node in range(tree.n)]
    explored = [0] * tree.n
    seen = [False] * tree.n

    cur = 0
    while children[cur]:
        explored[cur] = 1
        cur = children[cur][0]
    seen[cur] = True
    order = [cur]
    moves: List[Move] = []

    while True:
        if explored[cur] < len(children[cur]):
            # Fall to the leftmost leaf of the leftmost unexplored subtree
            target = children[cur][explored[cur]]
            explored[cur] += 1
            while children[target]:
                explored[target] = 1
                target = children[target][0]
            moves.append(Move.FALL)
            seen[target] = True
            order.append(target)
            cur = target
            continue
        if cur == 0:
            break
        parent = tree.parents[cur]
        if seen[parent]:
            moves.append(Move.CLIMB_SEEN)
        else:
            moves.append(Move.CLIMB_NEW)
            seen[parent] = True
            order.append(parent)
        cur = parent
    return moves, order


def _td_walk(tree: Tree) -> Tuple[List[Dig], List[int]]:
    moves: List[Dig] = []
    order = [0]
    groups = [tree.children(0)] if tree.children(0) else []
    index = 0
    while index < len(groups):
        if index > 0:
            moves.append(Dig.TUNNEL)
        for node in groups[index]:
            order.append(node)
            if tree.is_leaf(node):
                moves.append(Dig.LEAF)
            else:
                moves.append(Dig.INTERNAL)
                groups.append(tree.children(node))
        index += 1
    return moves, order


def trace_pc(tree: Tree) -> List[Move]:
    """Ternary pit-climbing trace"""
    return _pc_walk(tree)[0]


def trace_td(tree: Tree) -> List[Dig]:
    """Ternary tunnel-digging trace"""
    return _td_walk(tree)[0]


def visit_order_pc(tree: Tree) -> List[int]:
    """Nodes in the order pit-climbing first reaches them"""
    return _pc_walk(tree)[1]


def visit_order_td(tree: Tree) -> List[int]:
    """Root first, then nodes in tunnel-digging logging order"""
    return _td_walk(tree)[1]


def _render(trace: Sequence[Enum], table) -> BitString:
    return bitarray("".join(table[move] for move in trace))


def encode_pc(tree: Tree) -> BitString:
    return _render(trace_pc(tree), PC_BITS)


def encode_td(tree: Tree) -> BitString:
    return _render(trace_td(tree), TD_BITS)


def select_method(tree_stats: TreeStats) -> CodingMethod:
    """PC when fewer than half of the nodes are leaves, TD otherwise"""
    return CodingMethod.PC if 2 * tree_stats.l < tree_stats.n else CodingMethod.TD


def encode_tree_explorer(tree: Tree) -> BitString:
    method = select_method(stats(tree))
    bits = bitarray([method.value])
    bits.extend(encode_pc(tree) if method is CodingMethod.PC else encode_td(tree))
    return bits


def encode(tree: Tree, method: str) -> BitString:
    """Encode with 'pc', 'td' or 'te'"""
    encoders = {"pc": encode_pc, "td": encode_td, "te": encode_tree_explorer}
    if method not in encoders:
        raise CodecError(f"unknown coding method {method!r}")
    return encoders[method](tree)


def code_lengths(tree_stats: TreeStats) -> CodeLengths:
    """Closed-form codeword lengths for a tree with n nodes and l leaves"""
    return lengths_for(tree_stats.n, tree_stats.l)


def lengths_for(n: int, l: int) -> CodeLengths:
    if n == 1:
        return CodeLengths(pc=0, td=0, te=1)
    pc = n + 2 * l - 3
    td = 3 * n - 2 * l - 3
    return CodeLengths(pc=pc, td=td, te=min(pc, td) + 1)


# Decoding

class _SearchExhausted(Exception):
    pass


class _Shapes:
    """Interned subtree shapes keyed by their child shapes in visiting order"""

    def __init__(self):
        self._ids = {}
        self.levels: List[Tuple[int, ...]] = []

    def intern(self, children: Sequence[int]) -> int:
        key = tuple(children)
        shape = self._ids.get(key)
        if shape is None:
            seq = [0]
            for child in key:
                seq.extend(d + 1 for d in self.levels[child])
            shape = len(self.levels)
            self.levels.append(tuple(seq))
            self._ids[key] = shape
        return shape

    def less(self, a: int, b: int) -> bool:
        # Tuple order on level sequences is the canonical sibling order
        return self.levels[a] < self.levels[b]

    def tree(self, shape: int) -> Tree:
        return from_level_sequence(self.levels[shape])


class _CodewordParser:
    """Backtracking parse of a codeword into traversal moves.

    Subclasses describe a small automaton over (position, ...) states, which
    is enough to decide whether a parse can still be completed, and a
    structural replay (enter/leave) that builds subtree shapes and, in strict
    mode, rejects a move that breaks canonical child order.

    Strict mode also remembers dead ends: a state together with its
    ``signature`` (the shapes still waiting to be attached) fixes every
    continuation, so once one was searched without an accepted parse it is
    skipped wherever it shows up again.
    """

    def __init__(self, bits: str, strict: bool, limit: Optional[int]):
        self.bits = bits
        self.strict = strict
        self.limit = limit
        self.steps = 0
        self.shapes = _Shapes()
        self._live = {}
        self._dead = set()
        # zeros_after[p]: zero bits at positions >= p, bounds pending returns
        self.zeros_after = [0] * (len(bits) + 1)
        for pos in range(len(bits) - 1, -1, -1):
            self.zeros_after[pos] = self.zeros_after[pos + 1] + (bits[pos] == "0")

    def initial_state(self):
        raise NotImplementedError

    def successors(self, state) -> List[Tuple[Enum, tuple]]:
        raise NotImplementedError

    def is_final(self, state) -> bool:
        raise NotImplementedError

    def reset(self):
        raise NotImplementedError

    def enter(self, move) -> bool:
        raise NotImplementedError

    def leave(self, move):
        raise NotImplementedError

    def signature(self) -> tuple:
        raise NotImplementedError

    def accept(self) -> Optional[Tree]:
        raise NotImplementedError

    def _completable(self, state) -> bool:
        live = self._live
        if state in live:
            return live[state]
        pending = [state]
        while pending:
            top = pending[-1]
            if top in live:
                pending.pop()
                continue
            nxt = [s for _, s in self.successors(top)]
            unknown = [s for s in nxt if s not in live]
            if unknown:
                pending.extend(unknown)
                continue
            live[top] = self.is_final(top) or any(live[s] for s in nxt)
            pending.pop()
        return live[state]

    def parses(self) -> Iterator[Tree]:
        """Yield the tree of every accepted parse in search order"""
        self.reset()
        start = self.initial_state()
        if not self._completable(start):
            return
        accepted = 0
        # frame: state, options, next option, dead-end key, accepted on entry
        frames = [[start, self._options(start), 0, None, 0]]
        path: List[Enum] = []
        while frames:
            frame = frames[-1]
            state, options = frame[0], frame[1]
            if frame[2] == 0 and self.is_final(state):
                frame[2] = len(options) + 1
                tree = self.accept()
                if tree is not None:
                    accepted += 1
                    yield tree
            if frame[2] >= len(options):
                frames.pop()
                if frame[3] is not None and accepted == frame[4]:
                    self._dead.add(frame[3])
                if path:
                    self.leave(path.pop())
                continue
            frame[2] += 1
            move, nxt = options[frame[2] - 1]
            self.steps += 1
            if self.limit is not None and self.steps > self.limit:
                raise _SearchExhausted()
            if not self.enter(move):
                continue
            key = None
            if self.strict:
                key = (nxt, self.signature())
                if key in self._dead:
                    self.leave(move)
                    continue
            path.append(move)
            frames.append([nxt, self._options(nxt), 0, key, accepted])

    def _options(self, state):
        return [(m, s) for m, s in self.successors(state) if self._completable(s)]


class _PitClimbingParser(_CodewordParser):
    # state: (position, fall origins pending, standing on a fresh leaf)

    def initial_state(self):
        return (0, 0, True)

    def successors(self, state):
        pos, depth, at_leaf = state
        bits = self.bits
        if pos >= len(bits):
            return []
        if bits[pos] == "1":
            return [(Move.CLIMB_NEW, (pos + 1, depth, False))]
        out = []
        if depth > 0 and pos + 1 < len(bits) and bits[pos + 1] == "0":
            out.append((Move.CLIMB_SEEN, (pos + 2, depth - 1, False)))
        # Each pending fall origin still needs a two-bit climb-seen
        if not at_leaf and 2 * (depth + 1) <= self.zeros_after[pos + 1]:
            out.append((Move.FALL, (pos + 1, depth + 1, True)))
        return out

    def is_final(self, state):
        return state[0] == len(self.bits) and state[1] == 0

    def reset(self):
        # cur: child shapes of the node we stand on; origins: the same for
        # every node we fell from and have not climbed back to
        self.cur: List[int] = []
        self.origins: List[List[int]] = []
        self.history: List[Optional[List[int]]] = []

    def _fits(self, children: List[int]) -> bool:
        """The subtree growing under the innermost fall origin may not pass
        the sibling before it. Later moves only extend its level sequence."""
        if not self.origins:
            return True
        left = self.origins[-1][-1]
        return not self.shapes.less(left, self.shapes.intern(children))

    def enter(self, move) -> bool:
        if move is Move.FALL:
            self.origins.append(self.cur)
            self.history.append(None)
            self.cur = []
            return True
        shape = self.shapes.intern(self.cur)
        if move is Move.CLIMB_NEW:
            if self.strict and not self._fits([shape]):
                return False
            self.history.append(self.cur)
            self.cur = [shape]
            return True
        up = self.origins[-1]
        if self.strict and self.shapes.less(up[-1], shape):
            return False
        self.origins.pop()
        up.append(shape)
        if self.strict and not self._fits(up):
            up.pop()
            self.origins.append(up)
            return False
        self.history.append(self.cur)
        self.cur = up
        return True

    def leave(self, move):
        previous = self.history.pop()
        if move is Move.FALL:
            self.cur = self.origins.pop()
            return
        if move is Move.CLIMB_SEEN:
            self.cur.pop()
            self.origins.append(self.cur)
        self.cur = previous

    def signature(self):
        return tuple(tuple(o) for o in self.origins), tuple(self.cur)

    def accept(self) -> Optional[Tree]:
        tree = self.shapes.tree(self.shapes.intern(self.cur))
        if self.strict and encode_pc(tree).to01() != self.bits:
            return None
        return tree


_EMPTY, _LEAVES, _INTERNALS = range(3)


class _TunnelDiggingParser(_CodewordParser):
    """Reads the codeword back to front.

    Backwards, a child group is complete before the internal move that owns
    it, so every group is closed into a shape at its tunnel and queued.
    Internal moves claim queued shapes first in, first out. Within a group,
    leaves come first and shapes must not shrink.
    """
    # state: (position, queued shapes, group phase)

    def __init__(self, bits: str, strict: bool, limit: Optional[int]):
        super().__init__(bits[::-1], strict, limit)
        self.text = bits

    def initial_state(self):
        return (0, 0, _EMPTY)

    def successors(self, state):
        pos, queued, phase = state
        bits = self.bits
        if pos >= len(bits):
            return []
        if bits[pos] == "1":
            if self.strict and phase == _INTERNALS:
                return []
            return [(Dig.LEAF, (pos + 1, queued, max(phase, _LEAVES)))]
        out = []
        if pos + 1 < len(bits) and bits[pos + 1] == "0" and queued:
            out.append((Dig.INTERNAL, (pos + 2, queued - 1, _INTERNALS)))
        # Each queued shape still needs a two-bit internal move
        if phase != _EMPTY and 2 * (queued + 1) <= self.zeros_after[pos + 1]:
            out.append((Dig.TUNNEL, (pos + 1, queued + 1, _EMPTY)))
        return out

    def is_final(self, state):
        pos, queued, phase = state
        if not self.bits:
            return pos == 0
        return pos == len(self.bits) and queued == 0 and phase != _EMPTY

    def reset(self):
        self.leaf = self.shapes.intern(())
        self.queue: List[int] = []
        self.head = 0
        self.group: List[int] = []
        self.history: List[List[int]] = []

    def enter(self, move) -> bool:
        if move is Dig.TUNNEL:
            self.queue.append(self.shapes.intern(self.group[::-1]))
            self.history.append(self.group)
            self.group = []
            return True
        shape = self.leaf if move is Dig.LEAF else self.queue[self.head]
        if self.strict and self.group and self.shapes.less(shape, self.group[-1]):
            return False
        if move is Dig.INTERNAL:
            self.head += 1
        self.group.append(shape)
        return True

    def leave(self, move):
        if move is Dig.TUNNEL:
            self.queue.pop()
            self.group = self.history.pop()
            return
        self.group.pop()
        if move is Dig.INTERNAL:
            self.head -= 1

    def signature(self):
        return tuple(self.queue[self.head:]), tuple(self.group)

    def accept(self) -> Optional[Tree]:
        tree = self.shapes.tree(self.shapes.intern(self.group[::-1]))
        if self.strict and encode_td(tree).to01() != self.text:
            return None
        return tree


_PARSERS = {CodingMethod.PC: _PitClimbingParser, CodingMethod.TD: _TunnelDiggingParser}


def _check_node_count(bits: str, n: int, method: CodingMethod):
    if n < 1:
        raise CodecError(f"node count must be at least 1, got {n}")
    ones = bits.count("1")
    zeros = len(bits) - ones
    if n == 1:
        if bits:
            raise CodecError("a single-node tree has an empty codeword", 0)
        return
    # Every fall pairs with a climb-seen (PC); every internal node with a tunnel (TD)
    if zeros % 3 != 0 or 1 + ones + zeros // 3 != n:
        raise CodecError(f"codeword of {len(bits)} bits cannot describe {n} nodes "
                         f"with {method.name}")


def _decode(bits, n: int, method: CodingMethod, search_limit: Optional[int]) -> Tree:
    text = as_bitstring(bits).to01()
    _check_node_count(text, n, method)
    parser_cls = _PARSERS[method]
    limit = DEFAULT_SEARCH_LIMIT if search_limit is None else search_limit

    strict = parser_cls(text, strict=True, limit=limit)
    try:
        for tree in strict.parses():
            logger.debug("%s decode took %d steps", method.name, strict.steps)
            return tree
    except _SearchExhausted:
        raise CodecError(f"no canonical {method.name} parse found within {limit} "
                         f"search steps") from None

    # Only an unsorted tree traced this codeword; read it as written
    logger.info("%s codeword %s has no canonical parse", method.name, text)
    loose = parser_cls(text, strict=False, limit=None)
    for tree in loose.parses():
        return tree
    raise CodecError(f"malformed {method.name} codeword for {n} nodes")


def decode_pc(bits, n: int, search_limit: Optional[int] = None) -> Tree:
    """Return a canonical tree whose PC codeword is ``bits``"""
    return _decode(bits, n, CodingMethod.PC, search_limit)


def decode_td(bits, n: int, search_limit: Optional[int] = None) -> Tree:
    """Return a canonical tree whose TD codeword is ``bits``"""
    return _decode(bits, n, CodingMethod.TD, search_limit)


def decode_tree_explorer(bits, n: int, search_limit: Optional[int] = None) -> Tree:
    """Dispatch on the prefix bit and decode the rest"""
    bits = as_bitstring(bits)
    if not len(bits):
        raise CodecError("empty TreeExplorer codeword", 0)
    method = CodingMethod(bits[0])
    return _decode(bits[1:], n, method, search_limit)


def decode(bits, n: int, method: str, search_limit: Optional[int] = None) -> Tree:
    """Decode with 'pc', 'td' or 'te'"""
    decoders = {"pc": decode_pc, "td": decode_td, "te": decode_tree_explorer}
    if method not in decoders:
        raise CodecError(f"unknown coding method {method!r}")
    return decoders[method](bits, n, search_limit)


def decode_candidates(bits, n: int, method: str) -> List[Tree]:
    """Every distinct canonical tree whose ``method`` codeword equals ``bits``.

    Runs the search to the end without a step limit, so keep n small
    (14 nodes is comfortable).
    """
    bits = as_bitstring(bits)
    if method == "te":
        if not len(bits):
            raise CodecError("empty TreeExplorer codeword", 0)
        coding = CodingMethod(bits[0])
        body = bits[1:]
    elif method in ("pc", "td"):
        coding = CodingMethod[method.upper()]
        body = bits
    else:
        raise CodecError(f"unknown coding method {method!r}")
    text = body.to01()
    _check_node_count(text, n, coding)
    found: List[Tree] = []
    for tree in _PARSERS[coding](text, strict=True, limit=None).parses():
        if tree not in found:
            found.append(tree)
    return found
