"""
TreeCode Hub - Newick Format
Parentheses-and-commas text for trees, with optional integer node labels
"""

from typing import List, Optional, Sequence, Tuple, Union

from .errors import NewickError
from .tree import Tree, TreeStats, canonical_order


def emit_newick(tree: Tree, labels: Optional[Sequence[int]] = None) -> str:
    """Render a tree as Newick text in canonical child order.

    Leaves are empty (or their label); an internal node is "(child,child,...)"
    followed by its label when labels are given.
    """
    if labels is not None and len(labels) != tree.n:
        raise NewickError(f"{len(labels)} labels given for {tree.n} nodes")

    def label_of(node: int) -> str:
        return "" if labels is None else str(labels[node])

    parts: List[str] = []
    # Work items are node indices or literal text still to be written
    stack: List[Union[int, str]] = [0]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            parts.append(item)
            continue
        children = tree.children(item)
        if not children:
            parts.append(label_of(item))
            continue
        parts.append("(")
        stack.append(")" + label_of(item))
        for position in range(len(children) - 1, -1, -1):
            stack.append(children[position])
            if position > 0:
                stack.append(",")
    return "".join(parts) + ";"


def parse_newick(text: str) -> Tuple[Tree, Optional[List[int]]]:
    """Parse Newick text, canonicalize the shape and carry labels along"""
    text = text.strip()
    if not text:
        raise NewickError("empty Newick text", 0)

    parents: List[Optional[int]] = [None]
    raw_labels: List[Optional[str]] = [None]
    current = 0
    index = 0
    terminated = False
    while index < len(text):
        char = text[index]
        if terminated:
            raise NewickError("trailing characters after ';'", index)
        if char == ";":
            if current != 0:
                raise NewickError("unbalanced parentheses: ';' inside a subtree", index)
            terminated = True
        elif char == "(":
            parents.append(current)
            raw_labels.append(None)
            current = len(parents) - 1
        elif char == ",":
            if parents[current] is None:
                raise NewickError("',' outside any parentheses", index)
            parents.append(parents[current])
            raw_labels.append(None)
            current = len(parents) - 1
        elif char == ")":
            if parents[current] is None:
                raise NewickError("unbalanced parentheses: unexpected ')'", index)
            current = parents[current]
        elif char.isdigit():
            start = index
            while index + 1 < len(text) and text[index + 1].isdigit():
                index += 1
            if raw_labels[current] is not None:
                raise NewickError("node carries two labels", start)
            raw_labels[current] = text[start:index + 1]
        elif char.isspace():
            pass
        else:
            raise NewickError(f"unexpected character {char!r}", index)
        index += 1

    if not terminated:
        raise NewickError("missing ';' terminator", len(text))

    labeled = [label is not None for label in raw_labels]
    if any(labeled) and not all(labeled):
        raise NewickError("either every node or no node must carry a label")

    tree, order = canonical_order(parents)
    if not any(labeled):
        return tree, None
    return tree, [int(raw_labels[original]) for original in order]


def newick_bit_length(tree_stats: TreeStats) -> int:
    """Bits for unlabeled Newick text: 2 bits per '(' ')' ',' plus a 1-bit terminator"""
    return 4 * tree_stats.n - 2 * tree_stats.l - 1
