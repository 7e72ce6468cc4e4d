"""
Tests for path-vector tables, labeled trees and the TreeExplorer packet
"""

import heapq
import itertools
import random

import pytest

from core.analysis import label_width
from core.codec import encode_tree_explorer
from core.errors import PacketError, RoutingTableError
from core.routing import (LabeledTree, PathVectorTable, baseline_path_vector_bits, decode_packet,
                          encode_packet, make_table, read_route_list, table_from_paths,
                          tree_to_table, write_route_list)
from core.tree import canonicalize, enumerate_trees


def random_table(rng, n):
    """Routes of a random recursive tree on labels 0..n-1, source label random"""
    labels = list(range(n))
    rng.shuffle(labels)
    paths = {labels[0]: [labels[0]]}
    for node in range(1, n):
        parent = labels[rng.randrange(node)]
        paths[labels[node]] = paths[parent] + [labels[node]]
    routes = {dest: hops for dest, hops in paths.items() if dest != labels[0]}
    return make_table(labels[0], routes)


def random_labeled_table(rng, n):
    """Routes of a uniformly random labeled tree, built from a Prufer sequence"""
    edges = [(0, 1)] if n == 2 else []
    if n > 2:
        sequence = [rng.randrange(n) for _ in range(n - 2)]
        degree = [1] * n
        for label in sequence:
            degree[label] += 1
        leaves = [label for label in range(n) if degree[label] == 1]
        heapq.heapify(leaves)
        for label in sequence:
            edges.append((heapq.heappop(leaves), label))
            degree[label] -= 1
            if degree[label] == 1:
                heapq.heappush(leaves, label)
        edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    neighbours = {label: [] for label in range(n)}
    for a, b in edges:
        neighbours[a].append(b)
        neighbours[b].append(a)
    source = rng.randrange(n)
    paths = {source: [source]}
    queue = [source]
    for label in queue:
        for other in neighbours[label]:
            if other not in paths:
                paths[other] = paths[label] + [other]
                queue.append(other)
    return make_table(source, {dest: hops for dest, hops in paths.items() if dest != source})


def chain2():
    return LabeledTree(tree=canonicalize([None, 0]), labels=(1, 0))


# Tables

def test_chain_from_paths(path3):
    lt = table_from_paths(make_table(0, {1: [0, 1], 2: [0, 1, 2]}))
    assert lt.tree == path3
    assert lt.labels == (0, 1, 2)


def test_star_from_paths(star3):
    lt = table_from_paths(make_table(0, {1: [0, 1], 2: [0, 2]}))
    assert lt.tree == star3
    assert lt.label_of_root() == 0
    assert sorted(lt.labels[1:]) == [1, 2]


def test_tree_to_table_examples():
    chain = LabeledTree(tree=canonicalize([None, 0, 1]), labels=(0, 1, 2))
    assert tree_to_table(chain) == PathVectorTable(0, ((1, (0, 1)), (2, (0, 1, 2))))
    single = LabeledTree(tree=canonicalize([None]), labels=(0,))
    assert tree_to_table(single) == PathVectorTable(0, ())
    star = LabeledTree(tree=canonicalize([None, 0, 0]), labels=(0, 2, 1))
    assert tree_to_table(star).routes == ((1, (0, 1)), (2, (0, 2)))


@pytest.mark.parametrize("source,routes", [
    (0, [[0, 1, 2], [0, 2]]),
    (0, [[1, 2]]),
    (0, [[0, 1, 2], [0, 3, 2, 4]]),
    (0, [[0, 5]]),
    (0, [[0, 1, 0, 2]]),
    (0, [[0]]),
    (0, [[]]),
])
def test_inconsistent_tables(source, routes):
    with pytest.raises(RoutingTableError):
        table_from_paths(make_table(source, routes))


def test_route_must_end_at_destination():
    with pytest.raises(RoutingTableError):
        table_from_paths(make_table(0, {2: [0, 1]}))


def test_labeled_tree_validates_labels():
    with pytest.raises(RoutingTableError):
        LabeledTree(tree=canonicalize([None, 0]), labels=(0, 0))
    with pytest.raises(RoutingTableError):
        LabeledTree(tree=canonicalize([None, 0]), labels=(0, 1, 2))


def test_table_round_trip_random():
    rng = random.Random(42)
    for _ in range(300):
        table = random_table(rng, rng.randint(1, 500))
        lt = table_from_paths(table)
        assert table_from_paths(tree_to_table(lt)) == lt
        assert sorted(tree_to_table(lt).routes) == sorted((d, tuple(h)) for d, h in table.routes)


def test_baseline_cost():
    chain = make_table(0, {1: [0, 1], 2: [0, 1, 2]})
    assert baseline_path_vector_bits(chain) == 10
    assert baseline_path_vector_bits(make_table(0, {})) == 0
    star = make_table(0, {k: [0, k] for k in range(1, 5)})
    assert baseline_path_vector_bits(star) == 24


def test_route_list_text():
    table = read_route_list("source 0\n0 1\n\n0 1 2\n")
    assert table_from_paths(table).labels == (0, 1, 2)
    text = write_route_list(tree_to_table(table_from_paths(table)))
    assert text == "source 0\n0 1\n0 1 2\n"
    assert read_route_list("source 3\n").routes == ()


@pytest.mark.parametrize("text", ["", "0 1\n", "source\n", "source 0\n0 x\n"])
def test_route_list_errors(text):
    with pytest.raises(RoutingTableError):
        read_route_list(text)


# Packets

def test_packet_goldens(star3):
    assert encode_packet(chain2()) == bytes.fromhex("110002E0")
    single = LabeledTree(tree=canonicalize([None]), labels=(0,))
    assert encode_packet(single) == bytes.fromhex("11000180")
    assert encode_packet(star3, include_labels=False) == bytes.fromhex("100003E0")


def test_packet_golden_decodes(star3):
    assert decode_packet(bytes.fromhex("110002E0")) == (chain2(), True)
    assert decode_packet(bytes.fromhex("100003E0")) == (star3, False)
    assert decode_packet(bytes.fromhex("11000180")) == (
        LabeledTree(tree=canonicalize([None]), labels=(0,)), True)


@pytest.mark.parametrize("data", [
    "110002E1",    # nonzero padding
    "1100",        # header cut short
    "210002E0",    # unknown version
    "130002E0",    # unknown flag bit
    "110000E0",    # zero nodes
    "11000AE0",    # body too short for ten nodes
    "110002F0",    # duplicate labels
    "110002E00000",  # trailing bytes
    "10000450",    # structure codeword with no canonical parse
])
def test_packet_errors(data):
    with pytest.raises(PacketError):
        decode_packet(bytes.fromhex(data))


def test_encode_packet_errors(star3):
    with pytest.raises(PacketError):
        encode_packet(star3, include_labels=True)


@pytest.mark.parametrize("n", range(1, 6))
def test_packet_round_trip_small(n):
    for tree in enumerate_trees(n):
        for labels in itertools.islice(itertools.permutations(range(n)), 24):
            lt = LabeledTree(tree=tree, labels=labels)
            assert decode_packet(encode_packet(lt)) == (lt, True)
        assert decode_packet(encode_packet(tree, include_labels=False)) == (tree, False)


def check_packet_round_trip(lt):
    for labeled in (lt, lt.tree):
        with_labels = labeled is lt
        packet = encode_packet(labeled, include_labels=with_labels)
        decoded, has_labels = decode_packet(packet)
        assert has_labels is with_labels
        assert encode_packet(decoded, include_labels=has_labels) == packet
        # the same shape brings back the same labels
        if has_labels and decoded.tree == lt.tree:
            assert decoded == lt


def test_packet_random_tables():
    rng = random.Random(7)
    for _ in range(60):
        check_packet_round_trip(table_from_paths(random_labeled_table(rng, rng.randint(1, 150))))


@pytest.mark.slow
def test_packet_random_tables_large():
    rng = random.Random(2023)
    for _ in range(1000):
        check_packet_round_trip(table_from_paths(random_labeled_table(rng, rng.randint(1, 500))))


def test_structure_only_saves_label_bits():
    rng = random.Random(3)
    for _ in range(20):
        lt = table_from_paths(random_table(rng, rng.randint(1, 80)))
        labeled = len(encode_tree_explorer(lt.tree)) + lt.n * label_width(lt.n)
        bare = len(encode_tree_explorer(lt.tree))
        assert labeled - bare == lt.n * label_width(lt.n)
        assert len(encode_packet(lt)) - 3 == (labeled + 7) // 8
        assert len(encode_packet(lt, include_labels=False)) - 3 == (bare + 7) // 8


def test_packet_beats_path_vector_messages():
    rng = random.Random(11)
    for _ in range(100):
        table = random_table(rng, rng.randint(10, 300))
        lt = table_from_paths(table)
        body_bits = len(encode_tree_explorer(lt.tree)) + lt.n * label_width(lt.n)
        assert body_bits < baseline_path_vector_bits(tree_to_table(lt))
