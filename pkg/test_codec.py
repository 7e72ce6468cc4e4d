"""
Tests for the pit-climbing, tunnel-digging and TreeExplorer codes
"""

import logging
import random

import pytest
from bitarray import bitarray
from hypothesis import given, settings
import hypothesis.strategies as st

from core.codec import (CodingMethod, Dig, Move, as_bitstring, code_lengths, decode,
                        decode_candidates, decode_pc, decode_td, decode_tree_explorer, encode,
                        encode_pc, encode_td, encode_tree_explorer, lengths_for, render_trace,
                        select_method, trace_pc, trace_td, visit_order_pc, visit_order_td)
from core.errors import CodecError
from core.newick import parse_newick
from core.tree import canonicalize, enumerate_trees, sample_uniform, stats


def tree(newick):
    return parse_newick(newick)[0]


# Encoding

def test_encode_examples(single, path3, star3):
    assert encode_pc(single).to01() == ""
    assert encode_pc(path3).to01() == "11"
    assert encode_pc(star3).to01() == "1000"
    assert encode_td(single).to01() == ""
    assert encode_td(star3).to01() == "11"
    assert encode_td(path3).to01() == "0001"
    assert encode_tree_explorer(path3).to01() == "011"
    assert encode_tree_explorer(star3).to01() == "111"
    assert encode_tree_explorer(single).to01() == "1"


def test_traces(path3, star3):
    assert render_trace(trace_pc(star3)) == "↑↓⇑"
    assert render_trace(trace_td(path3)) == "→⇒←"
    assert trace_pc(path3) == [Move.CLIMB_NEW, Move.CLIMB_NEW]
    assert trace_td(star3) == [Dig.LEAF, Dig.LEAF]


def test_encode_dispatch(path3):
    assert encode(path3, "te") == encode_tree_explorer(path3)
    assert isinstance(encode(path3, "pc"), bitarray)
    with pytest.raises(CodecError):
        encode(path3, "xx")


def test_select_method(single, path3, star3):
    assert select_method(stats(path3)) is CodingMethod.PC
    assert select_method(stats(star3)) is CodingMethod.TD
    assert select_method(stats(single)) is CodingMethod.TD


def test_code_length_examples():
    assert tuple(lengths_for(3, 1)) == (2, 4, 3)
    assert tuple(lengths_for(3, 2)) == (4, 2, 3)
    assert tuple(lengths_for(1, 1)) == (0, 0, 1)


@pytest.mark.parametrize("n", range(1, 12))
def test_lengths_and_trace_counts(n):
    for t in enumerate_trees(n):
        s = stats(t)
        lengths = code_lengths(s)
        assert len(encode_pc(t)) == lengths.pc
        assert len(encode_td(t)) == lengths.td
        assert len(encode_tree_explorer(t)) == lengths.te
        if n == 1:
            continue
        moves = trace_pc(t)
        assert moves.count(Move.FALL) == s.l - 1
        assert moves.count(Move.CLIMB_SEEN) == s.l - 1
        assert moves.count(Move.CLIMB_NEW) == n - s.l
        digs = trace_td(t)
        assert digs.count(Dig.LEAF) == s.l
        assert digs.count(Dig.INTERNAL) == n - 1 - s.l
        assert digs.count(Dig.TUNNEL) == n - 1 - s.l


@given(st.integers(2, 200), st.integers(0, 2 ** 32))
@settings(max_examples=60)
def test_lengths_on_random_trees(n, seed):
    t = sample_uniform(n, random.Random(seed))
    s = stats(t)
    assert len(encode_tree_explorer(t)) == min(n + 2 * s.l - 3, 3 * n - 2 * s.l - 3) + 1
    assert len(encode_tree_explorer(t)) <= 2 * n - 2


def test_no_consecutive_falls_in_pc():
    for t in enumerate_trees(9):
        moves = trace_pc(t)
        assert all(not (a is Move.FALL and b is Move.FALL) for a, b in zip(moves, moves[1:]))


@pytest.mark.parametrize("n", range(1, 10))
def test_visit_orders_cover_every_node(n):
    for t in enumerate_trees(n):
        assert sorted(visit_order_pc(t)) == list(range(n))
        order = visit_order_td(t)
        assert order[0] == 0 and sorted(order) == list(range(n))


# Decoding

def test_decode_examples(single, path3, star3):
    assert decode_pc("", 1) == single
    assert decode_pc("11", 3) == path3
    assert decode_pc("10100", 4) == canonicalize([None, 0, 0, 2])
    assert decode_td("", 1) == single
    assert decode_td("11", 3) == star3
    assert decode_td("0001", 3) == path3
    assert decode_tree_explorer("1", 1) == single
    assert decode_tree_explorer("011", 3) == path3
    assert decode_tree_explorer("111", 3) == star3
    assert decode("111", 3, "te") == star3
    assert decode_tree_explorer(bitarray("011"), 3) == path3


@pytest.mark.parametrize("method,n_max", [("pc", 6), ("td", 4), ("te", 5)])
def test_exact_round_trip_small(method, n_max):
    for n in range(1, n_max + 1):
        for t in enumerate_trees(n):
            assert decode(encode(t, method), n, method) == t


@pytest.mark.parametrize("method", ["pc", "td", "te"])
@pytest.mark.parametrize("n", range(1, 10))
def test_decoded_tree_reproduces_codeword(method, n):
    for t in enumerate_trees(n):
        bits = encode(t, method)
        assert encode(decode(bits, n, method), method) == bits


def test_td_codewords_collide_at_five_nodes():
    a = tree("((),());")
    b = tree("(((),));")
    assert encode_td(a) == encode_td(b) == bitarray("00000101")
    assert set(decode_candidates("00000101", 5, "td")) == {a, b}


def test_decode_candidates_unique_case(path3):
    assert decode_candidates("011", 3, "te") == [path3]
    with pytest.raises(CodecError):
        decode_candidates("011", 3, "zz")


@pytest.mark.parametrize("bits,n,method", [
    ("1", 1, "pc"),
    ("111", 3, "pc"),
    ("0000", 3, "td"),
    ("01", 2, "pc"),
    ("", 3, "te"),
    ("1120", 3, "td"),
    ("11", 0, "td"),
])
def test_decode_errors(bits, n, method):
    with pytest.raises(CodecError):
        decode(bits, n, method)


def test_as_bitstring():
    assert as_bitstring(" 0101 \n") == bitarray("0101")
    with pytest.raises(CodecError):
        as_bitstring("01a")


def test_search_limit_raises():
    bits = encode_td(tree("((),());"))
    with pytest.raises(CodecError, match="search steps"):
        decode_td(bits, 5, search_limit=0)
    big = tree("(((,),(,)),(,));")
    with pytest.raises(CodecError, match="search steps"):
        decode_tree_explorer(encode_tree_explorer(big), big.n, search_limit=3)


def test_unsorted_codeword_reads_as_written(caplog):
    # "10100" traces a leaf before a chain; the canonical tree codes as "11000"
    with caplog.at_level(logging.INFO, logger="core.codec"):
        decoded = decode_pc("10100", 4)
    assert encode_pc(decoded).to01() == "11000"
    assert "no canonical parse" in caplog.text
    assert decode_candidates("10100", 4, "pc") == []


@given(st.integers(80, 300), st.integers(0, 2 ** 32))
@settings(max_examples=30, deadline=None)
def test_pc_decode_reproduces_codeword_on_large_trees(n, seed):
    t = sample_uniform(n, random.Random(seed))
    bits = encode_pc(t)
    assert encode_pc(decode_pc(bits, n)) == bits


@given(st.integers(10, 60), st.integers(0, 2 ** 32))
@settings(max_examples=60, deadline=None)
def test_td_decode_reproduces_codeword_on_random_trees(n, seed):
    t = sample_uniform(n, random.Random(seed))
    bits = encode_td(t)
    assert encode_td(decode_td(bits, n)) == bits


def test_selection_rule_matches_lengths():
    for n in range(2, 12):
        for t in enumerate_trees(n):
            s = stats(t)
            pc, td = len(encode_pc(t)), len(encode_td(t))
            assert (pc < td) == (2 * s.l < n)
            assert (pc == td) == (2 * s.l == n)
            assert select_method(s) is (CodingMethod.PC if pc < td else CodingMethod.TD)


def test_no_consecutive_tunnels_in_td():
    for n in range(1, 11):
        for t in enumerate_trees(n):
            digs = trace_td(t)
            assert all(not (a is Dig.TUNNEL and b is Dig.TUNNEL) for a, b in zip(digs, digs[1:]))


# Exhaustive suites up to 14 nodes

@pytest.mark.slow
@pytest.mark.parametrize("n", range(12, 15))
def test_lengths_exhaustive(n):
    for t in enumerate_trees(n):
        s = stats(t)
        pc, td, te = len(encode_pc(t)), len(encode_td(t)), len(encode_tree_explorer(t))
        assert pc == n + 2 * s.l - 3
        assert td == 3 * n - 2 * s.l - 3
        assert pc + td == 4 * n - 6
        assert te == min(pc, td) + 1
        assert (pc < td) == (2 * s.l < n)


@pytest.mark.slow
@pytest.mark.parametrize("method", ["pc", "td", "te"])
@pytest.mark.parametrize("n", range(10, 15))
def test_decode_consistency_exhaustive(method, n):
    for t in enumerate_trees(n):
        bits = encode(t, method)
        assert encode(decode(bits, n, method), method) == bits
