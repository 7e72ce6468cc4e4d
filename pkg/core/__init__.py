# TreeCode Hub Core Module
"""
Pit-climbing, Tunnel-digging and TreeExplorer codes for unlabeled rooted trees
"""

__version__ = "1.0.0"
__author__ = "TreeCode Development Team"

from .tree import Tree, TreeStats, canonicalize, count_trees, enumerate_trees, sample_uniform, stats
from .newick import emit_newick, newick_bit_length, parse_newick
from .codec import (decode_pc, decode_td, decode_tree_explorer, encode_pc, encode_td,
                    encode_tree_explorer, code_lengths)
from .routing import LabeledTree, PathVectorTable, decode_packet, encode_packet
from .config_manager import ConfigManager

__all__ = [
    'Tree',
    'TreeStats',
    'canonicalize',
    'count_trees',
    'enumerate_trees',
    'sample_uniform',
    'stats',
    'emit_newick',
    'parse_newick',
    'newick_bit_length',
    'encode_pc',
    'encode_td',
    'encode_tree_explorer',
    'decode_pc',
    'decode_td',
    'decode_tree_explorer',
    'code_lengths',
    'LabeledTree',
    'PathVectorTable',
    'encode_packet',
    'decode_packet',
    'ConfigManager',
]
