#!/usr/bin/env python3
"""
TreeCode Hub - Code Analysis Script
Audits the structure codes over every tree up to a given size
"""

import argparse
from typing import Dict, List

from core.analysis import (adjacency_list_bits, ambiguity_report, exact_average_lengths,
                           labeled_te_bits, uniform_entropy_exact)
from core.codec import code_lengths, encode_pc, encode_td, encode_tree_explorer
from core.newick import newick_bit_length
from core.tree import count_trees, enumerate_trees, stats


class CodeAnalyzer:
    """Check length formulas and codeword sharing by exhaustive enumeration"""

    def __init__(self, n_max: int = 10):
        self.n_max = n_max

    def analyze_all_sizes(self) -> List[Dict]:
        print("🌳 TreeCode Hub - Code Analysis Report")
        print("=" * 60)
        total = sum(count_trees(n) for n in range(1, self.n_max + 1))
        print(f"Checking {total} trees with 1..{self.n_max} nodes\n")

        results = [self._analyze_size(n) for n in range(1, self.n_max + 1)]

        print("📏 LENGTH FORMULAS")
        print("-" * 40)
        for result in results:
            status = "✅" if not result['length_failures'] else "❌"
            print(f"{status} n={result['n']:<3} trees={result['trees']:<6} "
                  f"mismatches={result['length_failures']}")

        print("\n🔀 SHARED CODEWORDS")
        print("-" * 40)
        for result in results:
            shared = ", ".join(f"{m}={result['shared'][m]}" for m in ("pc", "td", "te"))
            print(f"n={result['n']:<3} {shared}")

        print("\n📊 AVERAGE LENGTHS (uniform source)")
        print("-" * 40)
        for result in results:
            averages = result['averages']
            print(f"n={result['n']:<3} entropy={result['entropy']:.4f} "
                  f"te={averages.te:.4f} pc={averages.pc:.4f} td={averages.td:.4f}")

        failures = sum(r['length_failures'] for r in results)
        print(f"\n📋 SUMMARY")
        print("-" * 40)
        print(f"Trees checked: {total}")
        print(f"Formula mismatches: {failures}")
        print(f"Sizes with shared TE codewords: "
              f"{sum(1 for r in results if r['shared']['te'])}")
        return results

    def _analyze_size(self, n: int) -> Dict:
        failures = 0
        for tree in enumerate_trees(n):
            tree_stats = stats(tree)
            lengths = code_lengths(tree_stats)
            te = len(encode_tree_explorer(tree))
            if (len(encode_pc(tree)) != lengths.pc or len(encode_td(tree)) != lengths.td
                    or te != lengths.te):
                failures += 1
            if n >= 2 and labeled_te_bits(tree) > adjacency_list_bits(n):
                failures += 1
            if newick_bit_length(tree_stats) - (lengths.td + 1) != n + 1 and n >= 2:
                failures += 1

        return {
            'n': n,
            'trees': count_trees(n),
            'length_failures': failures,
            'shared': {m: ambiguity_report(n, m).shared_trees for m in ("pc", "td", "te")},
            'averages': exact_average_lengths(n),
            'entropy': uniform_entropy_exact(n),
        }


def main():
    parser = argparse.ArgumentParser(description="Audit tree codes by enumeration")
    parser.add_argument("--n-max", type=int, default=10)
    args = parser.parse_args()
    CodeAnalyzer(args.n_max).analyze_all_sizes()


if __name__ == "__main__":
    main()
