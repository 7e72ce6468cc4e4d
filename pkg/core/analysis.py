"""
TreeCode Hub - Analysis
Entropy baselines, competitor cost models and the benchmark harness
"""

import csv
import hashlib
import logging
import math
import random
import threading
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields
from typing import Dict, Iterable, List, NamedTuple, Optional, TextIO

from .codec import encode, encode_pc, encode_td, encode_tree_explorer, lengths_for
from .errors import AnalysisError
from .newick import newick_bit_length
from .tree import Tree, TreeCount, count_trees, enumerate_trees, sample_uniform, stats

logger = logging.getLogger(__name__)

# log2 d and log2 c of the asymptotic tree count, as printed
LOG2_D = 1.5635
LOG2_C = -1.1846

MAX_BENCHMARK_N = 200
MAX_EXACT_AVERAGE_N = 120


@dataclass(frozen=True)
class EntropyReport:
    n: int
    exact_bits: float
    asymptotic_bits: float


@dataclass(frozen=True)
class BenchmarkRow:
    """One line of benchmark output; field order is the CSV column order"""
    n: int
    sample_count: int
    avg_te_bits: float
    avg_pc_bits: float
    avg_td_bits: float
    exact_entropy_bits: float
    asymptotic_entropy_bits: float
    adjacency_bits: int
    avg_newick_bits: float
    avg_labeled_te_bits: float
    te_rate_of_change: Optional[float] = None


class AverageLengths(NamedTuple):
    pc: float
    td: float
    te: float


@dataclass(frozen=True)
class AmbiguityReport:
    """How many trees of one size share a codeword with another tree"""
    n: int
    method: str
    trees: int
    codewords: int
    shared_trees: int
    largest_class: int


# Entropy and counts

def uniform_entropy_exact(n: int) -> float:
    return math.log2(count_trees(n))


def uniform_entropy_asymptotic(n: int) -> float:
    if n < 1:
        raise AnalysisError(f"node count must be at least 1, got {n}")
    return LOG2_D * n - 1.5 * math.log2(n) + LOG2_C


def entropy_report(n: int) -> EntropyReport:
    return EntropyReport(n=n, exact_bits=uniform_entropy_exact(n),
                         asymptotic_bits=uniform_entropy_asymptotic(n))


def ordered_rooted_count(n: int) -> TreeCount:
    """Ordered rooted trees with n nodes: Catalan(n - 1)"""
    if n < 1:
        raise AnalysisError(f"node count must be at least 1, got {n}")
    return math.comb(2 * (n - 1), n - 1) // n


def labeled_tree_count(n: int) -> TreeCount:
    """Cayley's count n^(n-2) of labeled unrooted trees"""
    if n < 1:
        raise AnalysisError(f"node count must be at least 1, got {n}")
    if n <= 2:
        return 1
    return n ** (n - 2)


def label_width(n: int) -> int:
    """Bits per node label: ceil(log2 n), never below 1"""
    return max(1, (n - 1).bit_length())


def adjacency_list_bits(n: int) -> int:
    if n < 1:
        raise AnalysisError(f"node count must be at least 1, got {n}")
    return 2 * n * (n - 1).bit_length()


def labeled_te_bits(tree: Tree) -> int:
    return len(encode_tree_explorer(tree)) + tree.n * (tree.n - 1).bit_length()


# Leaf-count distribution
#
# _leaf_polys[m][l] counts m-node trees with l leaves. A tree with m + 1 >= 2
# nodes is a root over a multiset of subtrees holding m nodes, so its
# polynomial equals the multiset transform of the tree polynomials at m.

_leaf_polys: List[List[int]] = [[], [0, 1]]
_forest_polys: List[List[int]] = [[1]]
_power_sums: List[List[int]] = [[]]
_polys_lock = threading.Lock()


def _extend_leaf_polys(n: int):
    while len(_leaf_polys) <= n:
        m = len(_leaf_polys) - 1
        power_sum = [0] * (m + 1)
        for d in range(1, m + 1):
            if m % d:
                continue
            stride = m // d
            for leaves, count in enumerate(_leaf_polys[d]):
                if count:
                    power_sum[leaves * stride] += d * count
        _power_sums.append(power_sum)

        acc = [0] * (m + 1)
        for j in range(1, m + 1):
            rest = _forest_polys[m - j]
            for s, b in enumerate(_power_sums[j]):
                if not b:
                    continue
                for r, f in enumerate(rest):
                    if f:
                        acc[s + r] += b * f
        forest = [value // m for value in acc]
        _forest_polys.append(forest)
        _leaf_polys.append(forest)


def leaf_distribution(n: int) -> Dict[int, int]:
    """Number of n-node trees for each leaf count l"""
    if n < 1:
        raise AnalysisError(f"node count must be at least 1, got {n}")
    with _polys_lock:
        _extend_leaf_polys(n)
    return {l: count for l, count in enumerate(_leaf_polys[n]) if count}


def exact_average_lengths(n: int) -> AverageLengths:
    """Average PC, TD and TreeExplorer lengths over all n-node trees, weighted uniformly"""
    if not 1 <= n <= MAX_EXACT_AVERAGE_N:
        raise AnalysisError(f"exact averages support 1..{MAX_EXACT_AVERAGE_N} nodes, got {n}")
    totals = [0, 0, 0]
    for l, count in leaf_distribution(n).items():
        for index, bits in enumerate(lengths_for(n, l)):
            totals[index] += count * bits
    total_trees = count_trees(n)
    return AverageLengths(*(t / total_trees for t in totals))


def ambiguity_report(n: int, method: str) -> AmbiguityReport:
    """Group every n-node tree by its codeword under ``method``"""
    classes: Dict[str, int] = {}
    trees = 0
    for tree in enumerate_trees(n):
        key = encode(tree, method).to01()
        classes[key] = classes.get(key, 0) + 1
        trees += 1
    shared = sum(size for size in classes.values() if size > 1)
    return AmbiguityReport(n=n, method=method, trees=trees, codewords=len(classes),
                           shared_trees=shared, largest_class=max(classes.values()))


# Benchmark

def derive_seed(master_seed: int, n: int) -> int:
    """Per-n seed, independent of the order rows are computed in"""
    digest = hashlib.sha256(f"{master_seed}:{n}".encode("ascii")).digest()
    return int.from_bytes(digest[:8], "big")


def _benchmark_row(n: int, samples_per_n: int, master_seed: int,
                   exhaustive_threshold: int) -> BenchmarkRow:
    if count_trees(n) <= exhaustive_threshold:
        pool: Iterable[Tree] = enumerate_trees(n)
    else:
        rng = random.Random(derive_seed(master_seed, n))
        pool = (sample_uniform(n, rng) for _ in range(samples_per_n))

    te = pc = td = newick = labeled = 0
    count = 0
    width_bits = n * (n - 1).bit_length()
    for tree in pool:
        te_bits = len(encode_tree_explorer(tree))
        te += te_bits
        pc += len(encode_pc(tree))
        td += len(encode_td(tree))
        newick += newick_bit_length(stats(tree))
        labeled += te_bits + width_bits
        count += 1

    logger.info("benchmark n=%d: %d trees averaged", n, count)
    return BenchmarkRow(
        n=n,
        sample_count=count,
        avg_te_bits=te / count,
        avg_pc_bits=pc / count,
        avg_td_bits=td / count,
        exact_entropy_bits=uniform_entropy_exact(n),
        asymptotic_entropy_bits=uniform_entropy_asymptotic(n),
        adjacency_bits=adjacency_list_bits(n),
        avg_newick_bits=newick / count,
        avg_labeled_te_bits=labeled / count,
    )


def run_benchmark(n_min: int, n_max: int, samples_per_n: int, master_seed: int,
                  exhaustive_threshold: int = 10000, workers: int = 1) -> List[BenchmarkRow]:
    """Average code lengths per node count over uniform trees.

    Sizes with at most ``exhaustive_threshold`` trees are averaged over every
    tree; larger sizes draw ``samples_per_n`` trees from an RNG seeded by
    ``derive_seed(master_seed, n)``, so rows do not depend on ``workers``.
    """
    if not 1 <= n_min <= n_max <= MAX_BENCHMARK_N:
        raise AnalysisError(f"need 1 <= n_min <= n_max <= {MAX_BENCHMARK_N}, "
                            f"got {n_min}..{n_max}")
    if samples_per_n < 1:
        raise AnalysisError(f"samples per n must be positive, got {samples_per_n}")
    if workers < 1:
        raise AnalysisError(f"workers must be positive, got {workers}")

    sizes = list(range(n_min, n_max + 1))
    args = ([samples_per_n] * len(sizes), [master_seed] * len(sizes),
            [exhaustive_threshold] * len(sizes))
    if workers == 1:
        rows = list(map(_benchmark_row, sizes, *args))
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            rows = list(executor.map(_benchmark_row, sizes, *args))

    result = [rows[0]]
    for previous, row in zip(rows, rows[1:]):
        result.append(BenchmarkRow(*astuple(row)[:-1],
                                   te_rate_of_change=row.avg_te_bits - previous.avg_te_bits))
    return result


def write_benchmark_csv(rows: Iterable[BenchmarkRow], stream: TextIO, precision: int = 4):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow([f.name for f in fields(BenchmarkRow)])
    for row in rows:
        cells = []
        for value in astuple(row):
            if value is None:
                cells.append("")
            elif isinstance(value, float):
                cells.append(f"{value:.{precision}f}")
            else:
                cells.append(str(value))
        writer.writerow(cells)
