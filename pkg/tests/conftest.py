"""Shared fixtures and independent oracles.

The weighted-enumeration oracle walks every edge configuration of a small
random graph model and sums p^edges q^(non-edges) times a statistic; it is
the ground truth the closed forms are checked against, and it never calls
the module under test.
"""

import pytest

from franklbip.graphs import BipartiteGraph, Seed, sample_bipartite

CORPUS_PS = (0.2, 0.5, 0.8)


def all_edge_configs(m, n):
    """Every bipartite graph on m + n labelled vertices."""
    for code in range(1 << (m * n)):
        rows = []
        for u in range(m):
            rows.append((code >> (u * n)) & ((1 << n) - 1))
        yield BipartiteGraph(m, n, tuple(rows))


def config_weight(g, p):
    e = g.edge_count()
    return (p ** e) * ((1.0 - p) ** (g.m * g.n - e))


def weighted_expectation(m, n, p, statistic):
    """E[statistic(G)] by exhaustive enumeration of all 2^(m n) graphs."""
    return sum(config_weight(g, p) * statistic(g) for g in all_edge_configs(m, n))


def small_corpus(count=500, max_total=14, root=1000):
    """Deterministic corpus of seeded random graphs with m + n <= max_total,
    cycling through sizes and the three edge probabilities."""
    sizes = [(m, n) for m in range(1, max_total) for n in range(1, max_total)
             if m + n <= max_total]
    out = []
    for i in range(count):
        m, n = sizes[i % len(sizes)]
        p = CORPUS_PS[i % len(CORPUS_PS)]
        out.append((sample_bipartite(m, n, p, Seed(root, i)), p))
    return out


@pytest.fixture(scope="session")
def corpus():
    return small_corpus()
