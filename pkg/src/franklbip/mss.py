"""Exact enumeration and statistics of maximal stable sets.

A stable set of a bipartite graph is determined by its intersection A with
one side: the companion on the other side must be everything not adjacent
to A, and the pair is maximal iff every vertex dropped from A keeps a
neighbour in that companion.  All counting therefore scans subsets of the
smaller side (swapping sides first when the right side is smaller) and maps
the statistics back.

Counts are exact integers and averages exact rationals: the quantities this
package checks are equalities and inequalities that must not be blurred by
rounding.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from . import _pykernels
from .graphs import BipartiteGraph

if os.environ.get("FRANKLBIP_PURE_PYTHON"):
    _impl = _pykernels
    KERNEL = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        KERNEL = "compiled"
    except ImportError:
        _impl = _pykernels
        KERNEL = "python"

DEFAULT_CANDIDATE_CAP = 1 << 30
BRUTE_FORCE_LIMIT = 24


class CapExceeded(RuntimeError):
    """The requested scan is larger than the configured candidate cap."""


class StableSet(NamedTuple):
    """Vertex set split by side; each part is a bitmask over its side."""

    left: int
    right: int

    def left_vertices(self):
        return _bits(self.left)

    def right_vertices(self):
        return _bits(self.right)


def _bits(mask: int):
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True)
class MssStats:
    """Exact aggregate statistics of the maximal stable sets of one graph."""

    total: int
    left_hist: tuple
    left_vertex_counts: tuple
    right_vertex_counts: tuple

    def left_average(self) -> Fraction:
        weighted = sum(k * c for k, c in enumerate(self.left_hist))
        return Fraction(weighted, self.total)

    def to_json_dict(self) -> dict:
        return {
            "total": str(self.total),
            "left_hist": list(self.left_hist),
            "left_vertex_counts": list(self.left_vertex_counts),
            "right_vertex_counts": list(self.right_vertex_counts),
        }


@dataclass(frozen=True)
class ConjectureVerdict:
    """Outcome of the up-to-delta check on both bipartition classes.

    satisfied means both sides exhibit a vertex of containment fraction at
    most 1/2 + delta; edgeless graphs are vacuously satisfied and flagged.
    """

    delta: Fraction
    left_witness: Optional[tuple]
    right_witness: Optional[tuple]
    satisfied: bool
    vacuous: bool = False

    def to_json_dict(self) -> dict:
        def wit(w):
            if w is None:
                return None
            v, frac = w
            return {"vertex": v, "fraction": f"{frac.numerator}/{frac.denominator}"}

        return {
            "delta": f"{self.delta.numerator}/{self.delta.denominator}",
            "left_witness": wit(self.left_witness),
            "right_witness": wit(self.right_witness),
            "satisfied": self.satisfied,
            "vacuous": self.vacuous,
        }


def is_maximal_stable(g: BipartiteGraph, s: StableSet) -> bool:
    """True iff s is stable and every outside vertex has a neighbour in s."""
    if not 0 <= s.left < (1 << g.m):
        raise IndexError("left part has vertices out of range")
    if not 0 <= s.right < (1 << g.n):
        raise IndexError("right part has vertices out of range")
    for u in _bits(s.left):
        if g.adj[u] & s.right:
            return False
    covered_right = 0
    for u in _bits(s.left):
        covered_right |= g.adj[u]
    out_right = ((1 << g.n) - 1) & ~s.right
    if out_right & ~covered_right:
        return False
    for u in range(g.m):
        if not s.left >> u & 1 and g.adj[u] & s.right == 0:
            return False
    return True


def _scan_layout(g: BipartiteGraph):
    """Rows, sizes and swap flag for scanning the smaller side."""
    if g.n < g.m:
        return list(g.columns()), g.n, g.m, True
    return list(g.adj), g.m, g.n, False


def _check_cap(side: int, cap: int):
    if (1 << side) > cap:
        raise CapExceeded(f"2^{side} candidate subsets exceed the cap of {cap}")


def enumerate_mss(g: BipartiteGraph, cap: int = DEFAULT_CANDIDATE_CAP):
    """Yield every maximal stable set exactly once (order unspecified)."""
    rows, s, t, swapped = _scan_layout(g)
    _check_cap(s, cap)
    full = (1 << t) - 1
    in_a = [False] * s

    def visit(u, a_mask, nb):
        if u == s:
            free = full & ~nb
            if swapped:
                yield StableSet(left=free, right=a_mask)
            else:
                yield StableSet(left=a_mask, right=free)
            return
        row = rows[u]
        grown = nb | row
        alive = True
        if grown != nb:
            free = full & ~grown
            for w in range(u):
                if not in_a[w] and rows[w] & free == 0:
                    alive = False
                    break
        if alive:
            in_a[u] = True
            yield from visit(u + 1, a_mask | (1 << u), grown)
            in_a[u] = False
        if row & ~nb & full:
            yield from visit(u + 1, a_mask, nb)

    yield from visit(0, 0, 0)


def mss_stats(g: BipartiteGraph, cap: int = DEFAULT_CANDIDATE_CAP) -> MssStats:
    """Aggregate counts without storing sets; memory stays O(m + n)."""
    stats, _ = _scan(g, None, cap)
    return stats


def count_mss_with_sizes(g: BipartiteGraph, ell: int, r: int,
                         cap: int = DEFAULT_CANDIDATE_CAP) -> int:
    """Exact number of maximal stable sets S with |S∩L| = ell and |S∩R| = r."""
    _, sel = _scan(g, (ell, r), cap)
    return sel


def _scan(g: BipartiteGraph, sel, cap):
    rows, s, t, swapped = _scan_layout(g)
    _check_cap(s, cap)
    sel_k = sel_f = -1
    if sel is not None:
        ell, r = sel
        sel_k, sel_f = (r, ell) if swapped else (ell, r)
    total, k_hist, f_hist, scan_counts, other_counts, sel_count = _impl.scan_stats(
        rows, s, t, sel_k, sel_f
    )
    if swapped:
        left_hist, lvc, rvc = f_hist, other_counts, scan_counts
    else:
        left_hist, lvc, rvc = k_hist, scan_counts, other_counts
    stats = MssStats(
        total=int(total),
        left_hist=tuple(int(x) for x in left_hist),
        left_vertex_counts=tuple(int(x) for x in lvc),
        right_vertex_counts=tuple(int(x) for x in rvc),
    )
    return stats, int(sel_count)


def stab_at_least_count(g: BipartiteGraph, ell_star: int, r_star: int,
                        cap: int = DEFAULT_CANDIDATE_CAP) -> int:
    """Number of stable pairs (A, B), not necessarily maximal, with
    |A| >= ell_star on the left and |B| >= r_star on the right.

    Scans the left side regardless of which side is smaller, since the two
    thresholds are not symmetric.
    """
    if not 0 <= ell_star <= g.m or not 0 <= r_star <= g.n:
        raise ValueError("thresholds out of range")
    _check_cap(g.m, cap)
    freq = _impl.scan_free_hist(list(g.adj), g.m, g.n, ell_star)
    tails = _binomial_tails(g.n, r_star)
    return sum(int(freq[f]) * tails[f] for f in range(g.n + 1))


def _binomial_tails(n: int, r_star: int):
    """tails[f] = number of subsets of an f-element set with >= r_star elements."""
    tails = []
    for f in range(n + 1):
        if r_star <= 0:
            tails.append(1 << f)
        else:
            tails.append(sum(math.comb(f, j) for j in range(r_star, f + 1)))
    return tails


def left_avg(g: BipartiteGraph, cap: int = DEFAULT_CANDIDATE_CAP) -> Fraction:
    """Average size of the left part over all maximal stable sets, exact."""
    return mss_stats(g, cap).left_average()


def almost_unstable_vertex(stats: MssStats, side: str, delta) -> Optional[tuple]:
    """Vertex of minimal containment fraction if that fraction is at most
    1/2 + delta, else None.  Ties break towards the smallest index."""
    if side == "left":
        counts = stats.left_vertex_counts
    elif side == "right":
        counts = stats.right_vertex_counts
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    if not counts:
        return None
    best_v = min(range(len(counts)), key=lambda v: (counts[v], v))
    frac = Fraction(counts[best_v], stats.total)
    if frac <= Fraction(1, 2) + Fraction(delta):
        return best_v, frac
    return None


def conjecture_check(g: BipartiteGraph, delta=0,
                     cap: int = DEFAULT_CANDIDATE_CAP) -> ConjectureVerdict:
    """Up-to-delta verdict for both sides from a single enumeration."""
    stats = mss_stats(g, cap)
    vacuous = g.edge_count() == 0
    lw = almost_unstable_vertex(stats, "left", delta)
    rw = almost_unstable_vertex(stats, "right", delta)
    satisfied = vacuous or (lw is not None and rw is not None)
    return ConjectureVerdict(
        delta=Fraction(delta),
        left_witness=lw,
        right_witness=rw,
        satisfied=satisfied,
        vacuous=vacuous,
    )


def count_left_at_least(stats: MssStats, threshold) -> int:
    """Number of maximal stable sets with |A∩L| >= threshold.

    Pass a Fraction for thresholds like m/3 that floats cannot represent.
    """
    thr = Fraction(threshold)
    return sum(c for k, c in enumerate(stats.left_hist) if k >= thr)


def count_left_at_most(stats: MssStats, threshold) -> int:
    """Number of maximal stable sets with |A∩L| <= threshold."""
    thr = Fraction(threshold)
    return sum(c for k, c in enumerate(stats.left_hist) if k <= thr)


FOUND = "found"
ABSENT = "absent"
BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass(frozen=True)
class MatchingSearch:
    """Backtracking outcome: `absent` is definite (the search space was
    exhausted), `budget_exhausted` only means not found within budget."""

    status: str
    edges: Optional[tuple]
    explored: int


class _BudgetExceeded(Exception):
    pass


def find_induced_matching(g: BipartiteGraph, k: int, budget: int = 1_000_000) -> MatchingSearch:
    """Search for k pairwise non-adjacent edges with no cross edges between
    their endpoints."""
    if k < 1:
        raise ValueError("matching size must be >= 1")
    edges = [(u, v) for u in range(g.m) for v in _bits(g.adj[u])]
    cols = g.columns()
    explored = 0
    found = None

    def visit(start, chosen, blocked_left, blocked_right):
        nonlocal explored, found
        if len(chosen) == k:
            found = tuple(chosen)
            return True
        for idx in range(start, len(edges)):
            if len(chosen) + (len(edges) - idx) < k:
                return False
            explored += 1
            if explored > budget:
                raise _BudgetExceeded()
            u, v = edges[idx]
            if blocked_left >> u & 1 or blocked_right >> v & 1:
                continue
            if visit(idx + 1, chosen + [(u, v)],
                     blocked_left | cols[v], blocked_right | g.adj[u]):
                return True
        return False

    try:
        if visit(0, [], 0, 0):
            return MatchingSearch(FOUND, found, explored)
        return MatchingSearch(ABSENT, None, explored)
    except _BudgetExceeded:
        return MatchingSearch(BUDGET_EXHAUSTED, None, explored)


def brute_force_mss(g: BipartiteGraph):
    """Filter all 2^(m+n) vertex subsets; the independent test oracle.

    Vectorised over subsets: S is maximal stable iff for every vertex v,
    membership of v is the complement of 'v has a neighbour in S'.
    """
    total_bits = g.m + g.n
    if total_bits > BRUTE_FORCE_LIMIT:
        raise CapExceeded(f"brute force limited to m+n <= {BRUTE_FORCE_LIMIT}")
    neigh = [int(g.adj[u]) << g.m for u in range(g.m)]
    neigh += [int(c) for c in g.columns()]
    out = []
    chunk = 1 << 20
    for base in range(0, 1 << total_bits, chunk):
        hi = min(base + chunk, 1 << total_bits)
        subsets = np.arange(base, hi, dtype=np.uint32)
        valid = np.ones(hi - base, dtype=bool)
        for v in range(total_bits):
            in_s = (subsets >> np.uint32(v)) & np.uint32(1)
            has_nb = (subsets & np.uint32(neigh[v])) != 0
            valid &= (in_s == 1) ^ has_nb
        left_mask = (1 << g.m) - 1
        for s_val in subsets[valid]:
            s_int = int(s_val)
            out.append(StableSet(left=s_int & left_mask, right=s_int >> g.m))
    out.sort()
    return out
