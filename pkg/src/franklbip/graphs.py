"""Bipartite graphs with a fixed bipartition, and seeded random sampling.

A graph lives on vertex classes L (size m) and R (size n); adjacency is
stored from the left side only, one bitmask over R per left vertex.
Right-side neighbourhoods are recovered by column scan, which is cheap at
the sizes this package targets (a few dozen vertices per side, a few
thousand on one side at most).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MASK64 = (1 << 64) - 1


class ZeroSideError(ValueError):
    """A bipartition class would be empty."""


class GraphParseError(ValueError):
    """Malformed graph text (bad header, row count, row width or character)."""


@dataclass(frozen=True)
class EdgeProbability:
    """Edge probability p together with its complement q = 1 - p.

    Every closed-form bound requires p strictly inside (0, 1).  The sampler
    alone also accepts p = 0 and p = 1, which produce the empty and the
    complete bipartite graph; those values are flagged `degenerate`.
    """

    p: float

    def __post_init__(self):
        if not 0.0 <= float(self.p) <= 1.0:
            raise ValueError(f"edge probability outside [0, 1]: {self.p}")
        object.__setattr__(self, "p", float(self.p))

    @property
    def q(self) -> float:
        return 1.0 - self.p

    @property
    def degenerate(self) -> bool:
        return self.p == 0.0 or self.p == 1.0

    @property
    def log_inv_q(self) -> float:
        """ln(1/q); the scale of every log_{1/q} threshold."""
        self.require_interior()
        # log1p keeps full precision for p near 0
        return -math.log1p(-self.p)

    def require_interior(self) -> "EdgeProbability":
        if self.degenerate:
            raise ValueError(f"p={self.p} is degenerate; need 0 < p < 1")
        return self


def as_prob(p) -> EdgeProbability:
    """Coerce a float (or an EdgeProbability) to EdgeProbability."""
    if isinstance(p, EdgeProbability):
        return p
    return EdgeProbability(p)


@dataclass(frozen=True)
class Seed:
    """Root key plus a stream index for derived sub-streams.

    Equal (root, stream) pairs reproduce identical draws, independent of
    execution order and thread count.  `child(i)` shifts the stream index
    left by 32 bits and ors in `i`, so trial indices occupy the low bits
    and an enclosing sweep's point index the next 32.
    """

    root: int
    stream: int = 0

    def __post_init__(self):
        object.__setattr__(self, "root", int(self.root) & MASK64)
        object.__setattr__(self, "stream", int(self.stream) & MASK64)

    def child(self, index: int) -> "Seed":
        return Seed(self.root, ((self.stream << 32) | int(index)) & MASK64)

    def key(self) -> np.ndarray:
        return np.array([self.root, self.stream], dtype=np.uint64)


@dataclass(frozen=True)
class BipartiteGraph:
    """Bipartite graph on classes L (m vertices) and R (n vertices).

    adj[u] has bit v set iff the edge (u, v) is present.  Both sides must be
    nonempty and no adjacency bit may lie at position >= n.  Instances are
    immutable and safe to share across threads.
    """

    m: int
    n: int
    adj: tuple

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ZeroSideError(f"need m >= 1 and n >= 1, got m={self.m}, n={self.n}")
        adj = tuple(int(row) for row in self.adj)
        if len(adj) != self.m:
            raise ValueError(f"expected {self.m} adjacency rows, got {len(adj)}")
        limit = 1 << self.n
        for u, row in enumerate(adj):
            if not 0 <= row < limit:
                raise ValueError(f"adjacency row {u} has bits outside the right side")
        object.__setattr__(self, "adj", adj)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.adj)

    def columns(self) -> tuple:
        """Right-side neighbourhoods as bitmasks over L (transposed adjacency)."""
        cols = [0] * self.n
        for u, row in enumerate(self.adj):
            while row:
                low = row & -row
                cols[low.bit_length() - 1] |= 1 << u
                row ^= low
        return tuple(cols)

    def right_adj(self, v: int) -> int:
        if not 0 <= v < self.n:
            raise IndexError(f"right vertex {v} out of range")
        mask = 0
        for u, row in enumerate(self.adj):
            if row >> v & 1:
                mask |= 1 << u
        return mask

    def to_json_dict(self) -> dict:
        rows = ["".join("1" if row >> v & 1 else "0" for v in range(self.n)) for row in self.adj]
        return {"m": self.m, "n": self.n, "rows": rows}


def sample_bipartite(m: int, n: int, prob, seed: Seed) -> BipartiteGraph:
    """Draw G from the independent-edge model on sides of size m and n.

    Each of the m*n edges is present independently with probability p under
    the counter-based stream identified by `seed`; the draw for edge (u, v)
    is the (u*n + v)-th variate of that stream, so results are bit-identical
    across runs and thread counts.
    """
    if m < 1 or n < 1:
        raise ZeroSideError(f"need m >= 1 and n >= 1, got m={m}, n={n}")
    prob = as_prob(prob)
    rng = np.random.Generator(np.random.Philox(key=seed.key()))
    bits = (rng.random((m, n)) < prob.p).astype(np.uint8)
    packed = np.packbits(bits, axis=1, bitorder="little")
    rows = tuple(int.from_bytes(packed[u].tobytes(), "little") for u in range(m))
    return BipartiteGraph(m, n, rows)


def swap_sides(g: BipartiteGraph) -> BipartiteGraph:
    """Exchange the two sides; (u, v) becomes (v, u).  Involutive."""
    return BipartiteGraph(g.n, g.m, g.columns())


def induced_subgraph(g: BipartiteGraph, lsub, rsub) -> BipartiteGraph:
    """Subgraph on the given left and right vertex subsets, reindexed densely.

    Vertices keep their relative order; an edge survives iff both endpoints do.
    """
    lvs = sorted(set(lsub))
    rvs = sorted(set(rsub))
    if not lvs or not rvs:
        raise ZeroSideError("induced subgraph needs nonempty subsets on both sides")
    if lvs[0] < 0 or lvs[-1] >= g.m:
        raise IndexError(f"left subset out of range: {lvs}")
    if rvs[0] < 0 or rvs[-1] >= g.n:
        raise IndexError(f"right subset out of range: {rvs}")
    rows = []
    for u in lvs:
        row = g.adj[u]
        rows.append(sum(1 << j for j, v in enumerate(rvs) if row >> v & 1))
    return BipartiteGraph(len(lvs), len(rvs), tuple(rows))


def serialize_graph(g: BipartiteGraph) -> str:
    """Canonical text form: header "m n", then m rows of n characters in {0,1}."""
    lines = [f"{g.m} {g.n}"]
    for row in g.adj:
        lines.append("".join("1" if row >> v & 1 else "0" for v in range(g.n)))
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> BipartiteGraph:
    """Inverse of serialize_graph; raises GraphParseError on malformed input."""
    lines = text.splitlines()
    if not lines:
        raise GraphParseError("empty input")
    header = lines[0].split()
    if len(header) != 2:
        raise GraphParseError(f"malformed header {lines[0]!r}; expected 'm n'")
    try:
        m, n = int(header[0]), int(header[1])
    except ValueError:
        raise GraphParseError(f"malformed header {lines[0]!r}; expected two integers") from None
    if m < 1 or n < 1:
        raise ZeroSideError(f"need m >= 1 and n >= 1, got m={m}, n={n}")
    body = [line for line in lines[1:] if line.strip() != ""]
    if len(body) != m:
        raise GraphParseError(f"expected {m} rows, got {len(body)}")
    rows = []
    for i, line in enumerate(body):
        line = line.strip()
        if len(line) != n:
            raise GraphParseError(f"row {i} has width {len(line)}, expected {n}")
        bad = set(line) - {"0", "1"}
        if bad:
            raise GraphParseError(f"row {i} has illegal characters {sorted(bad)}")
        rows.append(sum(1 << v for v, ch in enumerate(line) if ch == "1"))
    return BipartiteGraph(m, n, tuple(rows))


def complete_graph(m: int, n: int) -> BipartiteGraph:
    full = (1 << n) - 1
    return BipartiteGraph(m, n, tuple(full for _ in range(m)))


def empty_graph(m: int, n: int) -> BipartiteGraph:
    return BipartiteGraph(m, n, tuple(0 for _ in range(m)))


def matching_graph(k: int) -> BipartiteGraph:
    """Perfect matching u_i v_i on k + k vertices."""
    return BipartiteGraph(k, k, tuple(1 << i for i in range(k)))
