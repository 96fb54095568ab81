"""Core types: +/-1 edge-coloured complete graphs, forests, and embeddings.

All quantities are exact integers.  Edge colours are stored as one bit per
unordered pair (packed lower triangle), with a set bit meaning +1 (red).
"""

from __future__ import annotations

import json
from typing import Callable, Iterable, Iterator

import numpy as np


class InvalidInputError(ValueError):
    """Raised when an argument violates a documented precondition."""


class ParityError(InvalidInputError):
    """Raised when an edge count cannot be split evenly between two colours."""


class PreconditionError(InvalidInputError):
    """Precondition violation that carries a machine-readable payload."""

    def __init__(self, message: str, payload=None):
        super().__init__(message)
        self.payload = payload


RED = 1
BLUE = -1


def _pair_index(i: int, j: int) -> int:
    # lower-triangle index for i > j
    return i * (i - 1) // 2 + j


class ColouredCompleteGraph:
    """A symmetric {-1,+1} colouring of the edges of K_n with cached colour degrees.

    Immutable after construction; safe to share across threads for reading.
    """

    __slots__ = ("n", "_bits", "_red_degree", "_blue_degree", "red_edge_count", "_dense")

    def __init__(self, n: int, bits: bytes, red_degree: tuple[int, ...]):
        if n < 2:
            raise InvalidInputError(f"need at least 2 vertices, got n={n}")
        npairs = n * (n - 1) // 2
        if len(bits) != (npairs + 7) // 8:
            raise InvalidInputError("bit buffer has the wrong length")
        self.n = n
        self._bits = bytes(bits)
        self._red_degree = tuple(red_degree)
        self._blue_degree = tuple(n - 1 - d for d in red_degree)
        self.red_edge_count = sum(red_degree) // 2
        self._dense = None
        if 2 * self.red_edge_count != sum(red_degree):
            raise InvalidInputError("inconsistent degree cache")

    @classmethod
    def from_pair_function(cls, n: int, colour_fn: Callable[[int, int], int]) -> "ColouredCompleteGraph":
        """Build from a function (i, j) -> {-1, +1} on pairs i > j."""
        npairs = n * (n - 1) // 2
        bits = bytearray((npairs + 7) // 8)
        red_degree = [0] * n
        for i in range(1, n):
            base = i * (i - 1) // 2
            for j in range(i):
                c = colour_fn(i, j)
                if c == RED:
                    k = base + j
                    bits[k >> 3] |= 1 << (k & 7)
                    red_degree[i] += 1
                    red_degree[j] += 1
                elif c != BLUE:
                    raise InvalidInputError(f"colour_fn({i},{j}) returned {c}, expected -1 or +1")
        return cls(n, bytes(bits), tuple(red_degree))

    @classmethod
    def from_red_matrix(cls, red: np.ndarray) -> "ColouredCompleteGraph":
        """Build from a symmetric boolean matrix (True = red); diagonal ignored."""
        n = red.shape[0]
        if red.shape != (n, n):
            raise InvalidInputError("matrix must be square")
        red = red.astype(bool)
        if not np.array_equal(red, red.T):
            raise InvalidInputError("red matrix must be symmetric")
        mask = ~np.eye(n, dtype=bool)
        degs = (red & mask).sum(axis=0)
        flat = red[np.tril_indices(n, -1)]
        bits = np.packbits(flat, bitorder="little").tobytes()
        return cls(n, bits, tuple(int(d) for d in degs))

    def colour(self, i: int, j: int) -> int:
        """Colour of edge ij: +1 (red) or -1 (blue)."""
        if i == j:
            raise InvalidInputError(f"no self-loop colour for vertex {i}")
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise InvalidInputError(f"vertex out of range: ({i},{j}) with n={self.n}")
        if i < j:
            i, j = j, i
        k = _pair_index(i, j)
        return RED if self._bits[k >> 3] & (1 << (k & 7)) else BLUE

    def red_degree(self, v: int) -> int:
        return self._red_degree[v]

    def blue_degree(self, v: int) -> int:
        return self._blue_degree[v]

    def signed_degree(self, v: int) -> int:
        """red_degree(v) - blue_degree(v); the colour sum of the star at v."""
        return self._red_degree[v] - self._blue_degree[v]

    @property
    def edge_count(self) -> int:
        return self.n * (self.n - 1) // 2

    def total_sum(self) -> int:
        """Colour sum over all edges of K_n."""
        return 2 * self.red_edge_count - self.edge_count

    def dense(self) -> tuple[tuple[int, ...], ...]:
        """Cached n x n matrix of colours (diagonal 0) for tight enumeration loops."""
        if self._dense is None:
            n = self.n
            m = [[0] * n for _ in range(n)]
            for i in range(1, n):
                base = i * (i - 1) // 2
                row_i = m[i]
                for j in range(i):
                    k = base + j
                    c = RED if self._bits[k >> 3] & (1 << (k & 7)) else BLUE
                    row_i[j] = c
                    m[j][i] = c
            self._dense = tuple(tuple(r) for r in m)
        return self._dense

    def red_neighbours(self, v: int) -> list[int]:
        return [u for u in range(self.n) if u != v and self.colour(u, v) == RED]

    def blue_neighbours(self, v: int) -> list[int]:
        return [u for u in range(self.n) if u != v and self.colour(u, v) == BLUE]

    def negated(self) -> "ColouredCompleteGraph":
        """The colouring with every edge flipped."""
        return ColouredCompleteGraph.from_pair_function(
            self.n, lambda i, j: -self.colour(i, j)
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ColouredCompleteGraph)
            and self.n == other.n
            and self._bits == other._bits
        )

    def __hash__(self):
        return hash((self.n, self._bits))

    def __repr__(self):
        return f"ColouredCompleteGraph(n={self.n}, red={self.red_edge_count}/{self.edge_count})"


def is_balanced(g: ColouredCompleteGraph) -> bool:
    """True iff the colouring has equally many red and blue edges."""
    return 2 * g.red_edge_count == g.edge_count


def r_balanced_vertices(g: ColouredCompleteGraph, r: int) -> list[int]:
    """Vertices with at least r incident edges of each colour, ascending."""
    if r < 0:
        raise InvalidInputError(f"r must be non-negative, got {r}")
    return [v for v in range(g.n) if min(g.red_degree(v), g.blue_degree(v)) >= r]


class Forest:
    """An acyclic simple graph on n labelled vertices (isolated vertices allowed)."""

    __slots__ = ("n", "edges", "degree", "max_degree", "min_degree", "neighbours")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 1:
            raise InvalidInputError(f"need at least 1 vertex, got n={n}")
        norm = []
        seen = set()
        parent = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        degree = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidInputError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise InvalidInputError(f"self-loop at vertex {u}")
            if u > v:
                u, v = v, u
            if (u, v) in seen:
                raise InvalidInputError(f"duplicate edge ({u},{v})")
            seen.add((u, v))
            ru, rv = find(u), find(v)
            if ru == rv:
                raise InvalidInputError(f"edge ({u},{v}) closes a cycle")
            parent[ru] = rv
            degree[u] += 1
            degree[v] += 1
            norm.append((u, v))
        norm.sort()
        self.n = n
        self.edges = tuple(norm)
        self.degree = tuple(degree)
        self.max_degree = max(degree)
        self.min_degree = min(degree)
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in norm:
            adj[u].append(v)
            adj[v].append(u)
        self.neighbours = tuple(tuple(sorted(a)) for a in adj)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def isolated_vertices(self) -> list[int]:
        return [v for v in range(self.n) if self.degree[v] == 0]

    def __eq__(self, other) -> bool:
        return isinstance(other, Forest) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Forest(n={self.n}, m={len(self.edges)}, max_degree={self.max_degree})"


class Embedding:
    """A bijection from forest vertices onto K_n vertices with its cached colour sum."""

    __slots__ = ("forward", "inverse", "colour_sum")

    def __init__(self, forward: Iterable[int], colour_sum: int):
        fwd = tuple(forward)
        n = len(fwd)
        inv = [-1] * n
        for v, t in enumerate(fwd):
            if not (0 <= t < n) or inv[t] != -1:
                raise InvalidInputError("forward map is not a bijection on [n)")
            inv[t] = v
        self.forward = fwd
        self.inverse = tuple(inv)
        self.colour_sum = colour_sum

    @classmethod
    def build(cls, forward: Iterable[int], forest: Forest, graph: ColouredCompleteGraph) -> "Embedding":
        fwd = tuple(forward)
        emb = cls(fwd, 0)
        emb.colour_sum = _score(fwd, forest, graph)
        return emb

    @classmethod
    def identity(cls, forest: Forest, graph: ColouredCompleteGraph) -> "Embedding":
        return cls.build(range(forest.n), forest, graph)

    def __eq__(self, other) -> bool:
        return isinstance(other, Embedding) and self.forward == other.forward

    def __hash__(self):
        return hash(self.forward)

    def __repr__(self):
        return f"Embedding(sum={self.colour_sum}, map={list(self.forward)})"


def _score(forward: tuple[int, ...], forest: Forest, graph: ColouredCompleteGraph) -> int:
    total = 0
    for u, v in forest.edges:
        total += graph.colour(forward[u], forward[v])
    return total


def subgraph_sum(g: ColouredCompleteGraph, f: Embedding, forest: Forest) -> int:
    """Colour sum of the embedded forest, recomputed from scratch.

    This is the oracle for every cached sum in the package.
    """
    if len(f.forward) != forest.n or forest.n != g.n:
        raise InvalidInputError(
            f"domain mismatch: |V(F)|={forest.n}, |map|={len(f.forward)}, n={g.n}"
        )
    return _score(f.forward, forest, g)


def swap_delta(f: Embedding, u: int, v: int, forest: Forest, g: ColouredCompleteGraph) -> int:
    """Change in colour sum if the images of forest vertices u and v are exchanged.

    Only edges incident to u or v are rescored; the edge uv (if present) is
    unaffected because the colouring is symmetric.
    """
    fu, fv = f.forward[u], f.forward[v]
    delta = 0
    for w in forest.neighbours[u]:
        if w == v:
            continue
        fw = f.forward[w]
        delta += g.colour(fv, fw) - g.colour(fu, fw)
    for w in forest.neighbours[v]:
        if w == u:
            continue
        fw = f.forward[w]
        delta += g.colour(fu, fw) - g.colour(fv, fw)
    return delta


def swap_images(f: Embedding, u: int, v: int, forest: Forest, g: ColouredCompleteGraph) -> Embedding:
    """New embedding with the images of u and v exchanged; sum updated incrementally."""
    if u == v:
        raise InvalidInputError(f"cannot swap a vertex with itself (u=v={u})")
    delta = swap_delta(f, u, v, forest, g)
    fwd = list(f.forward)
    fwd[u], fwd[v] = fwd[v], fwd[u]
    out = Embedding(fwd, f.colour_sum + delta)
    return out


class PartialEmbedding:
    """An injective map from a subset of forest vertices into K_n vertices."""

    __slots__ = ("mapping",)

    def __init__(self, mapping: dict[int, int]):
        vals = list(mapping.values())
        if len(set(vals)) != len(vals):
            raise InvalidInputError("partial embedding is not injective")
        if any(v < 0 for v in mapping) or any(t < 0 for t in vals):
            raise InvalidInputError("negative vertex index")
        self.mapping = dict(sorted(mapping.items()))

    @property
    def domain(self) -> tuple[int, ...]:
        return tuple(self.mapping)

    def image(self) -> set[int]:
        return set(self.mapping.values())

    def __getitem__(self, v: int) -> int:
        return self.mapping[v]

    def __contains__(self, v: int) -> bool:
        return v in self.mapping

    def __len__(self) -> int:
        return len(self.mapping)

    def __iter__(self) -> Iterator[int]:
        return iter(self.mapping)

    def restrict(self, vertices: Iterable[int]) -> "PartialEmbedding":
        return PartialEmbedding({v: self.mapping[v] for v in vertices})

    def extended(self, v: int, target: int) -> "PartialEmbedding":
        m = dict(self.mapping)
        m[v] = target
        return PartialEmbedding(m)

    def __eq__(self, other) -> bool:
        return isinstance(other, PartialEmbedding) and self.mapping == other.mapping

    def __repr__(self):
        return f"PartialEmbedding({self.mapping})"


# ---------------------------------------------------------------------------
# Text / JSON formats
# ---------------------------------------------------------------------------
#
# Colouring file: line 1 is n; line i of the following n-1 lines (vertex i,
# 1-based over 0..n-1) has i characters over {R, B}, character j giving the
# colour of edge (i, j-1).
#
# Forest file: line 1 is "n m"; then m lines "u v".
#
# Embedding JSON: {"map": [t0, ..., t_{n-1}], "sum": s}.


def serialize_colouring(g: ColouredCompleteGraph) -> str:
    lines = [str(g.n)]
    for i in range(1, g.n):
        lines.append("".join("R" if g.colour(i, j) == RED else "B" for j in range(i)))
    return "\n".join(lines) + "\n"


def parse_colouring(text: str) -> ColouredCompleteGraph:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InvalidInputError("empty colouring file")
    try:
        n = int(lines[0])
    except ValueError:
        raise InvalidInputError(f"bad vertex count line: {lines[0]!r}") from None
    if len(lines) != n:
        raise InvalidInputError(f"expected {n - 1} colour rows, found {len(lines) - 1}")
    rows = []
    for i in range(1, n):
        row = lines[i]
        if len(row) != i or any(ch not in "RB" for ch in row):
            raise InvalidInputError(f"row {i} must be {i} characters over RB, got {row!r}")
        rows.append(row)
    return ColouredCompleteGraph.from_pair_function(
        n, lambda i, j: RED if rows[i - 1][j] == "R" else BLUE
    )


def serialize_forest(forest: Forest) -> str:
    lines = [f"{forest.n} {len(forest.edges)}"]
    lines.extend(f"{u} {v}" for u, v in forest.edges)
    return "\n".join(lines) + "\n"


def parse_forest(text: str) -> Forest:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InvalidInputError("empty forest file")
    head = lines[0].split()
    if len(head) != 2:
        raise InvalidInputError(f"bad header line: {lines[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise InvalidInputError(f"bad header line: {lines[0]!r}") from None
    if len(lines) - 1 != m:
        raise InvalidInputError(f"expected {m} edge lines, found {len(lines) - 1}")
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise InvalidInputError(f"bad edge line: {ln!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return Forest(n, edges)


def embedding_to_json(f: Embedding) -> dict:
    return {"map": list(f.forward), "sum": f.colour_sum}


def embedding_from_json(
    data: dict,
    forest: Forest | None = None,
    graph: ColouredCompleteGraph | None = None,
) -> Embedding:
    """Load an embedding; when forest and graph are given, the stored sum is checked."""
    if "map" not in data:
        raise InvalidInputError("embedding JSON missing 'map'")
    fwd = data["map"]
    stored = data.get("sum")
    if forest is not None and graph is not None:
        emb = Embedding.build(fwd, forest, graph)
        if stored is not None and stored != emb.colour_sum:
            raise InvalidInputError(
                f"stored sum {stored} disagrees with recomputed {emb.colour_sum}"
            )
        return emb
    if stored is None:
        raise InvalidInputError("embedding JSON missing 'sum' and no context to recompute")
    return Embedding(fwd, stored)


def embedding_json_dumps(f: Embedding) -> str:
    return json.dumps(embedding_to_json(f), sort_keys=True)
