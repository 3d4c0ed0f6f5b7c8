"""Immutable simple graphs: ingestion, family generators, backbone reduction,
bridge detection and cycle-unrolling truncations.

Vertices are dense 0-based integers. All arrays are read-only after
construction, so Graph values can be shared freely across threads.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import EdgeListError

TREE_FAMILIES = ("regular_tree", "chain_tree", "path")
RANDOM_FAMILIES = ("random_regular", "binomial_random")
FAMILIES = TREE_FAMILIES[:2] + ("cycle", "complete", "path") + RANDOM_FAMILIES


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph in compressed adjacency form.

    n vertices, m undirected edges. adjncy holds the sorted neighbor lists
    back to back, xadj the per-vertex offsets into it. edges is the canonical
    (m, 2) array with u < v in each row, sorted lexicographically.
    """

    n: int
    m: int
    xadj: np.ndarray
    adjncy: np.ndarray
    edges: np.ndarray

    def degrees(self) -> np.ndarray:
        return np.diff(self.xadj)

    def neighbors(self, v: int) -> np.ndarray:
        return self.adjncy[self.xadj[v]:self.xadj[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        i = int(np.searchsorted(nb, v))
        return i < nb.size and nb[i] == v


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def graph_from_edges(n: int, pairs) -> Graph:
    """Build a Graph over vertices 0..n-1 from an iterable of (u, v) pairs.

    Rejects self-loops, duplicate edges and out-of-range endpoints.
    """
    if n < 0:
        raise ValueError("vertex count must be nonnegative")
    e = np.asarray(list(pairs) if not isinstance(pairs, np.ndarray) else pairs,
                   dtype=np.int64)
    if e.size == 0:
        e = e.reshape(0, 2)
    if e.ndim != 2 or e.shape[1] != 2:
        raise ValueError("edge pairs must be an (m, 2) sequence")
    m = e.shape[0]
    if m:
        if e.min() < 0 or e.max() >= n:
            raise ValueError("edge endpoint out of range")
        u = np.minimum(e[:, 0], e[:, 1])
        v = np.maximum(e[:, 0], e[:, 1])
        if np.any(u == v):
            bad = int(u[np.argmax(u == v)])
            raise ValueError(f"self-loop at vertex {bad}; only simple graphs are supported")
        order = np.lexsort((v, u))
        u, v = u[order], v[order]
        if np.any((u[1:] == u[:-1]) & (v[1:] == v[:-1])):
            k = int(np.argmax((u[1:] == u[:-1]) & (v[1:] == v[:-1])))
            raise ValueError(f"duplicate edge ({u[k]}, {v[k]})")
        src = np.concatenate([u, v])
        dst = np.concatenate([v, u])
        half = np.lexsort((dst, src))
        adjncy = dst[half]
        deg = np.bincount(src, minlength=n)
        edges = np.column_stack([u, v])
    else:
        adjncy = np.empty(0, np.int64)
        deg = np.zeros(n, np.int64)
        edges = np.empty((0, 2), np.int64)
    xadj = np.zeros(n + 1, np.int64)
    np.cumsum(deg, out=xadj[1:])
    return Graph(n=int(n), m=int(m), xadj=_freeze(xadj),
                 adjncy=_freeze(adjncy), edges=_freeze(edges))


# ---------------------------------------------------------------------------
# text ingestion

@dataclass(frozen=True, eq=False)
class ParseResult:
    """Parsed graph plus ingestion metadata.

    duplicates counts collapsed repeated edge lines. labels[new_id] gives the
    original vertex id; sparse ids are compacted to 0..n-1 so downstream
    kernels can index arrays directly.
    """

    graph: Graph
    duplicates: int
    labels: np.ndarray


def parse_edge_list(text) -> ParseResult:
    """Parse the one-edge-per-line format: two whitespace-separated integers,
    '#' starts a comment, blank lines are ignored."""
    if hasattr(text, "read"):
        text = text.read()
    if isinstance(text, str):
        lines = text.splitlines()
    else:
        lines = [str(s) for s in text]
    pairs = []
    seen = set()
    duplicates = 0
    for i, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise EdgeListError(f"expected two integer tokens, got {raw!r}", line=i)
        try:
            a, b = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise EdgeListError(f"non-integer token in {raw!r}", line=i) from None
        if a < 0 or b < 0:
            raise EdgeListError(f"negative vertex id in {raw!r}", line=i)
        if a == b:
            raise EdgeListError(f"self-loop {a} {b}; only simple graphs are supported", line=i)
        key = (a, b) if a < b else (b, a)
        if key in seen:
            duplicates += 1
            continue
        seen.add(key)
        pairs.append(key)
    if pairs:
        arr = np.asarray(pairs, dtype=np.int64)
        labels = np.unique(arr)
        compact = np.searchsorted(labels, arr)
    else:
        labels = np.empty(0, np.int64)
        compact = np.empty((0, 2), np.int64)
    g = graph_from_edges(labels.size, compact)
    return ParseResult(graph=g, duplicates=duplicates, labels=_freeze(labels))


def format_edge_list(g: Graph) -> str:
    """Inverse of parse_edge_list for dense-id graphs: one 'u v' line per edge."""
    return "".join(f"{u} {v}\n" for u, v in g.edges.tolist())


# ---------------------------------------------------------------------------
# family generators

@dataclass(frozen=True)
class FamilySpec:
    """Parameters naming one graph from a supported family.

    family is one of: regular_tree, chain_tree, cycle, complete, path,
    random_regular, binomial_random. Tree families are finite truncations;
    depth counts backbone generations grown from the root.
    """

    family: str
    d: int | None = None
    r: int | None = None
    chain_len: int | None = None
    depth: int | None = None
    n: int | None = None
    p: float | None = None
    seed: int | None = None


def _require(cond, message):
    if not cond:
        raise ValueError(message)


def _backbone_parents(d: int, depth: int):
    """Parent array and generation start offsets for the tree whose root has
    d children and whose later vertices have d - 1 children each."""
    chunks = []
    starts = [0]
    gen_start, gen_size, nxt = 0, 1, 1
    for g in range(1, depth + 1):
        k = d if g == 1 else d - 1
        prev = np.arange(gen_start, gen_start + gen_size, dtype=np.int64)
        chunks.append(np.repeat(prev, k))
        gen_start = nxt
        gen_size = prev.size * k
        nxt += gen_size
        starts.append(gen_start)
    parents = np.concatenate(chunks) if chunks else np.empty(0, np.int64)
    starts.append(nxt)
    return parents, starts


def regular_tree(d: int, depth: int) -> Graph:
    """Truncation of the d-regular tree: every vertex of the first `depth`
    generations has full degree d except the depth-boundary leaves."""
    _require(d >= 2, "regular_tree requires d >= 2")
    _require(depth >= 0, "depth must be nonnegative")
    parents, _ = _backbone_parents(d, depth)
    n = parents.size + 1
    children = np.arange(1, n, dtype=np.int64)
    return graph_from_edges(n, np.column_stack([parents, children]))


def _chain_tree(d, r, chain_len, depth, decorate_upto=None):
    parents, starts = _backbone_parents(d, depth)
    nb = parents.size + 1
    cut = nb if decorate_upto is None else decorate_upto
    backbone_edges = np.column_stack([parents, np.arange(1, nb, dtype=np.int64)])
    hosts = np.repeat(np.arange(cut, dtype=np.int64), r)
    base = nb + np.arange(cut * r, dtype=np.int64) * chain_len
    attach = np.column_stack([hosts, base])
    if chain_len > 1:
        u = (base[:, None] + np.arange(chain_len - 1)).ravel()
        inner = np.column_stack([u, u + 1])
        edges = np.concatenate([backbone_edges, attach, inner])
    else:
        edges = np.concatenate([backbone_edges, attach])
    return graph_from_edges(nb + cut * r * chain_len, edges), starts


def chain_tree(d: int, r: int, chain_len: int, depth: int) -> Graph:
    """Truncated decorated tree: a depth-`depth` regular_tree(d) backbone with
    r pendant chains of chain_len vertices attached to every backbone vertex,
    boundary generation included."""
    _require(d >= 3, "chain_tree requires d >= 3")
    _require(r >= 1, "chain_tree requires r >= 1")
    _require(chain_len >= 1, "chain_tree requires chain length >= 1")
    _require(depth >= 0, "depth must be nonnegative")
    g, _ = _chain_tree(d, r, chain_len, depth)
    return g


def cycle_graph(n: int) -> Graph:
    _require(n >= 3, "cycle requires n >= 3")
    i = np.arange(n, dtype=np.int64)
    return graph_from_edges(n, np.column_stack([i, (i + 1) % n]))


def path_graph(n: int) -> Graph:
    _require(n >= 1, "path requires n >= 1")
    i = np.arange(n - 1, dtype=np.int64)
    return graph_from_edges(n, np.column_stack([i, i + 1]))


def complete_graph(n: int) -> Graph:
    _require(n >= 1, "complete requires n >= 1")
    iu = np.triu_indices(n, k=1)
    return graph_from_edges(n, np.column_stack(iu).astype(np.int64))


def random_regular(d: int, n: int, seed: int, max_retries: int = 200_000) -> Graph:
    """Uniform simple d-regular graph via the pairing model: shuffle the n*d
    stubs, pair them up, and reject the whole pairing on any loop or repeated
    edge. Rejection keeps the conditional distribution exactly uniform."""
    _require(seed is not None, "random families require a seed")
    _require(0 <= d < n, "random_regular requires 0 <= d < n")
    _require((n * d) % 2 == 0, "random_regular requires n * d even")
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n, dtype=np.int64), d)
    for _ in range(max_retries):
        perm = rng.permutation(stubs)
        u = perm[0::2]
        v = perm[1::2]
        if np.any(u == v):
            continue
        lo = np.minimum(u, v)
        hi = np.maximum(u, v)
        key = lo * n + hi
        key.sort()
        if np.any(key[1:] == key[:-1]):
            continue
        return graph_from_edges(n, np.column_stack([lo, hi]))
    raise ValueError(
        f"no simple pairing found for d={d}, n={n} within {max_retries} retries"
    )


def binomial_random(n: int, p: float, seed: int) -> Graph:
    """G(n, p): the number of edges is Binomial(C(n,2), p) and the edge set a
    uniform subset of that size (Floyd sampling), so large sparse graphs cost
    O(m) instead of O(n^2)."""
    _require(seed is not None, "random families require a seed")
    _require(n >= 1, "binomial_random requires n >= 1")
    _require(0.0 <= p <= 1.0, "edge probability must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    total = n * (n - 1) // 2
    k = int(rng.binomial(total, p)) if total else 0
    chosen = set()
    for t in range(total - k, total):
        pick = int(rng.integers(0, t + 1))
        chosen.add(t if pick in chosen else pick)
    idx = np.fromiter(chosen, np.int64, len(chosen))
    idx.sort()
    # invert the row-major upper-triangle linearization
    i = ((2 * n - 1) - np.sqrt((2.0 * n - 1) ** 2 - 8.0 * idx)) // 2
    i = i.astype(np.int64)
    off = i * (2 * n - i - 1) // 2
    too_far = off > idx
    while np.any(too_far):
        i[too_far] -= 1
        off = i * (2 * n - i - 1) // 2
        too_far = off > idx
    nxt = (i + 1) * (2 * n - i - 2) // 2
    too_near = nxt <= idx
    while np.any(too_near):
        i[too_near] += 1
        nxt = (i + 1) * (2 * n - i - 2) // 2
        too_near = nxt <= idx
    off = i * (2 * n - i - 1) // 2
    j = i + 1 + (idx - off)
    return graph_from_edges(n, np.column_stack([i, j]))


def generate(spec: FamilySpec) -> Graph:
    """Build the graph named by a FamilySpec. Deterministic for a fixed seed."""
    f = spec.family
    if f == "regular_tree":
        _require(spec.d is not None and spec.depth is not None,
                 "regular_tree needs d and depth")
        return regular_tree(spec.d, spec.depth)
    if f == "chain_tree":
        _require(None not in (spec.d, spec.r, spec.chain_len, spec.depth),
                 "chain_tree needs d, r, chain_len and depth")
        return chain_tree(spec.d, spec.r, spec.chain_len, spec.depth)
    if f == "cycle":
        _require(spec.n is not None, "cycle needs n")
        return cycle_graph(spec.n)
    if f == "complete":
        _require(spec.n is not None, "complete needs n")
        return complete_graph(spec.n)
    if f == "path":
        _require(spec.n is not None, "path needs n")
        return path_graph(spec.n)
    if f == "random_regular":
        _require(spec.d is not None and spec.n is not None,
                 "random_regular needs d and n")
        return random_regular(spec.d, spec.n, spec.seed)
    if f == "binomial_random":
        _require(spec.n is not None and spec.p is not None,
                 "binomial_random needs n and p")
        return binomial_random(spec.n, spec.p, spec.seed)
    raise ValueError(f"unknown family {f!r}; supported: {', '.join(FAMILIES)}")


# ---------------------------------------------------------------------------
# structure

def degree_moment(g: Graph, power: int) -> float:
    """Mean of degree**power over all vertices."""
    if g.n == 0:
        raise ValueError("degree moment of the empty graph is undefined")
    if power < 1:
        raise ValueError("power must be a positive integer")
    return float(np.mean(g.degrees().astype(np.float64) ** power))


def connected_components(g: Graph) -> tuple[int, np.ndarray]:
    """Label vertices by component; returns (count, labels)."""
    labels = np.full(g.n, -1, np.int64)
    xadj, adjncy = g.xadj, g.adjncy
    count = 0
    for s in range(g.n):
        if labels[s] >= 0:
            continue
        labels[s] = count
        stack = [s]
        while stack:
            v = stack.pop()
            for w in adjncy[xadj[v]:xadj[v + 1]].tolist():
                if labels[w] < 0:
                    labels[w] = count
                    stack.append(w)
        count += 1
    return count, _freeze(labels)


def induced_subgraph(g: Graph, vertices: np.ndarray) -> Graph:
    """Subgraph on the given (sorted, unique) vertex ids, relabeled 0..k-1."""
    vertices = np.asarray(vertices, np.int64)
    remap = np.full(g.n, -1, np.int64)
    remap[vertices] = np.arange(vertices.size, dtype=np.int64)
    if g.m:
        e = remap[g.edges]
        e = e[(e[:, 0] >= 0) & (e[:, 1] >= 0)]
    else:
        e = np.empty((0, 2), np.int64)
    return graph_from_edges(vertices.size, e)


@dataclass(frozen=True, eq=False)
class BackboneResult:
    """2-core of a graph plus the surviving original vertex ids."""

    graph: Graph
    vertices: np.ndarray


def backbone(g: Graph) -> BackboneResult:
    """Recursively strip vertices of degree < 2. Empty exactly for forests;
    otherwise the result has minimum degree 2. Idempotent."""
    deg = g.degrees().copy()
    alive = np.ones(g.n, bool)
    todo = deque(np.flatnonzero(deg < 2).tolist())
    while todo:
        v = todo.popleft()
        if not alive[v] or deg[v] >= 2:
            continue
        alive[v] = False
        for w in g.neighbors(v).tolist():
            if alive[w]:
                deg[w] -= 1
                if deg[w] < 2:
                    todo.append(w)
    survivors = np.flatnonzero(alive).astype(np.int64)
    return BackboneResult(graph=induced_subgraph(g, survivors),
                          vertices=_freeze(survivors))


def find_bridges(g: Graph) -> set[tuple[int, int]]:
    """All edges whose removal disconnects g, via one iterative lowlink pass.

    Requires a connected input so that 'bridge' is unambiguous.
    """
    count, labels = connected_components(g)
    if g.n and count != 1:
        sizes = np.bincount(labels).tolist()
        raise ValueError(
            f"graph is disconnected ({count} components of sizes {sizes}); "
            "bridges are only defined for connected graphs"
        )
    n = g.n
    if n == 0:
        return set()
    xadj = g.xadj.tolist()
    adjncy = g.adjncy.tolist()
    disc = [-1] * n
    low = [0] * n
    parent = [-1] * n
    cursor = list(xadj[:-1])
    bridges: set[tuple[int, int]] = set()
    timer = 0
    disc[0] = low[0] = timer
    timer += 1
    stack = [0]
    while stack:
        v = stack[-1]
        if cursor[v] < xadj[v + 1]:
            w = adjncy[cursor[v]]
            cursor[v] += 1
            if disc[w] == -1:
                parent[w] = v
                disc[w] = low[w] = timer
                timer += 1
                stack.append(w)
            elif w != parent[v]:
                if disc[w] < low[v]:
                    low[v] = disc[w]
        else:
            stack.pop()
            if stack:
                u = stack[-1]
                if low[v] < low[u]:
                    low[u] = low[v]
                if low[v] > disc[u]:
                    bridges.add((min(u, v), max(u, v)))
    return bridges


def scu_truncation(g: Graph, b: tuple[int, int], copies: int) -> Graph:
    """Finite section of the cycle unrolling at a non-bridge edge b.

    Deleting b leaves a connected two-terminal graph with source b[1] and
    sink b[0]; `copies` disjoint copies are chained in series, the source of
    copy i joined to the sink of copy i+1 by a fresh edge standing in for b.
    The result has copies*n vertices and copies*m - 1 edges; chain ends stay
    open.
    """
    if copies < 1:
        raise ValueError("copies must be >= 1")
    u, v = (int(b[0]), int(b[1]))
    if u > v:
        u, v = v, u
    if u == v or not (0 <= u < g.n) or not (0 <= v < g.n) or not g.has_edge(u, v):
        raise ValueError(f"({b[0]}, {b[1]}) is not an edge of the graph")
    if (u, v) in find_bridges(g):
        raise ValueError(
            f"edge ({u}, {v}) is a bridge; deleting it disconnects the "
            "two-terminal graph, so it cannot be unrolled"
        )
    keep = g.edges[~((g.edges[:, 0] == u) & (g.edges[:, 1] == v))]
    n = g.n
    parts = [keep + i * n for i in range(copies)]
    if copies > 1:
        i = np.arange(copies - 1, dtype=np.int64)
        links = np.column_stack([v + i * n, u + (i + 1) * n])
        parts.append(links)
    return graph_from_edges(copies * n, np.concatenate(parts))
