"""Shared fixtures: deterministic graph corpus and oracle helpers."""

import itertools

import numpy as np
import pytest

import nbperc as nb
from nbperc import _kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Trigger jit compilation once so timed tests measure the work only."""
    g = nb.cycle_graph(4)
    idx = nb.build_edge_index(g)
    _kernels.hashimoto_matvec(idx.src, idx.dst, np.ones(idx.count), idx.n)
    row = np.repeat(np.arange(g.n), g.degrees())
    _kernels.adjacency_matvec(g.xadj, g.adjncy, row, np.ones(g.n))
    _kernels.newman_ziff_trial(g.xadj, g.adjncy, np.arange(g.n))
    order = np.array([0, 1, 2], np.int64)
    parent = np.array([-1, 0, 1], np.int64)
    _kernels.tree_reach(order, parent, np.zeros(3, bool), 0.5)


# ---------------------------------------------------------------------------
# special small graphs

def theta_graph(lengths):
    """Two hubs joined by internally disjoint paths of the given lengths."""
    edges = []
    nxt = 2
    for L in lengths:
        prev = 0
        for _ in range(L - 1):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
        edges.append((prev, 1))
    return nb.graph_from_edges(nxt, edges)


def dumbbell_graph(path_len):
    """Two triangles joined by a path of path_len extra vertices."""
    edges = [(0, 1), (1, 2), (0, 2)]
    prev, nxt = 2, 3
    for _ in range(path_len):
        edges.append((prev, nxt))
        prev = nxt
        nxt += 1
    a, b = nxt, nxt + 1
    edges += [(prev, a), (prev, b), (a, b)]
    return nb.graph_from_edges(nxt + 2, edges)


def wheel_graph(spokes):
    edges = [(0, i) for i in range(1, spokes + 1)]
    edges += [(i, i % spokes + 1) for i in range(1, spokes + 1)]
    return nb.graph_from_edges(spokes + 1, edges)


def complete_bipartite(a, b):
    return nb.graph_from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def grid_graph(rows, cols):
    def vid(r, c):
        return r * cols + c
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < rows:
                edges.append((vid(r, c), vid(r + 1, c)))
    return nb.graph_from_edges(rows * cols, edges)


def ladder_graph(rungs):
    edges = [(i, i + rungs) for i in range(rungs)]
    edges += [(i, i + 1) for i in range(rungs - 1)]
    edges += [(rungs + i, rungs + i + 1) for i in range(rungs - 1)]
    return nb.graph_from_edges(2 * rungs, edges)


def petersen_graph():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return nb.graph_from_edges(10, outer + spokes + inner)


def decorated_cycle(cycle_n, pendants, pend_len=1):
    """Cycle with `pendants` pendant chains of pend_len vertices per vertex."""
    g = nb.cycle_graph(cycle_n)
    edges = [tuple(e) for e in g.edges.tolist()]
    nxt = cycle_n
    for v in range(cycle_n):
        for _ in range(pendants):
            prev = v
            for _ in range(pend_len):
                edges.append((prev, nxt))
                prev = nxt
                nxt += 1
    return nb.graph_from_edges(nxt, edges)


def _connected_binomial(n, p, start_seed):
    """First seed at or above start_seed whose G(n, p) is connected and has a
    cycle; keeps corpus construction deterministic."""
    seed = start_seed
    while True:
        g = nb.binomial_random(n, p, seed)
        count, _ = nb.connected_components(g)
        if count == 1 and nb.backbone(g).graph.n > 0:
            return g, seed
        seed += 1


def build_corpus():
    """At least 50 connected non-forest graphs, all small enough for the
    dense oracles."""
    corpus = []
    for k in range(3, 13):
        corpus.append((f"cycle{k}", nb.cycle_graph(k)))
    for k in range(3, 9):
        corpus.append((f"K{k}", nb.complete_graph(k)))
    for a, b in [(2, 3), (3, 3), (2, 5), (4, 4)]:
        corpus.append((f"K{a},{b}", complete_bipartite(a, b)))
    for s in (5, 6, 7):
        corpus.append((f"wheel{s}", wheel_graph(s)))
    for lens in [(1, 2, 2), (2, 2, 2), (2, 3, 4)]:
        corpus.append((f"theta{lens}", theta_graph(lens)))
    for pl in (1, 3, 6):
        corpus.append((f"dumbbell{pl}", dumbbell_graph(pl)))
    corpus.append(("decorated(5,1)", decorated_cycle(5, 1, 3)))
    corpus.append(("decorated(3,1)", decorated_cycle(3, 1, 1)))
    corpus.append(("decorated(7,1)", decorated_cycle(7, 1, 5)))
    corpus.append(("decorated(4,2)", decorated_cycle(4, 2, 1)))
    for d, n, seed in [(3, 16, 1), (3, 24, 2), (4, 16, 3), (4, 24, 4),
                       (5, 16, 5), (5, 24, 6), (3, 50, 7), (4, 50, 8)]:
        corpus.append((f"rrg(d={d},n={n})", nb.random_regular(d, n, seed)))
    seed = 100
    for n in (20, 24, 28, 32, 36, 40, 30, 26):
        g, seed = _connected_binomial(n, 0.15, seed)
        corpus.append((f"gnp(n={n},seed={seed})", g))
        seed += 1
    for r, c in [(3, 3), (3, 4), (4, 4)]:
        corpus.append((f"grid{r}x{c}", grid_graph(r, c)))
    corpus.append(("petersen", petersen_graph()))
    for rungs in (3, 5):
        corpus.append((f"ladder{rungs}", ladder_graph(rungs)))
    return corpus


def build_forests():
    two_trees = nb.graph_from_edges(9, [(0, 1), (1, 2), (3, 4), (4, 5), (4, 6), (6, 7), (6, 8)])
    star = nb.graph_from_edges(6, [(0, i) for i in range(1, 6)])
    return [
        ("path2", nb.path_graph(2)),
        ("path5", nb.path_graph(5)),
        ("path7", nb.path_graph(7)),
        ("star5", star),
        ("regular_tree(3,3)", nb.regular_tree(3, 3)),
        ("chain_tree(3,1,2,2)", nb.chain_tree(3, 1, 2, 2)),
        ("two_trees", two_trees),
        ("single_vertex", nb.graph_from_edges(1, [])),
    ]


@pytest.fixture(scope="session")
def corpus():
    return build_corpus()


@pytest.fixture(scope="session")
def forests():
    return build_forests()


# ---------------------------------------------------------------------------
# oracles

def dense_nb_rho(g):
    """Spectral radius of the materialized non-backtracking matrix."""
    idx = nb.build_edge_index(g)
    B = nb.dense_hashimoto(idx)
    if B.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(B))))


def dense_adjacency_rho(g):
    A = np.zeros((g.n, g.n))
    A[g.edges[:, 0], g.edges[:, 1]] = 1.0
    A[g.edges[:, 1], g.edges[:, 0]] = 1.0
    return float(np.max(np.linalg.eigvalsh(A)))


def brute_bridges(g):
    """Remove each edge in turn and test connectivity."""
    out = set()
    for k in range(g.m):
        others = np.delete(g.edges, k, axis=0)
        h = nb.graph_from_edges(g.n, others)
        count, _ = nb.connected_components(h)
        if count > 1:
            out.add((int(g.edges[k, 0]), int(g.edges[k, 1])))
    return out


def reach_recursive(g, root, p, boundary):
    """Independent top-down survival recursion (complement formulation)."""
    import sys
    sys.setrecursionlimit(max(10000, 10 * g.n))
    bset = set(boundary)

    def down(v, parent):
        if v in bset:
            return 1.0
        none = 1.0
        for w in g.neighbors(v).tolist():
            if w != parent:
                none *= 1.0 - p * down(w, v)
        return 1.0 - none

    return down(root, -1)


def reach_enumeration(g, root, p, boundary):
    """Exact reach by enumerating open sets of all non-root vertices."""
    others = [v for v in range(g.n) if v != root]
    bset = set(boundary)
    total = 0.0
    for bits in itertools.product((0, 1), repeat=len(others)):
        open_set = {root} | {v for v, b in zip(others, bits) if b}
        prob = p ** sum(bits) * (1 - p) ** (len(others) - sum(bits))
        seen = {root}
        stack = [root]
        hit = root in bset
        while stack and not hit:
            v = stack.pop()
            for w in g.neighbors(v).tolist():
                if w in open_set and w not in seen:
                    if w in bset:
                        hit = True
                        break
                    seen.add(w)
                    stack.append(w)
        total += prob * hit
    return total


def largest_cluster_sizes(g, open_set):
    """Cluster sizes of the subgraph induced by open vertices."""
    seen = set()
    sizes = []
    for s in open_set:
        if s in seen:
            continue
        seen.add(s)
        size = 1
        stack = [s]
        while stack:
            v = stack.pop()
            for w in g.neighbors(v).tolist():
                if w in open_set and w not in seen:
                    seen.add(w)
                    size += 1
                    stack.append(w)
        sizes.append(size)
    return sizes
