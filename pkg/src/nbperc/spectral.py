"""Non-backtracking (oriented line graph) operator and spectral radii.

The directed-edge operator is applied matrix-free; a dense materialization
exists only as a size-capped test oracle. The adjacency spectral radius uses
the same shifted power iteration on the symmetric adjacency operator.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as kernels
from .errors import InvalidPatternError, PatternFormatError
from .graphs import Graph, backbone, connected_components, induced_subgraph

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 100_000


@dataclass(frozen=True, eq=False)
class EdgeIndex:
    """Enumeration of the 2m directed edges of a graph.

    Edge 2i runs edges[i][0] -> edges[i][1] and edge 2i+1 is its reverse, so
    reversal is id XOR 1. out_eids groups edge ids by source vertex
    (ascending ids within each group), with out_xadj the offsets.
    """

    n: int
    count: int
    src: np.ndarray
    dst: np.ndarray
    out_xadj: np.ndarray
    out_eids: np.ndarray

    def rev(self, e: int) -> int:
        return e ^ 1

    def out_edges(self, v: int) -> np.ndarray:
        return self.out_eids[self.out_xadj[v]:self.out_xadj[v + 1]]


def build_edge_index(g: Graph) -> EdgeIndex:
    """Directed-edge enumeration of a simple graph."""
    m2 = 2 * g.m
    src = np.empty(m2, np.int64)
    dst = np.empty(m2, np.int64)
    if g.m:
        src[0::2] = g.edges[:, 0]
        src[1::2] = g.edges[:, 1]
        dst[0::2] = g.edges[:, 1]
        dst[1::2] = g.edges[:, 0]
    order = np.argsort(src, kind="stable").astype(np.int64)
    out_xadj = np.zeros(g.n + 1, np.int64)
    np.cumsum(np.bincount(src, minlength=g.n), out=out_xadj[1:])
    for a in (src, dst, out_xadj, order):
        a.setflags(write=False)
    return EdgeIndex(n=g.n, count=m2, src=src, dst=dst,
                     out_xadj=out_xadj, out_eids=order)


def hashimoto_apply(index: EdgeIndex, x: np.ndarray) -> np.ndarray:
    """One non-backtracking walk step.

    y[e] collects x over all directed edges f that end where e starts, except
    the reversal of e itself:

        y[e] = sum_{f : dst(f) = src(e)} x[f]  -  x[rev(e)]

    O(n + m) work; the per-vertex sums accumulate in increasing edge-id
    order, so results are bit-for-bit reproducible.
    """
    x = np.asarray(x, np.float64)
    if x.shape != (index.count,):
        raise ValueError(f"vector length {x.shape} does not match {index.count} directed edges")
    return kernels.hashimoto_matvec(index.src, index.dst, x, index.n)


@dataclass(frozen=True, eq=False)
class SpectralResult:
    """Outcome of a spectral-radius computation.

    nilpotent marks graphs whose operator has no recurrent part (forests),
    where rho is exactly 0. residual is ||B v - rho v||_2 for the final unit
    iterate of the component that attains rho.
    """

    rho: float
    iterations: int
    converged: bool
    nilpotent: bool
    residual: float
    components: int = 1


def _power_shifted(apply_fn, size, tol, max_iter):
    """Power iteration on (Op + I) from the normalized all-ones vector.

    The +I shift makes every recurrent class aperiodic. Convergence requires
    a stable Rayleigh quotient over a 10-iteration window plus a small
    residual. Returns (rho, iterations, converged, residual) for Op itself.
    """
    x = np.full(size, 1.0 / math.sqrt(size))
    mus = []
    mu = 0.0
    residual = math.inf
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        y = apply_fn(x)
        y += x
        mu = float(x @ y)
        residual = float(np.linalg.norm(y - mu * x))
        mus.append(mu)
        if it > 10 and residual <= tol and abs(mu - mus[-11]) <= tol * max(1.0, abs(mu)):
            converged = True
            break
        norm = float(np.linalg.norm(y))
        if norm == 0.0:
            return 0.0, it, True, 0.0
        x = y / norm
    return mu - 1.0, it, converged, residual


def nb_spectral_radius(g: Graph, tol: float = DEFAULT_TOL,
                       max_iter: int = DEFAULT_MAX_ITER) -> SpectralResult:
    """Spectral radius of the non-backtracking operator.

    The graph is first reduced to its backbone: pendant trees feed no
    recurrent non-backtracking walks, so they cannot change the radius and
    only slow the iteration down. An empty backbone means the graph is a
    forest, the operator is nilpotent and rho = 0. Otherwise every backbone
    component has minimum degree 2, hence contains a cycle and rho >= 1; the
    radius is computed per component and the maximum returned.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    core = backbone(g).graph
    if core.n == 0:
        return SpectralResult(rho=0.0, iterations=0, converged=True,
                              nilpotent=True, residual=0.0, components=0)
    count, labels = connected_components(core)
    best = (-math.inf, math.inf)
    total_iters = 0
    all_ok = True
    for c in range(count):
        sub = induced_subgraph(core, np.flatnonzero(labels == c))
        idx = build_edge_index(sub)

        def step(vec, _idx=idx):
            return kernels.hashimoto_matvec(_idx.src, _idx.dst, vec, _idx.n)

        rho, iters, ok, res = _power_shifted(step, idx.count, tol, max_iter)
        total_iters += iters
        all_ok = all_ok and ok
        if rho > best[0]:
            best = (rho, res)
    return SpectralResult(rho=best[0], iterations=total_iters, converged=all_ok,
                          nilpotent=False, residual=best[1], components=count)


def adjacency_spectral_radius(g: Graph, tol: float = DEFAULT_TOL,
                              max_iter: int = DEFAULT_MAX_ITER) -> float:
    """Largest adjacency eigenvalue, by shifted power iteration."""
    rho, _, _, _ = adjacency_power(g, tol, max_iter)
    return rho


def adjacency_power(g: Graph, tol: float = DEFAULT_TOL,
                    max_iter: int = DEFAULT_MAX_ITER):
    """Power iteration on A + I; returns (rho, iterations, converged, residual).

    The shift removes the period-2 oscillation on bipartite graphs. For the
    symmetric adjacency operator the final residual also bounds the
    eigenvalue error.
    """
    if g.m == 0:
        raise ValueError("adjacency spectral radius needs at least one edge")
    if tol <= 0:
        raise ValueError("tol must be positive")
    row = np.repeat(np.arange(g.n, dtype=np.int64), g.degrees())

    def step(vec):
        return kernels.adjacency_matvec(g.xadj, g.adjncy, row, vec)

    return _power_shifted(step, g.n, tol, max_iter)


def companion_spectral_radius(g: Graph, cap: int = 2000) -> float:
    """Cross-check of the non-backtracking radius through vertex variables.

    Summing a directed-edge eigenvector over the out-edges of each vertex
    turns the edge eigenproblem into the quadratic pencil
    lambda^2 y = lambda A y - (D - I) y, linearized as the 2n x 2n block map
    (y, z) -> (A y + (I - D) z, y). Its spectrum is the non-backtracking
    spectrum up to extra +-1 eigenvalues, so for graphs containing a cycle
    the radius is the larger of 1 and the largest companion modulus.
    """
    if g.n > cap:
        raise ValueError(
            f"dense companion computation is capped at n <= {cap}; "
            "use nb_spectral_radius for larger graphs"
        )
    if g.m == 0:
        raise ValueError("companion spectral radius needs at least one edge")
    n = g.n
    A = np.zeros((n, n))
    A[g.edges[:, 0], g.edges[:, 1]] = 1.0
    A[g.edges[:, 1], g.edges[:, 0]] = 1.0
    M = np.zeros((2 * n, 2 * n))
    M[:n, :n] = A
    M[:n, n:] = np.diag(1.0 - g.degrees().astype(np.float64))
    M[n:, :n] = np.eye(n)
    mods = np.abs(np.linalg.eigvals(M))
    top = float(mods.max())
    has_cycle = backbone(g).graph.n > 0
    return max(top, 1.0) if has_cycle else top


def dense_hashimoto(index: EdgeIndex, max_count: int = 400) -> np.ndarray:
    """Materialized non-backtracking matrix, for oracle checks only.

    B[e, f] = 1 when f continues e without backtracking. Capped because the
    production path never needs the dense form.
    """
    k = index.count
    if k > max_count:
        raise ValueError(f"dense oracle capped at {max_count} directed edges, got {k}")
    B = np.zeros((k, k))
    for e in range(k):
        v = int(index.dst[e])
        for f in index.out_edges(v).tolist():
            if f != (e ^ 1):
                B[e, f] = 1.0
    return B


# ---------------------------------------------------------------------------
# quotient patterns for infinite quasi-regular trees

@dataclass(frozen=True, eq=False)
class QuotientPattern:
    """Finite description of an infinite tree by vertex classes.

    counts[i][j] is the number of class-j neighbors that every class-i vertex
    has. Support must be symmetric: a class-j neighbor of class i implies a
    class-i neighbor of class j.
    """

    counts: np.ndarray

    @property
    def classes(self) -> int:
        return int(self.counts.shape[0])


def quotient_pattern(counts) -> QuotientPattern:
    """Validate and freeze a class-count matrix."""
    D = np.asarray(counts)
    if D.ndim != 2 or D.shape[0] != D.shape[1] or D.shape[0] == 0:
        raise PatternFormatError("counts must be a nonempty square matrix")
    if not np.issubdtype(D.dtype, np.integer):
        if np.any(D != np.floor(D)):
            raise PatternFormatError("counts must be integers")
        D = D.astype(np.int64)
    else:
        D = D.astype(np.int64)
    if np.any(D < 0):
        raise PatternFormatError("counts must be nonnegative")
    if np.any((D > 0) != (D.T > 0)):
        raise PatternFormatError(
            "asymmetric support: counts[i][j] > 0 requires counts[j][i] > 0"
        )
    if not np.any(D > 0):
        raise PatternFormatError("pattern has no edges between classes")
    D.setflags(write=False)
    return QuotientPattern(counts=D)


def parse_pattern(text: str) -> QuotientPattern:
    """Parse the JSON pattern document: {"classes": c, "counts": [[...], ...]}."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PatternFormatError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or "classes" not in doc or "counts" not in doc:
        raise PatternFormatError('pattern document needs "classes" and "counts" keys')
    c = doc["classes"]
    rows = doc["counts"]
    if not isinstance(c, int) or c < 1:
        raise PatternFormatError('"classes" must be a positive integer')
    if (not isinstance(rows, list) or len(rows) != c
            or any(not isinstance(r, list) or len(r) != c for r in rows)):
        raise PatternFormatError(f'"counts" must be a {c} x {c} integer matrix')
    if any(not isinstance(e, int) or isinstance(e, bool) for r in rows for e in r):
        raise PatternFormatError('"counts" entries must be integers')
    return quotient_pattern(rows)


@dataclass(frozen=True, eq=False)
class PatternSpectrum:
    """Non-backtracking transfer matrix of a pattern and its spectral radius.

    States are the ordered class pairs (i, j) with counts[i][j] > 0; the
    matrix entry from (i, j) to (j, l) is counts[j][l] minus one when l = i,
    which removes the backtracking continuation.
    """

    states: tuple[tuple[int, int], ...]
    matrix: np.ndarray
    rho: float


def pattern_hashimoto(pattern: QuotientPattern) -> PatternSpectrum:
    """Dense class-pair transfer matrix and its spectral radius."""
    D = pattern.counts
    c = pattern.classes
    states = [(i, j) for i in range(c) for j in range(c) if D[i, j] > 0]
    pos = {s: k for k, s in enumerate(states)}
    M = np.zeros((len(states), len(states)))
    for (i, j), a in pos.items():
        for l in range(c):
            if D[j, l] > 0:
                entry = int(D[j, l]) - (1 if l == i else 0)
                if entry < 0:
                    raise InvalidPatternError(
                        f"inconsistent counts: transition ({i},{j})->({j},{l}) "
                        "has negative multiplicity"
                    )
                M[a, pos[(j, l)]] = entry
    rho = float(np.max(np.abs(np.linalg.eigvals(M))))
    M.setflags(write=False)
    return PatternSpectrum(states=tuple(states), matrix=M, rho=rho)
