"""Threshold estimates and bounds for a graph, and the exact recursion on
finite tree truncations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as kernels
from .errors import InvalidPatternError
from .graphs import (FamilySpec, Graph, TREE_FAMILIES, _chain_tree, backbone,
                     connected_components, degree_moment, path_graph,
                     regular_tree)
from .spectral import (DEFAULT_MAX_ITER, DEFAULT_TOL, QuotientPattern,
                       adjacency_power, nb_spectral_radius, pattern_hashimoto)

FOREST_REASON = ("forest: the non-backtracking radius is 0 and any finite "
                 "graph only percolates at p = 1")


@dataclass(frozen=True, eq=False)
class BoundsReport:
    """All threshold estimates and bounds for one graph.

    estimate_random is the uncorrelated random-graph heuristic
    <d> / (<d^2> - <d>); it is reported for comparison only, never used as a
    bound. bound_nb = 1/rho(nonbacktracking) is the rigorous lower bound,
    bound_adjacency = 1/rho(adjacency) the strictly smaller one. Undefined
    values are None with a companion *_reason string.
    """

    n: int
    m: int
    d_max: int
    d_min: int
    connected: bool
    forest: bool
    converged: bool
    nb_rho: float
    adjacency_rho: float
    estimate_random: float | None
    bound_maxdeg: float | None
    bound_nb: float | None
    bound_adjacency: float
    estimate_random_reason: str | None = None
    bound_maxdeg_reason: str | None = None
    bound_nb_reason: str | None = None

    def to_json_dict(self) -> dict:
        out = {
            "n": self.n,
            "m": self.m,
            "d_max": self.d_max,
            "d_min": self.d_min,
            "connected": self.connected,
            "forest": self.forest,
            "converged": self.converged,
            "nb_rho": self.nb_rho,
            "adjacency_rho": self.adjacency_rho,
            "estimate_random": self.estimate_random,
            "bound_maxdeg": self.bound_maxdeg,
            "bound_nb": self.bound_nb,
            "bound_adjacency": self.bound_adjacency,
        }
        for key in ("estimate_random", "bound_maxdeg", "bound_nb"):
            reason = getattr(self, f"{key}_reason")
            if reason is not None:
                out[f"{key}_reason"] = reason
        return out


def bounds_report(g: Graph, tol: float = DEFAULT_TOL,
                  max_iter: int = DEFAULT_MAX_ITER) -> BoundsReport:
    """Assemble every estimate and bound for a nonempty graph."""
    if g.m == 0:
        raise ValueError("bounds need a nonempty graph (at least one edge)")
    deg = g.degrees()
    d_max = int(deg.max())
    d_min = int(deg.min())
    d1 = degree_moment(g, 1)
    d2 = degree_moment(g, 2)

    estimate_random = None
    estimate_random_reason = None
    if d2 > d1:
        estimate_random = d1 / (d2 - d1)
    else:
        estimate_random_reason = ("second degree moment equals the first "
                                  "(no vertex has degree above 1)")

    bound_maxdeg = None
    bound_maxdeg_reason = None
    if d_max >= 2:
        bound_maxdeg = 1.0 / (d_max - 1)
    else:
        bound_maxdeg_reason = "maximum degree is 1; the bound is undefined"

    nb = nb_spectral_radius(g, tol=tol, max_iter=max_iter)
    bound_nb = None
    bound_nb_reason = None
    if nb.nilpotent:
        bound_nb_reason = FOREST_REASON
    else:
        bound_nb = 1.0 / nb.rho

    adj_rho, _, adj_ok, _ = adjacency_power(g, tol=tol, max_iter=max_iter)
    count, _ = connected_components(g)
    return BoundsReport(
        n=g.n, m=g.m, d_max=d_max, d_min=d_min,
        connected=(count == 1), forest=nb.nilpotent,
        converged=(nb.converged and adj_ok),
        nb_rho=nb.rho, adjacency_rho=adj_rho,
        estimate_random=estimate_random,
        bound_maxdeg=bound_maxdeg,
        bound_nb=bound_nb,
        bound_adjacency=1.0 / adj_rho,
        estimate_random_reason=estimate_random_reason,
        bound_maxdeg_reason=bound_maxdeg_reason,
        bound_nb_reason=bound_nb_reason,
    )


# ---------------------------------------------------------------------------
# exact recursion on trees

@dataclass(frozen=True, eq=False)
class TreeSolveResult:
    """Reach probability of a rooted tree truncation at one occupation p.

    depth is the largest root-to-boundary distance (0 for an empty
    boundary). q_values, when requested, maps each tree edge (parent, child)
    to the probability that the parent sees only a finite cluster through
    that child.
    """

    p: float
    reach_probability: float
    depth: int
    q_values: dict[tuple[int, int], float] | None = None


def tree_reach_probability(g: Graph, root: int, p: float, boundary,
                           return_q: bool = False) -> TreeSolveResult:
    """Probability that an open root connects to the boundary set.

    The boundary models the cut to the rest of an infinite tree: an open
    boundary vertex counts as connected to infinity, so the finite-cluster
    probability on the edge into it is clamped to 0. Everywhere else a
    single leaf-to-root sweep multiplies the per-neighbor factors
    1 - p + p*q, with the empty product 1 at ordinary leaves.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if not (0 <= root < g.n):
        raise ValueError(f"root {root} is not a vertex of the graph")
    if backbone(g).graph.n != 0:
        raise ValueError("graph has a cycle; the recursion is exact only on forests")
    boundary = sorted(int(b) for b in boundary)
    deg = g.degrees()
    for b in boundary:
        if not (0 <= b < g.n):
            raise ValueError(f"boundary vertex {b} is not a vertex of the graph")
        if deg[b] != 1:
            raise ValueError(f"boundary vertex {b} is not a leaf")
        if b == root:
            raise ValueError("the root cannot be a boundary vertex")

    # BFS rooting; vertices outside the root's component never matter
    order = np.empty(g.n, np.int64)
    parent = np.full(g.n, -1, np.int64)
    dist = np.full(g.n, -1, np.int64)
    order[0] = root
    dist[root] = 0
    head, size = 0, 1
    while head < size:
        v = int(order[head])
        head += 1
        for w in g.neighbors(v).tolist():
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                parent[w] = v
                order[size] = w
                size += 1
    for b in boundary:
        if dist[b] < 0:
            raise ValueError(f"boundary vertex {b} is not in the root's component")

    mask = np.zeros(g.n, bool)
    mask[boundary] = True
    reach, acc = kernels.tree_reach(order[:size], parent, mask, float(p))
    depth = int(max((dist[b] for b in boundary), default=0))
    q = None
    if return_q:
        q = {}
        for v in order[1:size].tolist():
            q[(int(parent[v]), v)] = 0.0 if mask[v] else float(acc[v])
    return TreeSolveResult(p=float(p), reach_probability=float(reach),
                           depth=depth, q_values=q)


def _estimation_tree(spec: FamilySpec, depth: int):
    """Truncation used by the threshold estimator: root 0 plus the boundary
    vertex set standing in for the infinite continuation.

    For chain_tree the boundary generation is left undecorated so that the
    frontier vertices are leaves; the clamp on boundary edges makes any
    decoration behind them unreachable from the root anyway.
    """
    if spec.family == "regular_tree":
        g = regular_tree(spec.d, depth)
        _, starts = _backbone_starts(spec.d, depth)
        return g, 0, list(range(starts[depth], starts[depth + 1]))
    if spec.family == "chain_tree":
        g, starts = _chain_tree(spec.d, spec.r, spec.chain_len, depth,
                                decorate_upto=_backbone_starts(spec.d, depth)[1][depth])
        return g, 0, list(range(starts[depth], starts[depth + 1]))
    if spec.family == "path":
        g = path_graph(depth + 1)
        return g, 0, [depth]
    raise ValueError(f"{spec.family!r} is not a tree family; expected one of {TREE_FAMILIES}")


def _backbone_starts(d: int, depth: int):
    sizes = [1] + [d * (d - 1) ** (g - 1) for g in range(1, depth + 1)]
    starts = np.concatenate([[0], np.cumsum(sizes)]).tolist()
    return sizes, starts


@dataclass(frozen=True, eq=False)
class TreeEstimate:
    """Threshold estimate from a sequence of deepening truncations.

    threshold is the crossing at the deepest truncation; crossings holds the
    whole sequence so slow convergence is visible instead of hidden.
    """

    threshold: float
    depths: tuple[int, ...]
    crossings: tuple[float, ...]


def tree_threshold_estimate(spec: FamilySpec, depths=(6, 8, 10, 12, 14),
                            eta: float = 1e-3, tol: float = 1e-4) -> TreeEstimate:
    """Bisect, per truncation depth, for the occupation where the reach
    probability crosses eta; report the deepest crossing plus the sequence.

    The crossing converges to the threshold from below for small eta, at a
    rate of order log(1/eta)/depth, so the sequence is the convergence
    diagnostic.
    """
    if spec.family not in TREE_FAMILIES:
        raise ValueError(f"{spec.family!r} is not a tree family; expected one of {TREE_FAMILIES}")
    if not 0.0 < eta < 0.5:
        raise ValueError("eta must lie in (0, 0.5)")
    if tol <= 0:
        raise ValueError("tol must be positive")
    depths = tuple(int(k) for k in depths)
    if not depths or any(k < 1 for k in depths) or any(
            b <= a for a, b in zip(depths, depths[1:])):
        raise ValueError("depths must be increasing positive integers")

    crossings = []
    for k in depths:
        g, root, bvs = _estimation_tree(spec, k)
        order, parent, mask = _rooted_arrays(g, root, bvs)

        def reach(p):
            r, _ = kernels.tree_reach(order, parent, mask, float(p))
            return r

        lo, hi = 0.0, 1.0
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if reach(mid) < eta:
                lo = mid
            else:
                hi = mid
        crossings.append(0.5 * (lo + hi))
    return TreeEstimate(threshold=crossings[-1], depths=depths,
                        crossings=tuple(crossings))


def _rooted_arrays(g: Graph, root: int, boundary_vertices):
    order = np.empty(g.n, np.int64)
    parent = np.full(g.n, -1, np.int64)
    seen = np.zeros(g.n, bool)
    order[0] = root
    seen[root] = True
    head, size = 0, 1
    while head < size:
        v = int(order[head])
        head += 1
        for w in g.neighbors(v).tolist():
            if not seen[w]:
                seen[w] = True
                parent[w] = v
                order[size] = w
                size += 1
    mask = np.zeros(g.n, bool)
    mask[list(boundary_vertices)] = True
    return order[:size], parent, mask


def pattern_threshold(pattern: QuotientPattern) -> float:
    """Percolation threshold of the infinite tree a pattern describes:
    the inverse spectral radius of its class-pair transfer matrix."""
    spec = pattern_hashimoto(pattern)
    if spec.rho < 1.0 - 1e-9:
        raise InvalidPatternError(
            f"pattern transfer radius {spec.rho:.6g} is below 1; the pattern "
            "does not describe an infinite percolating tree"
        )
    return 1.0 / spec.rho
