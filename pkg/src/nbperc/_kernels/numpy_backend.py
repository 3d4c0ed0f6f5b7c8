"""Pure numpy/Python implementations of the hot inner loops.

This is the fallback backend. Each function must produce bit-for-bit the
same output as its numba twin, so accumulation order is fixed: sums into a
vertex slot always happen in increasing edge-id order.
"""

import numpy as np

NAME = "numpy"


def hashimoto_matvec(src, dst, x, n):
    """One non-backtracking step: y[e] = sum of x over arcs ending at src[e],
    minus the reversed arc x[e ^ 1]."""
    incoming = np.bincount(dst, weights=x, minlength=n)
    y = incoming[src]
    y -= x.reshape(-1, 2)[:, ::-1].ravel()
    return y


def adjacency_matvec(xadj, adjncy, row, x):
    """y = A x for the CSR adjacency (row holds the owning vertex of each
    adjacency entry)."""
    n = xadj.size - 1
    return np.bincount(row, weights=x[adjncy], minlength=n)


def newman_ziff_trial(xadj, adjncy, order):
    """Single activation sweep: add vertices in `order`, merge clusters with
    union-by-size + path halving.

    Returns (largest, sumsq), both int64 of length n, indexed by occupied
    count minus one: largest cluster size and the sum of squared cluster
    sizes over all current clusters.
    """
    n = order.size
    xa = xadj.tolist()
    ad = adjncy.tolist()
    parent = [-1] * n
    size = [0] * n
    largest = np.empty(n, np.int64)
    sumsq = np.empty(n, np.int64)
    ss = 0
    big = 0
    for t, v in enumerate(order.tolist()):
        parent[v] = v
        size[v] = 1
        ss += 1
        if big < 1:
            big = 1
        for k in range(xa[v], xa[v + 1]):
            w = ad[k]
            if parent[w] < 0:
                continue
            a = v
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            b = w
            while parent[b] != b:
                parent[b] = parent[parent[b]]
                b = parent[b]
            if a == b:
                continue
            if size[a] < size[b]:
                a, b = b, a
            ss += 2 * size[a] * size[b]
            parent[b] = a
            size[a] += size[b]
            if size[a] > big:
                big = size[a]
        largest[t] = big
        sumsq[t] = ss
    return largest, sumsq


def tree_reach(order, parent, boundary, p):
    """Leaf-to-root product sweep over a rooted tree.

    order is a BFS order with the root first; parent[v] is v's BFS parent.
    acc[v] ends up as the probability that v leads only to a finite cluster
    (given v open), before any boundary override; boundary vertices count as
    connected to infinity. Returns (reach, acc).
    """
    n = order.size
    acc = [1.0] * n
    ordl = order.tolist()
    parl = parent.tolist()
    bnd = boundary.tolist()
    for k in range(n - 1, 0, -1):
        v = ordl[k]
        q = 0.0 if bnd[v] else acc[v]
        acc[parl[v]] *= 1.0 - p + p * q
    root = ordl[0]
    return 1.0 - acc[root], np.asarray(acc)
