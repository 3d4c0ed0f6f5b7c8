"""Numba-jitted implementations of the hot inner loops.

Mirrors numpy_backend exactly, including float accumulation order, so both
backends return bit-identical results.
"""

import numpy as np
from numba import njit

NAME = "numba"


@njit(cache=True, nogil=True)
def hashimoto_matvec(src, dst, x, n):
    incoming = np.zeros(n)
    for e in range(x.size):
        incoming[dst[e]] += x[e]
    y = np.empty_like(x)
    for e in range(x.size):
        y[e] = incoming[src[e]] - x[e ^ 1]
    return y


@njit(cache=True, nogil=True)
def adjacency_matvec(xadj, adjncy, row, x):
    n = xadj.size - 1
    y = np.zeros(n)
    for v in range(n):
        acc = 0.0
        for k in range(xadj[v], xadj[v + 1]):
            acc += x[adjncy[k]]
        y[v] = acc
    return y


@njit(cache=True, nogil=True)
def newman_ziff_trial(xadj, adjncy, order):
    n = order.size
    parent = np.full(n, -1, np.int64)
    size = np.zeros(n, np.int64)
    largest = np.empty(n, np.int64)
    sumsq = np.empty(n, np.int64)
    ss = 0
    big = 0
    for t in range(n):
        v = order[t]
        parent[v] = v
        size[v] = 1
        ss += 1
        if big < 1:
            big = 1
        for k in range(xadj[v], xadj[v + 1]):
            w = adjncy[k]
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


@njit(cache=True, nogil=True)
def tree_reach(order, parent, boundary, p):
    n = order.size
    acc = np.ones(n)
    for k in range(n - 1, 0, -1):
        v = order[k]
        q = 0.0 if boundary[v] else acc[v]
        acc[parent[v]] *= 1.0 - p + p * q
    root = order[0]
    return 1.0 - acc[root], acc
