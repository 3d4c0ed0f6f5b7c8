"""Single-pass Monte Carlo site percolation on finite graphs.

Each trial activates the vertices in one random order and tracks clusters
with union-find, so one pass yields statistics at every occupied count.
Canonical fixed-p curves follow by binomial smoothing over the counts.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels as kernels
from .graphs import Graph

THREADS_ENV = "NBPERC_SIM_THREADS"


@dataclass(frozen=True, eq=False)
class SimulationResult:
    """Aggregated sweep statistics.

    Indexed curves run over occupied counts 0..n (as occupied_fraction);
    canonical_* curves live on the uniform p_grid. Susceptibility is the sum
    of squared cluster sizes excluding the largest cluster, divided by n.
    Identical (graph, trials, master_seed) inputs reproduce this bit for bit.
    """

    n: int
    m: int
    trials: int
    master_seed: int
    occupied_fraction: np.ndarray
    mean_largest_fraction: np.ndarray
    stderr_largest_fraction: np.ndarray
    mean_susceptibility: np.ndarray
    stderr_susceptibility: np.ndarray
    p_grid: np.ndarray
    canonical_largest_fraction: np.ndarray
    canonical_stderr_largest: np.ndarray
    canonical_susceptibility: np.ndarray
    canonical_stderr_susceptibility: np.ndarray


def _trial_order(master_seed: int, trial: int, n: int) -> np.ndarray:
    # documented per-trial seeding: SeedSequence([master_seed, trial])
    rng = np.random.default_rng(np.random.SeedSequence([master_seed, trial]))
    return rng.permutation(n)


def binomial_weights(n: int, ps: np.ndarray) -> np.ndarray:
    """Rows of Binomial(n, p) pmfs over t = 0..n, computed in log space."""
    t = np.arange(n + 1)
    logfact = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, n + 1)))))
    logc = logfact[n] - logfact[t] - logfact[n - t]
    W = np.empty((ps.size, n + 1))
    for i, p in enumerate(ps):
        if p <= 0.0:
            w = np.zeros(n + 1)
            w[0] = 1.0
        elif p >= 1.0:
            w = np.zeros(n + 1)
            w[n] = 1.0
        else:
            lw = logc + t * np.log(p) + (n - t) * np.log1p(-p)
            lw -= lw.max()
            w = np.exp(lw)
            w /= w.sum()
        W[i] = w
    return W


def site_percolation_sweep(g: Graph, trials: int, master_seed: int,
                           grid: int = 201, threads: int | None = None) -> SimulationResult:
    """Run `trials` independent activation sweeps and aggregate.

    Trials are independent and may fan out over threads (NBPERC_SIM_THREADS
    or the threads argument); aggregation always reduces in trial-index
    order, so the thread count never changes the result.
    """
    if g.n < 1:
        raise ValueError("simulation needs a nonempty graph")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if master_seed < 0:
        raise ValueError("master_seed must be nonnegative")
    if grid < 3:
        raise ValueError("p grid needs at least 3 points")
    if threads is None:
        threads = int(os.environ.get(THREADS_ENV, "1"))
    n = g.n
    micro_largest = np.zeros((trials, n + 1))
    micro_chi = np.zeros((trials, n + 1))

    def run(t: int) -> None:
        order = _trial_order(master_seed, t, n)
        largest, sumsq = kernels.newman_ziff_trial(g.xadj, g.adjncy, order)
        micro_largest[t, 1:] = largest / n
        micro_chi[t, 1:] = (sumsq - largest.astype(np.float64) ** 2) / n

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run, range(trials)))
    else:
        for t in range(trials):
            run(t)

    ps = np.linspace(0.0, 1.0, grid)
    W = binomial_weights(n, ps)
    can_largest = micro_largest @ W.T
    can_chi = micro_chi @ W.T

    def mean_stderr(a):
        mean = a.mean(axis=0)
        if trials > 1:
            err = a.std(axis=0, ddof=1) / np.sqrt(trials)
        else:
            err = np.zeros_like(mean)
        return mean, err

    ml, sl = mean_stderr(micro_largest)
    mc, sc = mean_stderr(micro_chi)
    cl, csl = mean_stderr(can_largest)
    cc, csc = mean_stderr(can_chi)
    return SimulationResult(
        n=n, m=g.m, trials=trials, master_seed=master_seed,
        occupied_fraction=np.arange(n + 1) / n,
        mean_largest_fraction=ml, stderr_largest_fraction=sl,
        mean_susceptibility=mc, stderr_susceptibility=sc,
        p_grid=ps,
        canonical_largest_fraction=cl, canonical_stderr_largest=csl,
        canonical_susceptibility=cc, canonical_stderr_susceptibility=csc,
    )


@dataclass(frozen=True)
class ThresholdEstimate:
    """Finite-size threshold estimate; both criteria are heuristics."""

    p_hat: float
    uncertainty: float
    criterion: str


def estimate_threshold(result: SimulationResult,
                       criterion: str = "susceptibility-peak",
                       level: float = 0.1) -> ThresholdEstimate:
    """Locate the transition on the canonical curves.

    susceptibility-peak: argmax of the smoothed susceptibility, uncertainty
    the half-width of the region above 95% of the peak. fraction-crossing:
    p where the mean largest fraction first crosses `level`, uncertainty one
    grid step.
    """
    if result.trials < 10:
        raise ValueError("estimate needs a sweep with at least 10 trials")
    ps = result.p_grid
    step = float(ps[1] - ps[0])
    if criterion == "susceptibility-peak":
        chi = result.canonical_susceptibility
        i = int(np.argmax(chi))
        if i == 0 or i == ps.size - 1 or chi[i] <= 0.0:
            raise ValueError(
                "no interior susceptibility peak; the graph is too small "
                "for this criterion, use a larger graph"
            )
        lo = i
        while lo > 0 and chi[lo - 1] >= 0.95 * chi[i]:
            lo -= 1
        hi = i
        while hi < ps.size - 1 and chi[hi + 1] >= 0.95 * chi[i]:
            hi += 1
        half = 0.5 * (ps[hi] - ps[lo])
        return ThresholdEstimate(p_hat=float(ps[i]),
                                 uncertainty=float(max(half, 0.5 * step)),
                                 criterion=criterion)
    if criterion == "fraction-crossing":
        big = result.canonical_largest_fraction
        above = np.flatnonzero(big >= level)
        if above.size == 0 or above[0] == 0:
            raise ValueError(
                f"largest-cluster curve never crosses {level} in (0, 1]; "
                "adjust the level or use a larger graph"
            )
        i = int(above[0])
        frac = (level - big[i - 1]) / (big[i] - big[i - 1])
        return ThresholdEstimate(p_hat=float(ps[i - 1] + frac * step),
                                 uncertainty=step, criterion=criterion)
    raise ValueError(f"unknown criterion {criterion!r}")


def to_csv(result: SimulationResult, curves: str = "canonical") -> str:
    """Render curves as CSV. canonical uses the p grid, micro the occupied
    fractions."""
    rows = []
    if curves == "canonical":
        rows.append("p,mean_largest_fraction,stderr_largest_fraction,"
                    "mean_susceptibility,stderr_susceptibility")
        cols = (result.p_grid, result.canonical_largest_fraction,
                result.canonical_stderr_largest, result.canonical_susceptibility,
                result.canonical_stderr_susceptibility)
    elif curves == "micro":
        rows.append("occupied_fraction,mean_largest_fraction,stderr_largest_fraction,"
                    "mean_susceptibility,stderr_susceptibility")
        cols = (result.occupied_fraction, result.mean_largest_fraction,
                result.stderr_largest_fraction, result.mean_susceptibility,
                result.stderr_susceptibility)
    else:
        raise ValueError(f"unknown curve set {curves!r}")
    for vals in zip(*cols):
        rows.append(",".join(repr(float(v)) for v in vals))
    return "\n".join(rows) + "\n"
