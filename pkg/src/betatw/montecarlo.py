"""Batch sampling, empirical tails with exact intervals, tail fits and KS distances."""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.stats import beta as beta_dist

from betatw.ensembles import (
    EnsembleSpec,
    SampleBatch,
    batch_metadata,
    largest_scaled,
    sample_goe_dense,
    substream,
)
from betatw.trilinalg import all_eigenvalues, householder_tridiagonalize


def resolve_threads(threads):
    return (os.cpu_count() or 1) if not threads else int(threads)


def map_substreams(fn, n, seed, threads=0):
    """``[fn(substream(seed, i)) for i in range(n)]``, computed in parallel.

    Sample i always sees the generator of substream i, so the result does not
    depend on ``threads``.
    """
    if n < 1:
        raise ValueError("need at least one sample")
    workers = min(resolve_threads(threads), n)

    def work(bounds):
        lo, hi = bounds
        return [fn(substream(seed, i)) for i in range(lo, hi)]

    if workers == 1:
        return np.array(work((0, n)), dtype=float)
    edges = np.linspace(0, n, 4 * workers + 1).astype(int)
    chunks = [(lo, hi) for lo, hi in zip(edges[:-1], edges[1:]) if hi > lo]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(work, chunks))
    return np.array([v for part in parts for v in part], dtype=float)


def run_batch(spec, n, seed, threads=0):
    values = map_substreams(lambda rng: largest_scaled(spec, rng), n, seed, threads)
    return SampleBatch(spec, int(seed), np.sort(values), batch_metadata())


def goe2_spacings(n, seed, threads=0):
    """Nearest-neighbour spacings of 2x2 dense GOE matrices."""

    def one(rng):
        ev = all_eigenvalues(householder_tridiagonalize(sample_goe_dense(2, rng)))
        return ev[1] - ev[0]

    return map_substreams(one, n, seed, threads)


def clopper_pearson(k, n, level=0.95):
    alpha = 1.0 - level
    lo = 0.0 if k == 0 else float(beta_dist.ppf(alpha / 2, k, n - k + 1))
    hi = 1.0 if k == n else float(beta_dist.ppf(1 - alpha / 2, k + 1, n - k))
    return lo, hi


def empirical_tail(batch, x):
    """Fraction of samples above ``x`` with its exact 95% interval."""
    samples = batch.samples if isinstance(batch, SampleBatch) else np.sort(batch)
    n = samples.size
    k = int(n - np.searchsorted(samples, x, side="right"))
    return k / n, clopper_pearson(k, n)


@dataclass(frozen=True)
class TailFit:
    exponent: float
    log_coefficient: float
    r_squared: float
    window: tuple
    count: int

    @property
    def coefficient(self):
        return math.exp(self.log_coefficient)

    def to_dict(self):
        return {
            "exponent": self.exponent,
            "coefficient": self.coefficient,
            "log_coefficient": self.log_coefficient,
            "r_squared": self.r_squared,
            "window": list(self.window),
            "count": self.count,
        }


def fit_tail_log(xs, log_survival):
    """Fit survival = exp(-k x^c) given log-survival values."""
    xs = np.asarray(xs, dtype=float)
    ls = np.asarray(log_survival, dtype=float)
    if xs.size < 3 or xs.size != ls.size:
        raise ValueError("need at least 3 matching points")
    if np.any(xs <= 1):
        raise ValueError("tail fit needs x > 1")
    if np.any(~np.isfinite(ls)) or np.any(ls >= 0):
        raise ValueError("survival values must lie strictly in (0, 1)")
    order = np.argsort(xs)
    xs, ls = xs[order], ls[order]
    if np.any(np.diff(xs) <= 0) or np.any(np.diff(ls) >= 0):
        raise ValueError("survival must be strictly decreasing in x")
    u, v = np.log(xs), np.log(-ls)
    um, vm = u.mean(), v.mean()
    slope = np.sum((u - um) * (v - vm)) / np.sum((u - um) ** 2)
    intercept = vm - slope * um
    resid = v - (intercept + slope * u)
    ss_tot = np.sum((v - vm) ** 2)
    r2 = 1.0 if ss_tot == 0 else 1.0 - np.sum(resid**2) / ss_tot
    return TailFit(float(slope), float(intercept), float(min(1.0, max(0.0, r2))), (float(xs[0]), float(xs[-1])), int(xs.size))


def fit_tail_exponent(points):
    """Least-squares fit of survival = exp(-k x^c) to (x, survival) pairs."""
    xs, ps = zip(*points)
    ps = np.asarray(ps, dtype=float)
    if np.any(ps <= 0) or np.any(ps >= 1):
        raise ValueError("survival values must lie strictly in (0, 1)")
    return fit_tail_log(xs, np.log(ps))


def ks_statistic(batch, cdf):
    samples = batch.samples if isinstance(batch, SampleBatch) else np.sort(np.asarray(batch, dtype=float))
    n = samples.size
    F = np.asarray(cdf(samples), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))


def ks_two_sample(a, b):
    a, b = np.sort(a), np.sort(b)
    pts = np.concatenate([a, b])
    fa = np.searchsorted(a, pts, side="right") / a.size
    fb = np.searchsorted(b, pts, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def ks_two_sample_critical(n, m, alpha=0.01):
    """Asymptotic two-sample KS critical value."""
    c = math.sqrt(-0.5 * math.log(alpha / 2))
    return c * math.sqrt((n + m) / (n * m))


def batch_moments(batch):
    """Mean, variance and their standard errors."""
    x = batch.samples if isinstance(batch, SampleBatch) else np.asarray(batch, dtype=float)
    n = x.size
    mean = x.mean()
    var = x.var(ddof=1)
    dev2 = (x - mean) ** 2
    return {
        "mean": float(mean),
        "mean_se": float(math.sqrt(var / n)),
        "var": float(var),
        "var_se": float(dev2.std(ddof=1) / math.sqrt(n)),
    }


__all__ = [
    "EnsembleSpec",
    "TailFit",
    "batch_moments",
    "clopper_pearson",
    "empirical_tail",
    "fit_tail_exponent",
    "fit_tail_log",
    "goe2_spacings",
    "ks_statistic",
    "ks_two_sample",
    "ks_two_sample_critical",
    "map_substreams",
    "run_batch",
]
