#!/usr/bin/env python3
"""Brute-force check of how the empirical-cdf sup deviation scales with N.

Completely independent of the library: draws i.i.d. standard normals with
numpy's own ziggurat sampler, computes the classical two-sided unbinned
Kolmogorov-Smirnov statistic against the normal cdf at geometrically spaced
prefix sizes, and fits the log-log slope. Under i.i.d. sampling the statistic
scales as N**-0.5 (DKW), so:

  * the fitted exponent should concentrate near 0.5,
  * N * D_N should grow like sqrt(N)  (positive trend, no 1/N constant),
  * sqrt(N) * D_N should stay flat    (trend magnitude well below the above).

Run:  python tests/oracles/ks_rate_oracle.py [replicas]
"""

import sys
import math

import numpy as np
from scipy.special import ndtr


def checkpoints(n_total, base=10, ratio=2.0):
    out = []
    k = 0
    while True:
        n = round(base * ratio**k)
        if n >= n_total:
            break
        if not out or n > out[-1]:
            out.append(n)
        k += 1
    out.append(n_total)
    return out


def ks_statistic(sorted_x):
    n = sorted_x.size
    f = ndtr(sorted_x)
    hi = np.arange(1, n + 1) / n
    lo = np.arange(0, n) / n
    return max(np.max(np.abs(hi - f)), np.max(np.abs(lo - f)))


def ols_slope(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xc = x - x.mean()
    return float(np.dot(xc, y) / np.dot(xc, xc))


def one_replica(rng, n_total, burn_in=100):
    x = rng.standard_normal(n_total)
    ns, ds = [], []
    for n in checkpoints(n_total):
        d = ks_statistic(np.sort(x[:n]))
        if n >= burn_in and d > 0:
            ns.append(n)
            ds.append(d)
    ns = np.array(ns, dtype=float)
    ds = np.array(ds)
    alpha = -ols_slope(np.log(ns), np.log(ds))
    trend1 = ols_slope(np.log(ns), ns * ds)
    trend05 = ols_slope(np.log(ns), np.sqrt(ns) * ds)
    return alpha, trend1, trend05


def main():
    replicas = int(sys.argv[1]) if len(sys.argv) > 1 else 100
    n_total = 10**6
    rng = np.random.default_rng(20260809)
    alphas, t1s, t05s = [], [], []
    for _ in range(replicas):
        a, t1, t05 = one_replica(rng, n_total)
        alphas.append(a)
        t1s.append(t1)
        t05s.append(t05)
    alphas = np.array(alphas)
    t1s = np.array(t1s)
    t05s = np.array(t05s)
    print(f"replicas={replicas}  N={n_total}")
    print(f"median alpha          = {np.median(alphas):.4f}")
    print(f"alpha 5th..95th pct   = {np.percentile(alphas, 5):.4f} .. {np.percentile(alphas, 95):.4f}")
    print(f"frac alpha in [0.45, 0.55] = {np.mean((alphas >= 0.45) & (alphas <= 0.55)):.2f}")
    print(f"frac trend(alpha=1) > 0    = {np.mean(t1s > 0):.2f}")
    print(f"frac |trend(0.5)|<|trend(1)| = {np.mean(np.abs(t05s) < np.abs(t1s)):.2f}")


if __name__ == "__main__":
    main()
