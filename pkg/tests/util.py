"""Shared test helpers: random instances and naive reference oracles.

The oracles here deliberately reimplement the quantities with plain
itertools enumeration so the library's bitmask/DP paths are checked
against an independent computation.
"""

from __future__ import annotations

import itertools

import numpy as np

from concdim.mmspace import MMSpace, from_distance_matrix, from_points


def random_space(rng: np.random.Generator, n: int | None = None) -> MMSpace:
    """A small random metric space: points, or a metric random matrix.

    Matrix entries live in [0.5, 1.0], where the triangle inequality holds
    automatically; weights are uniform or random with every entry below
    one half.
    """
    if n is None:
        n = int(rng.integers(3, 13))
    if rng.random() < 0.5:
        weights = None
    else:
        w = rng.random(n) + 0.25
        w = w / w.sum()
        weights = w
    if rng.random() < 0.5:
        d = int(rng.integers(1, 4))
        return from_points(rng.random((n, d)), weights=weights)
    m = rng.uniform(0.5, 1.0, size=(n, n))
    m = (m + m.T) / 2.0
    np.fill_diagonal(m, 0.0)
    return from_distance_matrix(m, weights=weights)


def naive_alpha(space: MMSpace, eps: float) -> float:
    """Concentration function by direct enumeration of all subsets."""
    n = space.n
    w = space.weights
    d = space.dist
    best = 0.0
    for r in range(1, n + 1):
        for combo in itertools.combinations(range(n), r):
            ids = list(combo)
            if w[ids].sum() < 0.5 - 1e-12:
                continue
            d_to_a = d[:, ids].min(axis=1)
            best = max(best, float(w[d_to_a > eps].sum()))
    return min(best, 0.5)


def naive_sep(space: MMSpace, kappa: float) -> float:
    """Separation distance by enumerating all disjoint subset pairs."""
    n = space.n
    w = space.weights
    d = space.dist
    best = 0.0
    for assign in itertools.product((0, 1, 2), repeat=n):
        a = [i for i, s in enumerate(assign) if s == 1]
        b = [i for i, s in enumerate(assign) if s == 2]
        if not a or not b:
            continue
        if w[a].sum() < kappa - 1e-12 or w[b].sum() < kappa - 1e-12:
            continue
        best = max(best, float(d[np.ix_(a, b)].min()))
    return best
