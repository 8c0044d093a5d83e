"""Shared fixtures and independent reference implementations.

The oracles here deliberately avoid the library's vectorized kernels: they
re-derive violated counts and optima with plain Python loops so that library
bugs cannot cancel out in tests.
"""

import itertools

import numpy as np
import pytest

from ugsolve.core import DenseInstance, LinEqInstance, UgInstance


def violated_oracle(g, labels):
    """Loop-based violated-edge count."""
    base = g.base if isinstance(g, DenseInstance) else g
    labels = np.asarray(labels)
    count = 0
    eu, ev = g.edges()
    for u, v in zip(eu.tolist(), ev.tolist()):
        if base.kind == "cyclic":
            ok = (labels[u] - labels[v]) % g.q == base.offset(u, v)
        else:
            ok = base.perm(u, v)[labels[u]] == labels[v]
        if not ok:
            count += 1
    return count


def brute_oracle(g):
    """Exhaustive optimum over all q^n assignments (no symmetry shortcuts);
    returns (optimum, lexicographically smallest optimal assignment)."""
    n, q = g.n, g.q
    best_val, best = None, None
    for labels in itertools.product(range(q), repeat=n):
        val = violated_oracle(g, np.array(labels))
        if best_val is None or val < best_val:
            best_val, best = val, np.array(labels)
    return best_val, best


def rand_lineq(rng, n, q):
    return LinEqInstance(n, q, np.triu(rng.integers(0, q, (n, n)), 1))


def rand_ug(rng, n, q):
    tensor = np.tile(np.arange(q), (n, n, 1))
    for u in range(n):
        for v in range(u + 1, n):
            tensor[u, v] = rng.permutation(q)
    return UgInstance(n, q, tensor)


def rand_instance(rng, n, q, kind):
    return rand_lineq(rng, n, q) if kind == "cyclic" else rand_ug(rng, n, q)


def rand_mask(rng, n, removals):
    """Symmetric present-mask with `removals` random edges dropped, keeping
    every degree >= 1."""
    mask = ~np.eye(n, dtype=bool)
    eu, ev = np.triu_indices(n, k=1)
    for i in rng.permutation(len(eu))[:removals]:
        u, v = eu[i], ev[i]
        trial = mask.copy()
        trial[u, v] = trial[v, u] = False
        if trial.sum(axis=1).min() >= 1:
            mask = trial
    return mask


def rand_dense(rng, n, q, kind, removals):
    return DenseInstance(rand_instance(rng, n, q, kind), rand_mask(rng, n, removals))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
