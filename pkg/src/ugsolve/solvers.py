"""Solvers: pivot propagation, plurality voting, their randomized and
dense-graph variants, and exhaustive search.

All solvers are deterministic functions of (instance,) or (instance, rng);
tie-breaks are fixed everywhere: candidate labels resolve toward the smallest
label, and pivot loops keep the first (smallest (pivot, label)) strict minimum.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (
    DenseInstance,
    LinEqInstance,
    SolveReport,
    UgInstance,
    _as_labels,
    _violated_fast,
    as_generator,
)
from .errors import ResourceLimitError

__all__ = [
    "BRUTE_FORCE_LIMIT",
    "pivot_assign",
    "pivot_best",
    "pivot_random",
    "voting_single",
    "voting_solve",
    "randomized_voting",
    "dense_voting",
    "brute_force",
    "FlipDiagnostics",
    "flip_diagnostics",
]

BRUTE_FORCE_LIMIT = 100_000_000

UNLABELED = -1  # sentinel in pivot_assign output on dense instances


def _require_complete(g, op):
    if isinstance(g, DenseInstance):
        raise ValueError(f"{op} works on complete instances; got a dense instance")


def pivot_assign(g, pivot, pivot_label=0):
    """Propagate the pivot's label along the pivot's own constraints.

    Every vertex adjacent to the pivot receives the unique label satisfying
    its constraint with the pivot; on dense instances, vertices not adjacent
    to the pivot receive the UNLABELED sentinel (understood by dense_voting).
    On complete instances the result is a full assignment.
    """
    n, q = g.n, g.q
    if not 0 <= pivot < n:
        raise ValueError(f"pivot must be in [0, {n})")
    if not 0 <= pivot_label < q:
        raise ValueError(f"pivot label must be in [0, {q})")
    base = g.base if isinstance(g, DenseInstance) else g
    if base.kind == "cyclic":
        labels = (base.offset_matrix()[:, pivot] + pivot_label) % q
    else:
        labels = base.perm_tensor()[pivot, :, pivot_label].copy()
    if isinstance(g, DenseInstance):
        unreached = ~g.present_matrix()[pivot]
        unreached[pivot] = False
        labels = labels.copy()
        labels[unreached] = UNLABELED
    return labels


def pivot_best(g):
    """Run pivot propagation from every pivot (every pivot label for the
    permutation kind) and keep the assignment violating fewest constraints."""
    _require_complete(g, "pivot_best")
    t0 = time.perf_counter()
    n, q = g.n, g.q
    eu, ev = g.edges()
    best = None
    if g.kind == "cyclic":
        C = g.offset_matrix()
        for p in range(n):
            a = C[:, p] % q
            bad = int(np.count_nonzero((a[eu] - a[ev]) % q != C[eu, ev]))
            if best is None or bad < best[0]:
                best = (bad, p, 0, a)
    else:
        P = g.perm_tensor()
        pe = P[eu, ev]
        for p in range(n):
            A = P[p]  # column l is the propagated assignment for pivot label l
            sat = np.take_along_axis(pe, A[eu], axis=1) == A[ev]
            viol = len(eu) - sat.sum(axis=0)
            l = int(np.argmin(viol))
            if best is None or viol[l] < best[0]:
                best = (int(viol[l]), p, l, A[:, l].copy())
    bad, p, l, a = best
    return SolveReport(
        assignment=a,
        violated=bad,
        algorithm="pivot",
        pivot=p,
        pivot_label=l,
        elapsed=time.perf_counter() - t0,
    )


def pivot_random(g, rng=None):
    """Pivot propagation from one uniformly random pivot (the permutation kind
    still tries all labels for that pivot and keeps the best)."""
    _require_complete(g, "pivot_random")
    t0 = time.perf_counter()
    seed = rng if isinstance(rng, (int, np.integer)) else None
    gen = as_generator(rng)
    p = int(gen.integers(g.n))
    if g.kind == "cyclic":
        labels = (0,)
    else:
        labels = range(g.q)
    best = None
    for l in labels:
        a = pivot_assign(g, p, l)
        bad = _violated_fast(g, a)
        if best is None or bad < best[0]:
            best = (bad, l, a)
    bad, l, a = best
    return SolveReport(
        assignment=a,
        violated=bad,
        algorithm="pivot-random",
        pivot=p,
        pivot_label=l,
        seed=seed,
        elapsed=time.perf_counter() - t0,
    )


def _voting_final(g, pivot, pivot_label):
    """One voting round: propagate TEMP from the pivot, then every non-pivot
    vertex takes the plurality label among the votes of the other n-2
    non-pivot vertices (vote of u for v = label making (u, v) satisfied given
    TEMP(u)); the pivot keeps its label.

    Cyclic ties are resolved the way pivot propagation would read them off the
    squared instance, whose canonical u < v storage negates the two-step
    offset seen from the higher endpoint: vertices before the pivot take the
    smallest tied offset, vertices after it the tied offset with the smallest
    negation (0 when tied, otherwise the largest).  This makes
    voting_single(g, p, l) identical to
    pivot_assign(to_square_instance(g), p, l) on every complete cyclic
    instance, ties included.  Bijection ties go to the smallest label."""
    n, q = g.n, g.q
    rows = np.arange(n)
    if g.kind == "cyclic":
        M = g.offset_matrix()
        temp = M[:, pivot]  # pivot at label 0; the label shift happens last
        counts = np.empty((n, q), dtype=np.int64)
        block = max(1, (1 << 18) // n)  # keep each votes slab cache-sized
        for start in range(0, n, block):
            votes = M[start : start + block] + temp[None, :]
            votes %= q
            b = votes.shape[0]
            votes += (q * np.arange(b))[:, None]
            counts[start : start + b] = np.bincount(
                votes.ravel(), minlength=b * q
            ).reshape(b, q)
        # neither the vertex itself nor the pivot votes; both degenerate
        # votes land on the propagated label
        counts[rows, temp] -= 2
        final = np.argmax(counts, axis=1)  # first max = smallest offset
        largest = q - 1 - np.argmax(counts[:, ::-1], axis=1)
        neg_pref = np.where(counts[:, 0] == counts.max(axis=1), 0, largest)
        final = (np.where(rows < pivot, final, neg_pref) + pivot_label) % q
        final[pivot] = pivot_label
        return final
    temp = g.perm_tensor()[pivot, :, pivot_label]
    s = np.take_along_axis(g.perm_tensor(), temp[:, None, None], axis=2)[:, :, 0]
    votes = s.T  # votes[v, u] = vote of u for v
    counts = np.bincount(
        (q * rows[:, None] + votes).ravel(), minlength=n * q
    ).reshape(n, q)
    counts[rows, votes[rows, rows]] -= 1  # a vertex does not vote for itself
    counts[rows, votes[:, pivot]] -= 1  # the pivot does not vote
    final = np.argmax(counts, axis=1)  # first max = smallest label
    final[pivot] = pivot_label
    return final


def voting_single(g, pivot, pivot_label=0):
    """Voting assignment for one fixed pivot (complete instance, n >= 3)."""
    _require_complete(g, "voting_single")
    if g.n < 3:
        raise ValueError("voting needs n >= 3 (no third vertex to vote)")
    if not 0 <= pivot < g.n:
        raise ValueError(f"pivot must be in [0, {g.n})")
    if not 0 <= pivot_label < g.q:
        raise ValueError(f"pivot label must be in [0, {g.q})")
    return _voting_final(g, pivot, pivot_label)


def voting_solve(g):
    """Voting from every pivot (every pivot label for the permutation kind),
    keeping the assignment violating fewest constraints.

    For n = 2 voting is undefined (no voters); the single-edge instance is
    solved exactly by pivot propagation instead.
    """
    _require_complete(g, "voting_solve")
    t0 = time.perf_counter()
    if g.n == 2:
        rep = pivot_best(g)
        return SolveReport(
            assignment=rep.assignment,
            violated=rep.violated,
            algorithm="voting",
            pivot=rep.pivot,
            pivot_label=rep.pivot_label,
            elapsed=time.perf_counter() - t0,
            extra={"fallback": "pivot"},
        )
    labels = (0,) if g.kind == "cyclic" else range(g.q)
    best = None
    for p in range(g.n):
        for l in labels:
            a = _voting_final(g, p, l)
            bad = _violated_fast(g, a)
            if best is None or bad < best[0]:
                best = (bad, p, l, a)
    bad, p, l, a = best
    return SolveReport(
        assignment=a,
        violated=bad,
        algorithm="voting",
        pivot=p,
        pivot_label=l,
        elapsed=time.perf_counter() - t0,
    )


def randomized_voting(g, rng=None):
    """Voting from one uniformly random pivot (the permutation kind still
    tries all pivot labels for that pivot).  n = 2 falls back to pivot
    propagation, which is exact there."""
    _require_complete(g, "randomized_voting")
    t0 = time.perf_counter()
    seed = rng if isinstance(rng, (int, np.integer)) else None
    gen = as_generator(rng)
    p = int(gen.integers(g.n))
    if g.n == 2:
        rep = pivot_best(g)
        return SolveReport(
            assignment=rep.assignment,
            violated=rep.violated,
            algorithm="rvoting",
            pivot=rep.pivot,
            pivot_label=rep.pivot_label,
            seed=seed,
            elapsed=time.perf_counter() - t0,
            extra={"fallback": "pivot"},
        )
    labels = (0,) if g.kind == "cyclic" else range(g.q)
    best = None
    for l in labels:
        a = _voting_final(g, p, l)
        bad = _violated_fast(g, a)
        if best is None or bad < best[0]:
            best = (bad, l, a)
    bad, l, a = best
    return SolveReport(
        assignment=a,
        violated=bad,
        algorithm="rvoting",
        pivot=p,
        pivot_label=l,
        seed=seed,
        elapsed=time.perf_counter() - t0,
    )


def _dense_voting_final(g, pivot, pivot_label):
    """One dense voting round.  TEMP reaches the pivot and its neighbors; every
    TEMP-labeled vertex (including the pivot) votes for each of its present
    neighbors; a vertex with votes takes the plurality (ties to the smallest
    label), a vertex without votes keeps its TEMP label if any, else label 0."""
    n, q = g.n, g.q
    base = g.base
    present = g.present_matrix()
    temp = pivot_assign(g, pivot, pivot_label)
    has = temp != UNLABELED
    safe = np.where(has, temp, 0)
    if g.kind == "cyclic":
        votes = (base.offset_matrix() + safe[None, :]) % q
    else:
        s = np.take_along_axis(base.perm_tensor(), safe[:, None, None], axis=2)[:, :, 0]
        votes = s.T
    mask = present & has[None, :]
    rows, cols = np.nonzero(mask)
    counts = np.bincount(q * rows + votes[rows, cols], minlength=n * q).reshape(n, q)
    voted = mask.any(axis=1)
    final = np.argmax(counts, axis=1)
    fallback = np.where(has, temp, 0)
    final = np.where(voted, final, fallback)
    return final


def dense_voting(g):
    """Voting for everywhere-dense instances: best over all pivots (and all
    pivot labels for the permutation kind)."""
    if not isinstance(g, DenseInstance):
        g = DenseInstance.wrap_complete(g)
    if g.n < 3:
        raise ValueError("dense voting needs n >= 3")
    t0 = time.perf_counter()
    labels = (0,) if g.kind == "cyclic" else range(g.q)
    best = None
    for p in range(g.n):
        for l in labels:
            a = _dense_voting_final(g, p, l)
            bad = _violated_fast(g, a)
            if best is None or bad < best[0]:
                best = (bad, p, l, a)
    bad, p, l, a = best
    return SolveReport(
        assignment=a,
        violated=bad,
        algorithm="dense-voting",
        pivot=p,
        pivot_label=l,
        elapsed=time.perf_counter() - t0,
    )


def _label_dtype(q):
    if q <= 127:
        return np.int8
    if q <= 32767:
        return np.int16
    return np.int64


def brute_force(g, limit=BRUTE_FORCE_LIMIT):
    """Exhaustive search for an assignment with the minimum number of violated
    constraints; returns the lexicographically smallest optimal assignment.

    Cyclic instances are enumerated with the first vertex fixed to label 0
    (global label shifts preserve every cyclic constraint), so the search
    space is q^(n-1); the permutation kind enumerates all q^n assignments.
    Raises ResourceLimitError if the search space exceeds ``limit``.
    """
    n, q = g.n, g.q
    cyclic = (g.base if isinstance(g, DenseInstance) else g).kind == "cyclic"
    free = n - 1 if cyclic else n
    space = q**free
    if space > limit:
        raise ResourceLimitError(
            f"search space q^{free} = {space} exceeds limit {limit}"
        )
    t0 = time.perf_counter()
    eu, ev = g.edges()
    base = g.base if isinstance(g, DenseInstance) else g
    if cyclic:
        off = base.offset_matrix()[eu, ev]
    else:
        pe = base.perm_tensor()[eu, ev]
    dt = _label_dtype(q)
    block = 1 << 20 if n <= 20 else 1 << 18
    best_bad, best_idx = None, None
    for start in range(0, space, block):
        idx = np.arange(start, min(start + block, space), dtype=np.int64)
        b = len(idx)
        labels = np.zeros((b, n), dtype=dt)
        rest = idx
        for j in range(n - 1, n - 1 - free, -1):
            labels[:, j] = rest % q
            rest = rest // q
        bad = np.zeros(b, dtype=np.int64)
        if cyclic:
            for e in range(len(eu)):
                bad += (labels[:, eu[e]].astype(np.int64) - labels[:, ev[e]]) % q != off[e]
        else:
            for e in range(len(eu)):
                bad += pe[e][labels[:, eu[e]]] != labels[:, ev[e]]
        i = int(np.argmin(bad))
        if best_bad is None or bad[i] < best_bad:
            best_bad = int(bad[i])
            best_idx = start + i
        if best_bad == 0:
            break
    a = np.zeros(n, dtype=np.int64)
    rest = best_idx
    for j in range(n - 1, n - 1 - free, -1):
        a[j] = rest % q
        rest = rest // q
    return SolveReport(
        assignment=a,
        violated=best_bad,
        algorithm="brute",
        elapsed=time.perf_counter() - t0,
        extra={"search_space": space},
    )


@dataclass
class FlipDiagnostics:
    """White-box view of one voting round against a reference optimum.

    The analyzed pivot is the vertex with fewest optimum-violated ("red")
    incident edges, run with the optimum's own label for that pivot.  A vertex
    is "flippable" when its red degree reaches (n-1)/2 - eps*(n-1) (eps =
    optimum violations / m): only such vertices can end up with a label
    different from the optimum, and there are at most eps*nu*n of them
    (nu = 2/(1-2*eps)) whenever eps < 1/2.
    """

    pivot: int
    pivot_label: int
    pivot_red_degree: int
    opt_violated: int
    m: int
    eps: Fraction
    final: np.ndarray
    red_degrees: np.ndarray
    flippable: np.ndarray
    flipped: np.ndarray
    in_regime: bool

    @property
    def flippable_count(self):
        return int(self.flippable.sum())

    @property
    def flipped_count(self):
        return int(self.flipped.sum())

    @property
    def only_flippable_flipped(self):
        """No vertex below the flippable threshold changed label."""
        return bool(np.all(self.flippable | ~self.flipped))

    @property
    def flippable_count_bounded(self):
        """flippable_count <= eps*nu*n with nu = 2/(1-2*eps), i.e.
        f*(m - 2*OPT) <= 2*OPT*n, checked in exact integer arithmetic."""
        if not self.in_regime:
            return True
        n = len(self.final)
        return self.flippable_count * (self.m - 2 * self.opt_violated) <= 2 * self.opt_violated * n


def flip_diagnostics(g, optimum):
    """Diagnose one voting round of a complete instance against a reference
    optimum assignment (planted or brute-forced)."""
    _require_complete(g, "flip_diagnostics")
    if g.n < 3:
        raise ValueError("diagnostics need n >= 3")
    opt = _as_labels(g, optimum)
    n, q, m = g.n, g.q, g.m
    if g.kind == "cyclic":
        bad = (opt[:, None] - opt[None, :]) % q != g.offset_matrix()
    else:
        s = np.take_along_axis(g.perm_tensor(), opt[:, None, None], axis=2)[:, :, 0]
        bad = s.T != opt[:, None]
    np.fill_diagonal(bad, False)
    red = bad.sum(axis=1)
    pivot = int(np.argmin(red))
    label = int(opt[pivot])
    final = _voting_final(g, pivot, label)
    opt_v = int(red.sum()) // 2
    eps = Fraction(opt_v, m)
    threshold = Fraction(n - 1, 2) - eps * (n - 1)
    flippable = np.array([Fraction(int(r)) >= threshold for r in red])
    flipped = final != opt
    in_regime = eps < Fraction(1, 2)
    return FlipDiagnostics(
        pivot=pivot,
        pivot_label=label,
        pivot_red_degree=int(red[pivot]),
        opt_violated=opt_v,
        m=m,
        eps=eps,
        final=final,
        red_degrees=red,
        flippable=flippable,
        flipped=flipped,
        in_regime=in_regime,
    )
