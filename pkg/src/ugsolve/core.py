"""Instance types and basic operations.

Two constraint kinds over the label set [q] = {0, ..., q-1}:

* cyclic     -- each edge (u, v) with u < v carries an offset c, and an
                assignment x satisfies the edge iff x[u] - x[v] == c (mod q).
                The reverse orientation is the negation: offset(v, u) == -c mod q.
* perm       -- each edge carries a bijection pi on [q]; x satisfies the edge
                iff pi(x[u]) == x[v] for the stored orientation u -> v, and the
                reverse orientation is the inverse bijection.

Instances are immutable after construction (backing arrays are read-only), so
they can be shared freely across threads.  Only the u < v data is independent
state: the reverse orientation is derived at construction, which makes it
impossible to build an instance whose two orientations disagree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import MissingEdgeError

__all__ = [
    "LinEqInstance",
    "UgInstance",
    "DenseInstance",
    "SolveReport",
    "as_generator",
    "perm_compose",
    "perm_invert",
    "violated_count",
    "satisfied_count",
    "triangle_consistent",
    "to_square_instance",
]


def as_generator(rng=None):
    """Coerce an int seed / Generator / None into a numpy Generator.

    None means the fixed default seed 0: every entry point in this package is
    deterministic unless the caller supplies their own randomness.
    """
    if isinstance(rng, np.random.Generator):
        return rng
    if rng is None:
        rng = 0
    return np.random.Generator(np.random.PCG64(int(rng)))


def perm_compose(p, r):
    """Composition p after r: (p o r)(i) = p[r[i]]."""
    p = np.asarray(p)
    r = np.asarray(r)
    return p[r]


def perm_invert(p):
    """Inverse bijection: perm_invert(p)[p[i]] = i."""
    p = np.asarray(p)
    inv = np.empty_like(p)
    inv[p] = np.arange(len(p))
    return inv


def _identity(q):
    return np.arange(q)


def _check_nq(n, q):
    n = int(n)
    q = int(q)
    if n < 2:
        raise ValueError(f"need at least 2 vertices, got n={n}")
    if q < 1:
        raise ValueError(f"label count must be >= 1, got q={q}")
    return n, q


class LinEqInstance:
    """Complete-graph instance with cyclic (offset) constraints.

    ``offsets`` may be a mapping {(u, v): c} covering every pair u < v, or an
    (n, n) integer array whose strict upper triangle holds the offsets (the
    rest of the array is ignored).
    """

    kind = "cyclic"

    def __init__(self, n, q, offsets):
        self.n, self.q = _check_nq(n, q)
        n, q = self.n, self.q
        upper = np.zeros((n, n), dtype=np.int64)
        if isinstance(offsets, dict):
            if len(offsets) != n * (n - 1) // 2:
                raise ValueError(
                    f"expected {n * (n - 1) // 2} offsets, got {len(offsets)}"
                )
            for (u, v), c in offsets.items():
                if not (0 <= u < v < n):
                    raise ValueError(f"offset key ({u}, {v}) is not a pair with u < v")
                upper[u, v] = c
        else:
            arr = np.asarray(offsets)
            if arr.shape != (n, n):
                raise ValueError(f"offset array must have shape ({n}, {n})")
            iu, iv = np.triu_indices(n, k=1)
            upper[iu, iv] = arr[iu, iv]
        if upper.min() < 0 or upper.max() >= q:
            raise ValueError(f"offsets must lie in [0, {q})")
        # offset(v, u) = -offset(u, v) mod q, derived, never independent state
        self._off = (upper - upper.T) % q
        self._off.flags.writeable = False
        self._eu, self._ev = np.triu_indices(n, k=1)
        self._eu.flags.writeable = False
        self._ev.flags.writeable = False

    @property
    def m(self):
        return self.n * (self.n - 1) // 2

    def offset(self, u, v):
        """Offset for the ordered pair (u, v); offset(v, u) is its negation mod q."""
        if u == v:
            raise ValueError("no self-loop offsets")
        return int(self._off[u, v])

    def offset_matrix(self):
        """Read-only (n, n) matrix M with M[u, v] = offset(u, v)."""
        return self._off

    def edges(self):
        """Index arrays (u, v) of all pairs u < v in lexicographic order."""
        return self._eu, self._ev

    def __eq__(self, other):
        return (
            isinstance(other, LinEqInstance)
            and self.n == other.n
            and self.q == other.q
            and np.array_equal(self._off, other._off)
        )

    def __repr__(self):
        return f"LinEqInstance(n={self.n}, q={self.q})"


class UgInstance:
    """Complete-graph instance with bijection (permutation) constraints.

    ``perms`` may be a mapping {(u, v): bijection} covering every pair u < v,
    or an (n, n, q) integer array whose [u, v] rows for u < v hold the
    bijections.  perm(v, u) is derived as the inverse of perm(u, v).
    """

    kind = "perm"

    def __init__(self, n, q, perms):
        self.n, self.q = _check_nq(n, q)
        n, q = self.n, self.q
        tensor = np.tile(_identity(q), (n, n, 1))
        iu, iv = np.triu_indices(n, k=1)
        if isinstance(perms, dict):
            if len(perms) != n * (n - 1) // 2:
                raise ValueError(f"expected {n * (n - 1) // 2} perms, got {len(perms)}")
            for (u, v), p in perms.items():
                if not (0 <= u < v < n):
                    raise ValueError(f"perm key ({u}, {v}) is not a pair with u < v")
                tensor[u, v] = p
        else:
            arr = np.asarray(perms)
            if arr.shape != (n, n, q):
                raise ValueError(f"perm array must have shape ({n}, {n}, {q})")
            tensor[iu, iv] = arr[iu, iv]
        fwd = tensor[iu, iv]
        if fwd.min() < 0 or fwd.max() >= q or not (np.sort(fwd, axis=1) == _identity(q)).all():
            raise ValueError(f"each perm must be a bijection on [0, {q})")
        # perm(v, u) = inverse of perm(u, v), derived, never independent state
        inv = np.empty_like(fwd)
        rows = np.arange(fwd.shape[0])[:, None]
        inv[rows, fwd] = _identity(q)[None, :]
        tensor[iv, iu] = inv
        self._perm = tensor
        self._perm.flags.writeable = False
        self._eu, self._ev = iu, iv
        self._eu.flags.writeable = False
        self._ev.flags.writeable = False

    @property
    def m(self):
        return self.n * (self.n - 1) // 2

    def perm(self, u, v):
        """Bijection for the ordered pair (u, v); perm(v, u) is its inverse."""
        if u == v:
            raise ValueError("no self-loop perms")
        return self._perm[u, v]

    def perm_tensor(self):
        """Read-only (n, n, q) tensor T with T[u, v] = perm(u, v); diagonal is identity."""
        return self._perm

    def edges(self):
        return self._eu, self._ev

    def __eq__(self, other):
        return (
            isinstance(other, UgInstance)
            and self.n == other.n
            and self.q == other.q
            and np.array_equal(self._perm, other._perm)
        )

    def __repr__(self):
        return f"UgInstance(n={self.n}, q={self.q})"


class DenseInstance:
    """A not-necessarily-complete instance: a complete base plus an edge mask.

    ``present`` is an (n, n) boolean symmetric matrix with a False diagonal.
    Constraints of absent pairs are carried by the base but never evaluated.

    ``delta`` is the canonical density slack (n-1-min_degree)/(n-1), an exact
    Fraction derived from the actual degrees, so every vertex degree is
    >= ceil((1-delta)(n-1)) with equality somewhere.  Pass ``max_delta`` to
    additionally require delta <= max_delta.
    """

    def __init__(self, base, present, max_delta=None):
        if not isinstance(base, (LinEqInstance, UgInstance)):
            raise ValueError(f"base must be a complete instance, got {type(base).__name__}")
        self.base = base
        n = base.n
        mask = np.asarray(present, dtype=bool)
        if mask.shape != (n, n):
            raise ValueError(f"present mask must have shape ({n}, {n})")
        if mask.diagonal().any():
            raise ValueError("present mask must have a False diagonal")
        if not np.array_equal(mask, mask.T):
            raise ValueError("present mask must be symmetric")
        degrees = mask.sum(axis=1)
        dmin = int(degrees.min())
        if dmin < 1:
            raise ValueError("every vertex needs degree >= 1 (density slack < 1)")
        self.delta = Fraction(n - 1 - dmin, n - 1)
        if max_delta is not None and self.delta > Fraction(max_delta):
            raise ValueError(
                f"minimum degree {dmin} gives density slack {self.delta}, "
                f"above the allowed {max_delta}"
            )
        self._present = mask.copy()
        self._present.flags.writeable = False
        self._degrees = degrees
        self._degrees.flags.writeable = False
        iu, iv = np.nonzero(np.triu(self._present, k=1))
        self._eu, self._ev = iu, iv
        self._eu.flags.writeable = False
        self._ev.flags.writeable = False

    @classmethod
    def wrap_complete(cls, base):
        """View a complete instance as a dense instance with delta = 0."""
        mask = ~np.eye(base.n, dtype=bool)
        return cls(base, mask)

    @property
    def n(self):
        return self.base.n

    @property
    def q(self):
        return self.base.q

    @property
    def kind(self):
        return self.base.kind

    @property
    def m(self):
        return len(self._eu)

    def present(self, u, v):
        return bool(self._present[u, v])

    def present_matrix(self):
        return self._present

    def degrees(self):
        return self._degrees

    def edges(self):
        """Index arrays (u, v) of present pairs u < v in lexicographic order."""
        return self._eu, self._ev

    def __eq__(self, other):
        # equality looks only at structure that is semantically live:
        # absent-pair constraints in the base are ignored
        if not (
            isinstance(other, DenseInstance)
            and self.n == other.n
            and self.q == other.q
            and self.kind == other.kind
            and np.array_equal(self._present, other._present)
        ):
            return False
        eu, ev = self.edges()
        if self.kind == "cyclic":
            return np.array_equal(
                self.base.offset_matrix()[eu, ev], other.base.offset_matrix()[eu, ev]
            )
        return np.array_equal(
            self.base.perm_tensor()[eu, ev], other.base.perm_tensor()[eu, ev]
        )

    def __repr__(self):
        return (
            f"DenseInstance(n={self.n}, q={self.q}, kind={self.kind!r}, "
            f"m={self.m}, delta={self.delta})"
        )


@dataclass
class SolveReport:
    """Outcome of one solver run.

    ``violated`` always equals violated_count(instance, assignment) and can be
    recomputed by the caller.  ``pivot``/``pivot_label`` are filled by
    pivot-based solvers, ``seed`` by randomized ones when a plain int seed was
    supplied, ``elapsed`` is wall-clock seconds, and ``extra`` carries
    algorithm-specific metadata.
    """

    assignment: np.ndarray
    violated: int
    algorithm: str
    pivot: int | None = None
    pivot_label: int | None = None
    seed: int | None = None
    elapsed: float = 0.0
    extra: dict = field(default_factory=dict)


def _as_labels(g, labels):
    a = np.asarray(labels)
    if a.shape != (g.n,):
        raise ValueError(f"assignment must have length n={g.n}, got shape {a.shape}")
    if not np.issubdtype(a.dtype, np.integer):
        raise ValueError("assignment labels must be integers")
    if len(a) and (a.min() < 0 or a.max() >= g.q):
        raise ValueError(f"labels must lie in [0, {g.q})")
    return a.astype(np.int64, copy=False)


def violated_count(g, labels):
    """Number of constraints the assignment violates (absent pairs never count)."""
    a = _as_labels(g, labels)
    return _violated_fast(g, a)


def _violated_fast(g, a):
    base = g.base if isinstance(g, DenseInstance) else g
    if base.kind == "cyclic" and not isinstance(g, DenseInstance):
        # walk the upper triangle in row blocks: one pass over the offset
        # matrix instead of gathering m-length edge arrays
        n, q = base.n, base.q
        M = base.offset_matrix()
        bad = 0
        block = max(1, (1 << 18) // max(n, 1))
        for start in range(0, n, block):
            stop = min(start + block, n)
            d = (a[start:stop, None] - a[None, start:]) % q != M[start:stop, start:]
            bad += int(np.count_nonzero(np.triu(d, k=1)))
        return bad
    eu, ev = g.edges()
    if base.kind == "cyclic":
        bad = (a[eu] - a[ev]) % base.q != base.offset_matrix()[eu, ev]
    else:
        bad = base.perm_tensor()[eu, ev, a[eu]] != a[ev]
    return int(np.count_nonzero(bad))


def satisfied_count(g, labels):
    """Number of constraints the assignment satisfies; violated + satisfied = m."""
    return g.m - violated_count(g, labels)


def triangle_consistent(g, u, v, w):
    """Whether the three constraints around {u, v, w} can all hold at once.

    For cyclic constraints the triangle is satisfiable exactly when
    offset(u,v) + offset(v,w) + offset(w,u) == 0 (mod q).  For bijections it
    is satisfiable exactly when the cycle composition
    perm(w,u) o perm(v,w) o perm(u,v) fixes at least one label: walking that
    label around the triangle satisfies all three edges, while a fixed-point
    free composition violates at least one edge under every labeling.
    On dense instances all three edges must be present.
    """
    if len({u, v, w}) != 3:
        raise ValueError("triangle vertices must be distinct")
    base = g
    if isinstance(g, DenseInstance):
        for a, b in ((u, v), (v, w), (w, u)):
            if not g.present(a, b):
                raise MissingEdgeError(f"edge ({a}, {b}) is absent from the instance")
        base = g.base
    if base.kind == "cyclic":
        M = base.offset_matrix()
        return int(M[u, v] + M[v, w] + M[w, u]) % base.q == 0
    comp = perm_compose(base.perm(w, u), perm_compose(base.perm(v, w), base.perm(u, v)))
    return bool((comp == _identity(base.q)).any())


def to_square_instance(g):
    """Replace each offset by the most common two-step offset through a third vertex.

    For every pair u < v the new offset is the mode over all other vertices w
    of offset(u, w) + offset(w, v) mod q, ties resolved toward the smallest
    offset value.  On instances that admit a perfect assignment this is the
    identity transform.
    """
    if not isinstance(g, LinEqInstance):
        raise ValueError("square transform is defined for complete cyclic instances")
    n, q = g.n, g.q
    if n < 3:
        raise ValueError("square transform needs n >= 3")
    C = g.offset_matrix()
    counts = np.zeros(n * n * q, dtype=np.int64)
    cell = q * np.arange(n * n)
    for w in range(n):
        # two-step offset via w for every ordered pair at once
        t = (C[:, w][:, None] + C[w, :][None, :]) % q
        counts += np.bincount(cell + t.ravel(), minlength=n * n * q)
    counts = counts.reshape(n, n, q)
    iu, iv = np.triu_indices(n, k=1)
    # drop the degenerate paths w == u and w == v (both contribute offset(u, v))
    np.subtract.at(counts, (iu, iv, C[iu, iv]), 2)
    mode = np.argmax(counts[iu, iv], axis=1)  # first max = smallest offset
    upper = np.zeros((n, n), dtype=np.int64)
    upper[iu, iv] = mode
    return LinEqInstance(n, q, upper)
