"""Reproducible benchmark sweeps over generated instances.

A sweep is the cross product of (family, n, q, delta, corruption fraction)
cells with a list of seeds and algorithms; each (cell, seed) pair generates
one instance, every algorithm runs on it, and one CSV row per (cell, seed,
algorithm) comes out in deterministic order.  Per-cell RNG streams are spawned
from (seed, cell index), so running cells in parallel never changes results.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product

import numpy as np

from .certify import triangle_packing_lb
from .errors import ResourceLimitError
from .generators import (
    noise_model,
    planted,
    sparsify_everywhere_dense,
    tight_pivot_example,
)
from .ptas import PtasConfig, greedy_max, ptas_solve
from .solvers import (
    brute_force,
    dense_voting,
    pivot_best,
    pivot_random,
    randomized_voting,
    voting_solve,
)

__all__ = [
    "BenchRow",
    "CSV_HEADER",
    "ALGORITHMS",
    "FAMILIES",
    "run_bench",
    "write_csv",
    "resolve_threads",
]

CSV_HEADER = (
    "algorithm,n,q,delta,seed,corruptions,opt_or_lb,opt_exact,val,ratio,"
    "elapsed_ms,error"
)

ALGORITHMS = (
    "pivot",
    "pivot-random",
    "voting",
    "rvoting",
    "dense-voting",
    "brute",
    "greedy-max",
    "ptas",
)

FAMILIES = ("planted", "noise", "tight")

DEFAULT_BENCH_BRUTE_LIMIT = 1_000_000


@dataclass
class BenchRow:
    """One benchmark measurement; ``opt_exact`` is True when opt_or_lb is the
    brute-force optimum and False when it is a packing lower bound."""

    algorithm: str
    n: int
    q: int
    delta: float
    seed: int
    corruptions: int | None
    opt_or_lb: int | None
    opt_exact: bool | None
    val: int | None
    ratio: float | None
    elapsed_ms: float | None
    error: str = ""


def resolve_threads(threads=None):
    """Worker count: explicit argument, else UGSOLVE_THREADS, else CPU count
    (0 or unset mean auto)."""
    if threads is None:
        raw = os.environ.get("UGSOLVE_THREADS", "0")
        try:
            threads = int(raw)
        except ValueError:
            raise ValueError(f"UGSOLVE_THREADS must be an integer, got {raw!r}") from None
    if threads < 0:
        raise ValueError("thread count must be >= 0")
    return threads or (os.cpu_count() or 1)


def _spawned(seed, cell_index, lane):
    """Independent deterministic RNG stream for one (cell, seed) row group."""
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(cell_index, lane)))
    )


def _spawned_int(seed, cell_index, lane):
    return int(
        np.random.SeedSequence(seed, spawn_key=(cell_index, lane)).generate_state(
            1, np.uint64
        )[0]
    )


def _make_instance(family, n, q, delta, frac, seed, cell_index):
    if family == "planted":
        m = n * (n - 1) // 2
        k = round(frac * m)
        rep = planted(n, q, k, kind="cyclic", rng=_spawned(seed, cell_index, 0))
        inst, corr = rep.instance, rep.num_corrupt
    elif family == "noise":
        rep = noise_model(n, q, frac, rng=_spawned(seed, cell_index, 0))
        inst, corr = rep.instance, rep.num_corrupt
    elif family == "tight":
        inst, corr = tight_pivot_example(n, q), None
    else:
        raise ValueError(f"unknown family {family!r}")
    if delta:
        inst = sparsify_everywhere_dense(inst, delta, rng=_spawned(seed, cell_index, 1))
    return inst, corr


def _run_algorithm(alg, inst, solver_seed, tau, brute_limit):
    if alg == "pivot":
        return pivot_best(inst)
    if alg == "pivot-random":
        return pivot_random(inst, rng=solver_seed)
    if alg == "voting":
        return voting_solve(inst)
    if alg == "rvoting":
        return randomized_voting(inst, rng=solver_seed)
    if alg == "dense-voting":
        return dense_voting(inst)
    if alg == "brute":
        return brute_force(inst, limit=brute_limit)
    if alg == "greedy-max":
        return greedy_max(inst, rng=solver_seed)
    if alg == "ptas":
        return ptas_solve(inst, PtasConfig(tau=tau, seed=solver_seed))
    raise ValueError(f"unknown algorithm {alg!r}")


def _ratio(val, ref):
    if ref is None:
        return None
    if ref > 0:
        return val / ref
    return 1.0 if val == 0 else None


def _cell_rows(family, n, q, delta, frac, seed, cell_index, algorithms, tau, brute_limit):
    common = dict(n=n, q=q, delta=delta, seed=seed)
    try:
        inst, corr = _make_instance(family, n, q, delta, frac, seed, cell_index)
    except Exception as exc:
        return [
            BenchRow(
                algorithm=alg,
                corruptions=None,
                opt_or_lb=None,
                opt_exact=None,
                val=None,
                ratio=None,
                elapsed_ms=None,
                error=str(exc),
                **common,
            )
            for alg in algorithms
        ]
    try:
        opt = brute_force(inst, limit=brute_limit).violated
        exact = True
    except ResourceLimitError:
        opt = triangle_packing_lb(inst, rng=_spawned(seed, cell_index, 2)).lower_bound
        exact = False
    rows = []
    for alg_index, alg in enumerate(algorithms):
        solver_seed = _spawned_int(seed, cell_index, 10 + alg_index)
        try:
            rep = _run_algorithm(alg, inst, solver_seed, tau, brute_limit)
            rows.append(
                BenchRow(
                    algorithm=alg,
                    corruptions=corr,
                    opt_or_lb=opt,
                    opt_exact=exact,
                    val=rep.violated,
                    ratio=_ratio(rep.violated, opt),
                    elapsed_ms=rep.elapsed * 1000.0,
                    **common,
                )
            )
        except Exception as exc:
            rows.append(
                BenchRow(
                    algorithm=alg,
                    corruptions=corr,
                    opt_or_lb=opt,
                    opt_exact=exact,
                    val=None,
                    ratio=None,
                    elapsed_ms=None,
                    error=str(exc),
                    **common,
                )
            )
    return rows


def run_bench(
    algorithms,
    ns,
    qs,
    deltas=(0.0,),
    corrupt_fracs=(0.0,),
    seeds=(0,),
    *,
    family="planted",
    tau=0.5,
    brute_limit=DEFAULT_BENCH_BRUTE_LIMIT,
    threads=None,
):
    """Run the sweep and return rows in deterministic order (cells in
    product order over n, q, delta, fraction; then seeds; then algorithms)."""
    algorithms = list(algorithms)
    for alg in algorithms:
        if alg not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {alg!r}; choose from {ALGORITHMS}")
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")
    cells = list(product(ns, qs, deltas, corrupt_fracs))
    tasks = [
        (family, n, q, delta, frac, seed, cell_index, algorithms, tau, brute_limit)
        for cell_index, (n, q, delta, frac) in enumerate(cells)
        for seed in seeds
    ]
    workers = resolve_threads(threads)
    if workers == 1 or len(tasks) <= 1:
        groups = [_cell_rows(*t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            groups = list(pool.map(lambda t: _cell_rows(*t), tasks))
    return [row for group in groups for row in group]


def _fmt(value, spec=None):
    if value is None:
        return ""
    if spec is not None:
        return format(value, spec)
    if isinstance(value, bool):
        return str(int(value))
    return str(value)


def write_csv(rows, fh):
    """Write the header and rows; returns the number of data rows written."""
    fh.write(CSV_HEADER + "\n")
    for r in rows:
        fields = [
            r.algorithm,
            str(r.n),
            str(r.q),
            format(r.delta, "g"),
            str(r.seed),
            _fmt(r.corruptions),
            _fmt(r.opt_or_lb),
            _fmt(r.opt_exact),
            _fmt(r.val),
            _fmt(r.ratio, ".6g"),
            _fmt(r.elapsed_ms, ".3f"),
            r.error.replace("\n", " ").replace(",", ";"),
        ]
        fh.write(",".join(fields) + "\n")
    return len(rows)
