"""Solvers, generators, certificates, and benchmarks for label-offset
(cyclic) and permutation constraint games on complete and everywhere-dense
graphs."""

from .bench import ALGORITHMS, BenchRow, run_bench, write_csv
from .certify import (
    GuaranteeBound,
    PackingCertificate,
    dense_voting_bound,
    inconsistent_triangles,
    iter_inconsistent_triangles,
    triangle_packing_lb,
    voting_bound,
)
from .core import (
    DenseInstance,
    LinEqInstance,
    SolveReport,
    UgInstance,
    as_generator,
    perm_compose,
    perm_invert,
    satisfied_count,
    to_square_instance,
    triangle_consistent,
    violated_count,
)
from .errors import (
    GadgetGenerationError,
    MissingEdgeError,
    OutOfRegimeError,
    ParseError,
    ResourceLimitError,
    UgsolveError,
)
from .fileio import (
    parse_assignment,
    parse_instance,
    read_assignment,
    read_instance,
    serialize_assignment,
    serialize_instance,
    write_assignment,
    write_instance,
)
from .generators import (
    BipartiteGadget,
    BlowupSpec,
    GadgetSpec,
    PlantedInstance,
    SignedGraph,
    bipartite_gadget,
    blow_up,
    blow_up_star,
    brute_min_disagree2,
    noise_model,
    pad_to_ug,
    planted,
    random_signed_graph,
    reduce_mindisagree2,
    signed_cost,
    sparsify_everywhere_dense,
    tight_pivot_example,
)
from .ptas import PtasConfig, greedy_max, ptas_solve
from .solvers import (
    BRUTE_FORCE_LIMIT,
    UNLABELED,
    FlipDiagnostics,
    brute_force,
    dense_voting,
    flip_diagnostics,
    pivot_assign,
    pivot_best,
    pivot_random,
    randomized_voting,
    voting_single,
    voting_solve,
)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "BRUTE_FORCE_LIMIT",
    "UNLABELED",
    "BenchRow",
    "BipartiteGadget",
    "BlowupSpec",
    "DenseInstance",
    "FlipDiagnostics",
    "GadgetGenerationError",
    "GadgetSpec",
    "GuaranteeBound",
    "LinEqInstance",
    "MissingEdgeError",
    "OutOfRegimeError",
    "PackingCertificate",
    "ParseError",
    "PlantedInstance",
    "PtasConfig",
    "ResourceLimitError",
    "SignedGraph",
    "SolveReport",
    "UgInstance",
    "UgsolveError",
    "as_generator",
    "bipartite_gadget",
    "blow_up",
    "blow_up_star",
    "brute_force",
    "brute_min_disagree2",
    "dense_voting",
    "dense_voting_bound",
    "flip_diagnostics",
    "greedy_max",
    "inconsistent_triangles",
    "iter_inconsistent_triangles",
    "noise_model",
    "pad_to_ug",
    "parse_assignment",
    "parse_instance",
    "perm_compose",
    "perm_invert",
    "pivot_assign",
    "pivot_best",
    "pivot_random",
    "planted",
    "ptas_solve",
    "random_signed_graph",
    "randomized_voting",
    "read_assignment",
    "read_instance",
    "reduce_mindisagree2",
    "run_bench",
    "satisfied_count",
    "serialize_assignment",
    "serialize_instance",
    "signed_cost",
    "sparsify_everywhere_dense",
    "tight_pivot_example",
    "to_square_instance",
    "triangle_consistent",
    "triangle_packing_lb",
    "violated_count",
    "voting_bound",
    "voting_single",
    "voting_solve",
    "write_assignment",
    "write_csv",
    "write_instance",
]
