"""Exact validity checking, degree bounds, and hardness reductions for
linear information inequalities."""

from .core import (
    CapExceeded,
    DomainError,
    Expr,
    Measure,
    SetRep,
    Universe,
    combine,
    cond_entropy,
    cond_mutual_info,
    entropy,
    evaluate,
    expand_measure,
    make_expr,
    multi_mutual_info,
    mutual_info,
    set_representation,
    universe,
)
from .functions import (
    EntropyVector,
    JointDistribution,
    SetFunction,
    basic_modular,
    distribution_from_csv,
    entropic_from_distribution,
    enumerate_monotone_boolean,
    from_values,
    is_modular,
    is_monotone,
    is_polymatroid,
    step_function,
    zero_function,
)
from .bounds import (
    BoundResult,
    Conditional,
    GuardedEntry,
    GuardedSigma,
    Query,
    Relation,
    build_sigma,
    conditional,
    degree_scan,
    is_acyclic,
    is_simple,
    logbound_modular,
    logbound_polymatroid_dual,
    logbound_simple_entropic,
    logbound_step,
    natural_join,
    parse_constraints,
    relation_from_csv,
    satisfies_degrees,
    sigma_inequality,
)
from .dsl import DslError, format_inequality, parse_inequality, parse_program
from .reductions import (
    Graph,
    MonSat3Instance,
    PartitionInstance,
    coloring_oracle,
    decode_coloring_witness,
    decode_monsat_witness,
    decode_partition_witness,
    from_3coloring,
    from_3dmonsat,
    from_partition,
    graph,
    parse_graph,
    parse_monsat,
    parse_partition,
    partition_oracle,
    sat_oracle,
)
from .validity import (
    Axiom,
    Decomposition,
    FormError,
    UnsupportedSemantics,
    Verdict,
    Witness,
    a_reduction,
    check,
    check_modular,
    check_monotone_fixpoint,
    check_monotone_lp,
    check_polymatroid,
    check_simple_sigma,
    check_step,
    is_simple_form,
)

__version__ = "0.1.0"

__all__ = [
    "Axiom",
    "BoundResult",
    "CapExceeded",
    "Conditional",
    "Decomposition",
    "DomainError",
    "DslError",
    "EntropyVector",
    "Expr",
    "FormError",
    "Graph",
    "GuardedEntry",
    "GuardedSigma",
    "JointDistribution",
    "Measure",
    "MonSat3Instance",
    "PartitionInstance",
    "Query",
    "Relation",
    "SetFunction",
    "SetRep",
    "Universe",
    "UnsupportedSemantics",
    "Verdict",
    "Witness",
    "a_reduction",
    "basic_modular",
    "build_sigma",
    "check",
    "check_modular",
    "check_monotone_fixpoint",
    "check_monotone_lp",
    "check_polymatroid",
    "check_simple_sigma",
    "check_step",
    "coloring_oracle",
    "combine",
    "cond_entropy",
    "cond_mutual_info",
    "conditional",
    "decode_coloring_witness",
    "decode_monsat_witness",
    "decode_partition_witness",
    "degree_scan",
    "distribution_from_csv",
    "entropic_from_distribution",
    "entropy",
    "enumerate_monotone_boolean",
    "evaluate",
    "expand_measure",
    "format_inequality",
    "from_3coloring",
    "from_3dmonsat",
    "from_partition",
    "from_values",
    "graph",
    "is_acyclic",
    "is_modular",
    "is_monotone",
    "is_polymatroid",
    "is_simple",
    "is_simple_form",
    "logbound_modular",
    "logbound_polymatroid_dual",
    "logbound_simple_entropic",
    "logbound_step",
    "make_expr",
    "multi_mutual_info",
    "mutual_info",
    "natural_join",
    "parse_constraints",
    "parse_graph",
    "parse_inequality",
    "parse_monsat",
    "parse_partition",
    "parse_program",
    "partition_oracle",
    "relation_from_csv",
    "sat_oracle",
    "satisfies_degrees",
    "set_representation",
    "sigma_inequality",
    "step_function",
    "universe",
    "zero_function",
]
