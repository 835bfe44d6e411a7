"""Workbench for round elimination and Supported LOCAL lower bounds.

The package represents locally checkable problems in the black-white
formalism, applies round elimination and the lift construction, searches
for solutions on concrete graphs, and evaluates lower-bound arithmetic.
"""

from .problems import (
    Configuration,
    Constraint,
    Diagram,
    Problem,
    ParseError,
    compute_diagram,
    expand_condensed,
    format_problem,
    is_at_least_as_strong,
    parse_problem,
    problems_equivalent,
    right_closed_sets,
)
from .errors import ExplosionGuard, GenerationFailed, Indeterminate
from .roundelim import (
    RelaxationMap,
    apply_RE,
    check_relaxation,
    find_relaxation,
    merge_labels,
    re,
    rere,
)
from .lifting import LiftedProblem, format_lifted, lift
from .families import (
    RulingBarProblem,
    arbdef_family,
    arbdef_to_coloring,
    lift_solution_to_base,
    matching_family,
    maximal_matching_problem,
    peel_ruling_level,
    ruling_bar_family,
    ruling_family,
)
from .bounds import derand_translate, det_bound, sequence_length, theorem34_bounds
from .graphs import (
    BipartiteGraph,
    Graph,
    Hypergraph,
    SupportInstance,
    cycle_graph,
    format_graph,
    gen_biregular,
    parse_graph_file,
)
from .solvers import (
    check_solution,
    find_bipartite_solution,
    find_nonbipartite_solution,
    find_S_solution,
    format_solution,
    parse_solution,
    zero_round_supported_solvable,
)

__all__ = [
    "Configuration",
    "Constraint",
    "Diagram",
    "Problem",
    "ParseError",
    "ExplosionGuard",
    "GenerationFailed",
    "Indeterminate",
    "compute_diagram",
    "expand_condensed",
    "format_problem",
    "is_at_least_as_strong",
    "parse_problem",
    "problems_equivalent",
    "right_closed_sets",
    "RelaxationMap",
    "apply_RE",
    "check_relaxation",
    "find_relaxation",
    "merge_labels",
    "re",
    "rere",
    "LiftedProblem",
    "format_lifted",
    "lift",
    "RulingBarProblem",
    "arbdef_family",
    "arbdef_to_coloring",
    "lift_solution_to_base",
    "matching_family",
    "maximal_matching_problem",
    "peel_ruling_level",
    "ruling_bar_family",
    "ruling_family",
    "derand_translate",
    "det_bound",
    "sequence_length",
    "theorem34_bounds",
    "BipartiteGraph",
    "Graph",
    "Hypergraph",
    "SupportInstance",
    "cycle_graph",
    "format_graph",
    "gen_biregular",
    "parse_graph_file",
    "check_solution",
    "find_bipartite_solution",
    "find_nonbipartite_solution",
    "find_S_solution",
    "format_solution",
    "parse_solution",
    "zero_round_supported_solvable",
]
