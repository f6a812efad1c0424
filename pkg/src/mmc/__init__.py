"""Maximum matrix contraction: exact, heuristic and integer-programming solvers."""

from .core import (
    BinaryMatrix,
    IntegerMatrix,
    Selection,
    apply,
    contract,
    density,
    density_delta_column,
    density_delta_line,
    is_valid,
    reduce_empty,
    single_column_valid,
    single_line_valid,
    trim,
)
from .errors import BoundsError, DomainError, GuardError, MMCError, ParseError
from .heuristics import greedy, lcl, n_pair, n_value, neighborization
from .instances import Graph, from_clique, parse_graph, parse_instance, random_instance, serialize_instance
from .solvers import SolveReport, complete_to_maximal, exact_solve, is_maximal, naive_enumerate

__version__ = "0.1.0"
