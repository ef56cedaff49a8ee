"""Typed logic programs with cardinality constructs: grounder and solver.

The pipeline is parse_data_file/parse_rule_file -> build_database ->
check_program -> ground_theory -> write_tdc, and read_tdc -> solve on
the solving side. The psgrnd and aspps console scripts wrap the two
halves.
"""

from .database import DataDatabase, build_database
from .errors import GroundError, ParseError, TdcError, ToolchainError
from .grounder import check_program, ground_theory, output_name
from .parser import parse_data_file, parse_rule_file
from .solver import SolveResult, SolveStats, Solver, solve
from .tdc import check_model, print_theory, read_tdc, write_tdc
from .theory import CardConstruct, GroundAtom, GroundClause, GroundTheory

__all__ = [
    "CardConstruct",
    "DataDatabase",
    "GroundAtom",
    "GroundClause",
    "GroundError",
    "GroundTheory",
    "ParseError",
    "SolveResult",
    "SolveStats",
    "Solver",
    "TdcError",
    "ToolchainError",
    "build_database",
    "check_model",
    "check_program",
    "ground_theory",
    "output_name",
    "parse_data_file",
    "parse_rule_file",
    "print_theory",
    "read_tdc",
    "solve",
    "write_tdc",
]

__version__ = "0.1.0"
