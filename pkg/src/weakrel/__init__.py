"""Difference-Bound Shapes and Octagonal Shapes with terminating widenings."""

from .bounds import INF, Bound, bound
from .dbm import (Constraint, Dbm, DimensionError, Shape, close, forget, from_constraints,
                  join, leq, meet, to_constraints)
from .octagon import (OctConstraint, OctMatrix, OctShape, oct_forget, oct_from_constraints,
                      oct_join, oct_leq, oct_meet, oct_to_constraints, strong_close)
from .reduction import (ReducedSystem, ThresholdSet, harvest_thresholds, strong_reduce,
                        transitive_reduce)
from .widening import (WideningPoint, WideningStrategy, widen, widen_delayed,
                       widen_standard, widen_syntactic, widen_upto)
from .divergence import WitnessReport, search_divergence
from .lang import ParseError, parse
from .analyzer import AnalysisResult, analyze, transfer

__all__ = [name for name in dir() if not name.startswith("_")]
