"""F1-representations of quivers: coefficient quivers, nice gradings, Grassmannian counts and Hall algebras."""

from .errors import F1QError
from .gradings import (
    nice_length,
    realize_nice_sequence,
    sufficient_conditions_report,
    universal_iteration,
)
from .grassmannian import chi_table, euler_characteristic, interpolated_chi
from .hall import HallAlgebra, HallElement, IsoClass
from .quiver import Quiver, Winding, classify_shape, named_quiver
from .rep import F1Rep, direct_sum, rep_from_winding

__version__ = "0.1.0"

__all__ = [
    "F1QError",
    "F1Rep",
    "HallAlgebra",
    "HallElement",
    "IsoClass",
    "Quiver",
    "Winding",
    "chi_table",
    "classify_shape",
    "direct_sum",
    "euler_characteristic",
    "interpolated_chi",
    "named_quiver",
    "nice_length",
    "realize_nice_sequence",
    "rep_from_winding",
    "sufficient_conditions_report",
    "universal_iteration",
]
