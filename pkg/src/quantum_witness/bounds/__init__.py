"""Majorization preorder, uncertainty functionals and cumulative bounds."""

from quantum_witness.bounds.entropic import bound_sweep, entropic_lower_bound, pairwise_vs_sum
from quantum_witness.bounds.functionals import UncertaintyFunctional, eval_f_table, get_functional
from quantum_witness.bounds.models import (
    BoundKind,
    BoundVector,
    CumulativeBounds,
    EntropyKind,
    OptimizerProfile,
    StateSet,
    StateSetKind,
    VectorTag,
)
from quantum_witness.bounds.uncertainty import (
    check_device_independent_relation,
    check_relation_3,
    cumulative_bounds,
    device_independent_bounds,
    multi_observable_bounds,
)
from quantum_witness.bounds.vectors import from_cumulative, majorizes, sort_asc, sort_desc

__all__ = [
    "BoundKind",
    "BoundVector",
    "CumulativeBounds",
    "EntropyKind",
    "OptimizerProfile",
    "StateSet",
    "StateSetKind",
    "UncertaintyFunctional",
    "VectorTag",
    "bound_sweep",
    "check_device_independent_relation",
    "check_relation_3",
    "cumulative_bounds",
    "device_independent_bounds",
    "entropic_lower_bound",
    "eval_f_table",
    "from_cumulative",
    "get_functional",
    "majorizes",
    "multi_observable_bounds",
    "pairwise_vs_sum",
    "sort_asc",
    "sort_desc",
]
