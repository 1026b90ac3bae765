from symsep.measurement.basis import (
    OperatorBasisLayout,
    admissible_shapes,
    family_name,
    gell_mann_basis,
    gell_mann_labels,
    layout,
    layout_from_labels,
)
from symsep.measurement.povm import (
    DualFrame,
    SymmetricPovm,
    build,
    coincidence_bound,
    coincidence_index,
    dual_frame,
    reconstruct,
    t_range,
    x_of_t,
)

__all__ = [
    "OperatorBasisLayout",
    "gell_mann_basis",
    "gell_mann_labels",
    "layout",
    "layout_from_labels",
    "admissible_shapes",
    "family_name",
    "SymmetricPovm",
    "DualFrame",
    "build",
    "t_range",
    "x_of_t",
    "coincidence_index",
    "coincidence_bound",
    "dual_frame",
    "reconstruct",
]
