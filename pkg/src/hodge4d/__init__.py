"""4D space-time exterior calculus for convection-diffusion problems.

Exact symbolic layer (fields, forms, the unified operator, boundary
reductions) plus a 1+1D finite-difference solver that confirms the
vanishing-perturbation limit numerically.
"""

from .fields import AXES, ExpPolyField, PolyField
from .forms import (
    BasisForm,
    DegreeUnderflowWarning,
    KForm,
    MaterialParams,
    basis_forms,
    codifferential_1a,
    codifferential_a1,
    display_components,
    exterior_derivative,
    hodge_star,
    interior_product_dt,
    parse_basis_label,
    scaled_hodge_star,
    spatial_form,
    spatial_parts,
    temporal_parts,
    wedge,
)
from .convdiff import (
    ConvectionForm,
    ExpansionReport,
    NoPotentialError,
    Potential,
    build_convection_form,
    emergent_constraint,
    exp_fitted_flux,
    expand_componentwise,
    flux,
    hodge_laplacian,
    make_potential,
    operator_pieces,
    unified_operator,
)
from .boundary import (
    BoundaryKind,
    BoundaryReport,
    NormalForm,
    artificial_bc,
    boundary_report,
    wedge_trace,
)
from .solver import (
    DiscreteField,
    Grid1p1,
    LinearSystem,
    ProblemConfig,
    Scheme,
    SolveError,
    SweepFloorError,
    SweepResult,
    assemble,
    bernoulli,
    discrete_bilinear,
    epsilon_sweep,
    l2_error,
    reference_evolution,
    solve,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
