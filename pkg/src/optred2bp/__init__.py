"""Symmetry reduction toolkit for the spatial two-body problem."""

from .euclid import (
    SE3Element,
    act_phase,
    coadjoint,
    compose,
    conjugation,
    inverse,
    rotation_about_axis,
)
from .momentum import (
    MomentumValue,
    PhasePoint,
    char_distribution_dim,
    is_regular,
    momentum_jacobian,
    momentum_map,
)
from .isotropy import (
    IsotropyClass,
    canonicalize,
    classify_fine,
    isotropy_class,
    isotropy_contains,
    isotropy_type_tangent,
)
from .optimal import (
    OptimalLabel,
    ReducedPoint,
    chart_map_F_p,
    decompose_momentum_fiber,
    double_cover,
    g_rho,
    label,
    level_set_contains,
    parametrize,
    project,
    section,
    transport,
)
from .projcyl import beta, chart_of, f_s, plane_decompose, wrap_pi
from .reduced import (
    Trajectory,
    commutation_check,
    conservation_report,
    integrate,
    pullback_form_numeric,
    reduced_form,
    reduced_hamiltonian,
    reduced_vector_field,
)
from . import hamiltonians

__version__ = "0.1.0"

__all__ = [
    "SE3Element",
    "PhasePoint",
    "MomentumValue",
    "IsotropyClass",
    "OptimalLabel",
    "ReducedPoint",
    "Trajectory",
    "act_phase",
    "beta",
    "canonicalize",
    "chart_map_F_p",
    "chart_of",
    "char_distribution_dim",
    "classify_fine",
    "coadjoint",
    "commutation_check",
    "compose",
    "conjugation",
    "conservation_report",
    "decompose_momentum_fiber",
    "double_cover",
    "f_s",
    "g_rho",
    "hamiltonians",
    "integrate",
    "inverse",
    "is_regular",
    "isotropy_class",
    "isotropy_contains",
    "isotropy_type_tangent",
    "label",
    "level_set_contains",
    "momentum_jacobian",
    "momentum_map",
    "parametrize",
    "plane_decompose",
    "project",
    "pullback_form_numeric",
    "reduced_form",
    "reduced_hamiltonian",
    "reduced_vector_field",
    "rotation_about_axis",
    "section",
    "transport",
    "wrap_pi",
]
