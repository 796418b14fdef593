"""Orbit spaces of qutrit mixed states under U(3) and SU(2)xU(1).

The package constructs both orbit spaces with the gradient-matrix method:
exact su(3) structure constants, the Casimir and local invariants, validated
closed-form Grad matrices with their boundary surfaces, Molien counting by
three independent methods, semi-algebraic membership predicates, and slice
geometry for figure reproduction.  See the CLI (``qutrit-orbits``) for the
runnable surface.
"""

from .invariants import (
    C3Relation,
    GlobalInvariants,
    LocalInvariantPoint,
    LocalInvariants,
    casimirs,
    casimir_relation_check,
    fit_c3_relation,
    local_invariants,
    local_point,
    trace_coordinates,
)
from .gradgeom import (
    det_grad_local,
    fit_grad_entry,
    grad_local_closed,
    grad_su3_closed,
    numeric_grad,
    sigma_surfaces,
)
from .membership import (
    MembershipVerdict,
    SliceMesh,
    in_global_orbit_space,
    in_local_orbit_space,
    is_physical_bloch,
    key_points,
    slice_mesh,
)
from .molien import (
    MolienCoefficients,
    TorusRep,
    expand_closed_form,
    quadrature_coefficients,
    residue_consistency_report,
)
from .counting import generator_vector_field, invariant_dimension, su3_invariant_dimension
from .sampling import SamplerConfig, random_density, random_unitary
from .su3 import (
    bloch_to_density,
    density_to_bloch,
    eigenvalues,
    gell_mann,
    structure_constants,
)
from .verify import RunReport, run_verification

__version__ = "0.1.0"

__all__ = [
    "C3Relation",
    "GlobalInvariants",
    "LocalInvariantPoint",
    "LocalInvariants",
    "MembershipVerdict",
    "MolienCoefficients",
    "RunReport",
    "SamplerConfig",
    "SliceMesh",
    "TorusRep",
    "bloch_to_density",
    "casimir_relation_check",
    "casimirs",
    "density_to_bloch",
    "det_grad_local",
    "eigenvalues",
    "expand_closed_form",
    "fit_c3_relation",
    "fit_grad_entry",
    "gell_mann",
    "generator_vector_field",
    "grad_local_closed",
    "grad_su3_closed",
    "in_global_orbit_space",
    "in_local_orbit_space",
    "invariant_dimension",
    "is_physical_bloch",
    "key_points",
    "local_invariants",
    "local_point",
    "numeric_grad",
    "quadrature_coefficients",
    "random_density",
    "random_unitary",
    "residue_consistency_report",
    "run_verification",
    "sigma_surfaces",
    "slice_mesh",
    "structure_constants",
    "su3_invariant_dimension",
    "trace_coordinates",
]
