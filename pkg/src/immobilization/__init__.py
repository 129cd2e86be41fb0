"""Immobilization of n-simplices by point contacts.

Decide whether n+1 contact points, one per face, immobilize a simplex in R^n;
build immobilizing contact sets; and cross-check verdicts against a direct
evaluation of the penetration function on rotations.
"""

from .contacts import (
    ContactSet,
    PenetrationMatrix,
    Verdict,
    contacts_from_barycentric,
    contacts_from_points,
    immobilizes,
    is_almost_positive_definite,
    penetration_matrix,
    spectral_link_check,
    stochastic_spectrum_bound,
)
from .errors import *  # noqa: F401,F403
from .geometry import (
    FanValidity,
    FanVerdict,
    NormalFan,
    Simplex,
    face_volume,
    make_simplex,
    normals_from_vertices,
    rescale_fan,
    validate_normal_fan,
    vertices_from_normals,
)
from .oracle import (
    OracleConfig,
    OracleReport,
    OracleVerdict,
    RigidMotion,
    SkewGenerator,
    equalizing_translation,
    falsify,
    phi,
    psi,
    translation_penetration,
)
from .synthesis import (
    CentredWitness,
    DisplacementBasis,
    apply_displacement,
    centred_contacts,
    centred_feasible_witness,
    centroid_contacts,
    displacement_basis,
    displacement_space_rank,
    symmetry_projection_coords,
)
from .tolerances import Tolerances

__version__ = "0.1.0"
