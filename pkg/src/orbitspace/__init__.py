"""Explicit orbit-space maps for complexity-one torus actions and their checks."""
from .algebra import (
    Octonion,
    OctonionAutomorphism,
    Quaternion,
    TorusElement,
    oct_mul,
    sigma_apply,
    sigma_matrix,
)
from .homology import (
    ChainComplex,
    HomologyResult,
    antipodal_quotient_check,
    build_hp2_gkm,
    homology_polytope_check,
    hp2_skeleton_census,
    smith_normal_form,
)
from .matrices import (
    DoubledSpherePoint,
    dim_formulas,
    gram,
    polar,
    psd_sqrt_part,
    quotient_Yn1n_On,
    quotient_Ynn_SOn,
)
from .model_spaces import (
    Polygon,
    QTCharPair,
    QuoricFunctor,
    WeightSet,
    enumerate_quoric,
    general_position_check,
    h_vector,
    quoric_weights,
)
from .orbit_maps import (
    QuotientPoint,
    cp2_conj_to_s4,
    hopf,
    hp2_to_s5,
    s3_biaxial_quotient,
    s3_conj_circle_quotient,
    s3s3_diag_circle_quotient,
    s3s3_t3_quotient,
    s4_invol_quotient,
    s6_to_s4,
    stratify_hp2,
    torus_invol_quotient,
)

__version__ = "0.1.0"
