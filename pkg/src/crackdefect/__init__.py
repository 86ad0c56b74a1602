"""Mode III interfacial crack SIF and its perturbation by small line defects."""

from .errors import DomainError, QuadratureError, UnsupportedLoadError
from .model import (
    Bimaterial,
    Defect,
    DefectKind,
    DipoleMatrix,
    Face,
    LoadSystem,
    PointForce,
    TractionProfile,
    dipole_matrix,
    make_bimaterial,
    three_point_load,
    two_point_load,
)
from .field import (
    Sif0Result,
    assemble_B,
    far_field_gradient,
    gradient_of_force,
    sif_point_force,
    sif_total,
    sif_tractions,
)
from .perturbation import (
    Classification,
    DeltaKResult,
    delta_k,
    delta_k_multi,
    g_function,
    weight_vector_c,
)
from .approx import (
    ComparisonRow,
    error_sweep,
    homogeneous_ratio,
    simplified_ratio,
    three_point_ratio,
)
from .regionmap import (
    BoundaryCurve,
    DefectTemplate,
    ExportPaths,
    MapGrid,
    classify_values,
    compute_map,
    export_map,
    extract_boundary,
)

__version__ = "0.1.0"
