"""Harmonic analysis and exotic structures of 3D elasticity tensors.

Elasticity tensors are stored as symmetric 6x6 Kelvin matrices.  The package
decomposes them into isotropic invariants and harmonic covariants, computes
the symmetry classes of the covariants and of their pairs (the geometric
structure), recognizes the exotic structures above orthotropy and projects
tensors onto a prescribed structure.
"""

__version__ = "0.1.0"

from .catalog import ExoticCatalogEntry, catalog, covariant_groups, find_entry, match_signature
from .clips import (
    ClassSet,
    StructureSignature,
    clips_pair,
    clips_sets,
    derive_space_classes,
    enumerate_structures,
    restricted_clips,
)
from .covariants import (
    EPS_SYM,
    GeometricStructure,
    classify_h2,
    classify_h4,
    d2_covariant,
    geometric_structure,
    is_cubic,
    symmetry_class,
)
from .documents import TensorDocument, dump_report, dump_tensor, parse_tensor
from .errors import (
    AmbiguousClassError,
    ConvergenceError,
    ExotelaError,
    NumericalError,
    SingularTensorError,
    ValidationError,
)
from .exotic import (
    MaterialReport,
    classify_material,
    inversion_stability,
    sample_random,
    young_modulus,
    young_surface,
)
from .groups import ClassedGroup, intersect, intersect_groups
from .harmonic import HarmonicTriplet, convert_scheme, decompose, reconstruct
from .labels import ClassLabel, is_subclass, parse_label
from .normal_forms import normal_form
from .projection import ProjectionResult, nearest_in_structure, project_in_frame
from .tensor import (
    ElasticityTensor,
    invert,
    is_positive_definite,
    isotropic,
    kelvin_rotation,
    random_rotation,
    rotate,
    rotation,
    rotation_from_quaternion,
    spectrum,
)

__all__ = [
    "__version__", "ExoticCatalogEntry", "catalog", "covariant_groups", "find_entry",
    "match_signature", "ClassSet", "StructureSignature", "clips_pair", "clips_sets",
    "derive_space_classes", "enumerate_structures", "restricted_clips", "EPS_SYM",
    "GeometricStructure", "classify_h2", "classify_h4", "d2_covariant",
    "geometric_structure", "is_cubic", "symmetry_class", "TensorDocument",
    "dump_report", "dump_tensor", "parse_tensor", "AmbiguousClassError",
    "ConvergenceError", "ExotelaError", "NumericalError", "SingularTensorError",
    "ValidationError", "MaterialReport", "classify_material", "inversion_stability",
    "sample_random", "young_modulus", "young_surface", "ClassedGroup", "intersect",
    "intersect_groups", "HarmonicTriplet", "convert_scheme", "decompose", "reconstruct",
    "ClassLabel", "is_subclass", "parse_label", "normal_form", "ProjectionResult",
    "nearest_in_structure", "project_in_frame", "ElasticityTensor", "invert",
    "is_positive_definite", "isotropic", "kelvin_rotation", "random_rotation", "rotate",
    "rotation", "rotation_from_quaternion", "spectrum",
]
