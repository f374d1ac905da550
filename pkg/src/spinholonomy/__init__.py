"""Wilczek-Zee holonomies of anticoherent spin planes under rotation curves.

Submodules:

``spin_core``   spin matrices, rotations, Wigner D, Clebsch-Gordan, polarization tensors
``grassmann``   k-planes, principal angles, anticoherence and symmetry checks
``holonomy``    connection, path-ordered exponential, holonomy, transport oracle
``stellar``     Majorana constellations, Pluecker multiplets, symmetry search
``gates_lab``   plane/curve catalog, gate extraction, perturbation sweeps
``cli``         command-line front end
"""
from .errors import (
    DegeneracyError,
    DegenerateInputError,
    DegenerateOverlapError,
    DomainError,
    RefinementRequiredError,
)
from .gates_lab import (
    catalog,
    catalog_entry,
    compare_gate,
    concatenate_curves,
    extract_gate,
    invariance_sweep,
    perturb_curve,
    rotation_curve,
)
from .grassmann import (
    KPlane,
    anticoherence,
    is_symmetry_rotation,
    plane_distance,
    plane_from_kets,
    principal_angles,
    rotate_plane,
)
from .holonomy import (
    FrameCurve,
    Holonomy,
    abelian_geometric_phase,
    frame_curve_from_rotations,
    parallel_transport_oracle,
    path_ordered_exponential,
    polar_part,
    wz_holonomy,
)
from .spin_core import (
    Rotation,
    RotationCurve,
    SpinQuantum,
    clebsch_gordan,
    polarization_tensor,
    spin_operators,
    wigner_D,
)
from .stellar import (
    Constellation,
    ContinuousAxis,
    majorana_constellation,
    multiconstellation,
    plane_symmetries,
    plucker_coordinates,
)

__version__ = "0.1.0"

__all__ = [
    "DegeneracyError",
    "DegenerateInputError",
    "DegenerateOverlapError",
    "DomainError",
    "RefinementRequiredError",
    "catalog",
    "catalog_entry",
    "compare_gate",
    "concatenate_curves",
    "extract_gate",
    "invariance_sweep",
    "perturb_curve",
    "rotation_curve",
    "KPlane",
    "anticoherence",
    "is_symmetry_rotation",
    "plane_distance",
    "plane_from_kets",
    "principal_angles",
    "rotate_plane",
    "FrameCurve",
    "Holonomy",
    "abelian_geometric_phase",
    "frame_curve_from_rotations",
    "parallel_transport_oracle",
    "path_ordered_exponential",
    "polar_part",
    "wz_holonomy",
    "Rotation",
    "RotationCurve",
    "SpinQuantum",
    "clebsch_gordan",
    "polarization_tensor",
    "spin_operators",
    "wigner_D",
    "Constellation",
    "ContinuousAxis",
    "majorana_constellation",
    "multiconstellation",
    "plane_symmetries",
    "plucker_coordinates",
]
