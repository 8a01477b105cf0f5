"""Deviatoric decomposition, Maxwell multipoles and anisotropy classification of 3D tensors."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .harmonic import (
    HarmonicDecomposition,
    HomogeneousPolynomial,
    generate_polynomial,
    harmonic_decompose,
    symmetric_from_polynomial,
)
from .multipole import (
    DeviatorPolynomial,
    MultipoleForm,
    deviator_poly_coeffs,
    multipoles,
    roots_to_multipoles,
    solve_roots,
)
from .second_order import (
    EigenMultipoleCase,
    SecondOrderDecomposition,
    classify_eigen_multipole,
    decompose2,
    multipole_angle,
    multipoles_from_eigen,
)
from .spectral import (
    EigenSystem3,
    EigentensorSystem,
    eigen_sym3,
    eigentensors,
    kelvin_map,
    kelvin_unmap,
    tensor_to_voigt,
    voigt_to_tensor,
)
from .stiffness import (
    StiffnessDecomposition,
    decompose_stiffness,
    isotropic_stiffness,
    phi,
    phi_inverse,
    reconstruct_stiffness,
    split_sym_asym,
    youngs_modulus,
)
from .symmetry import (
    SymmetryClass,
    SymmetryPlaneSet,
    classify_stiffness,
    planes_of_deviator2,
    planes_of_deviator4,
)
from .tensor import (
    contract_double,
    contract_single,
    determinant,
    outer_product,
    rotate,
    symmetrize,
    trace,
    traceless_symmetric_part,
)
