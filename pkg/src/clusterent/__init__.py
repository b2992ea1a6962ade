"""Closest separable states and relative entropy of entanglement for pure and
thermal cluster states on bipartite qubit graphs."""

from ._kernels import backend
from .divergence import (
    GradientCertificate,
    directional_gradient,
    gradient_scan,
    ree_pure_cluster,
    relative_entropy,
)
from .graphs import (
    PauliString,
    QubitGraph,
    ThermalParams,
    chain,
    cluster_state,
    gibbs_state,
    hamiltonian,
    lattice,
    make_graph,
    stabilizers,
    thermal_state,
)
from .separable import (
    BlochProduct,
    MixedBasisFrame,
    closest_separable_pure,
    factorization_check,
    max_product_overlap,
    operational_construction,
    overlap_surface,
    to_mixed_basis,
    verify_product_eigenbasis,
)
from .tensor_core import DensityOp, Ket, partial_transpose
from .thermal import (
    OMEGA_C,
    critical_omega_2qubit,
    critical_temperature,
    lambda_star,
    ppt_report,
    thermal_entanglement_curve,
)

__version__ = "0.1.0"
