"""Classical DLCQ simulator of the 1+1D light-front Yukawa model."""

__version__ = "0.1.0"

from .encoding import (
    Delta,
    QubitBudget,
    apply_delta,
    enumerate_deltas,
    index_from_tuple,
    measure_occupation,
    qubit_count,
    qubit_count_qcd,
    tuple_from_index,
)
from .errors import (
    ConvergenceError,
    DegenerateTruncationError,
    InfeasibleSeedError,
    ResourceLimitError,
)
from .fock import (
    Basis,
    FockState,
    charge,
    enumerate_basis,
    format_state,
    is_angel_state,
    max_distinct_parts,
    momentum,
    parse_state,
    partition_count,
)
from .hamiltonian import (
    InertiaTriple,
    ModelParams,
    SparseMatrix,
    apply_hamiltonian,
    bracket,
    build_mass_matrix,
    inertia_bounds,
    mass_matrix_components,
    matrix_element_HS1,
    max_abs_element,
    self_induced_inertias,
    sparsity,
    sparsity_bounds,
)
from .observables import PdfTable, invariant_mass_free, pdf, qmax2, truncate_state
from .spectrum import (
    EigenResult,
    RenormTarget,
    lambda_to_g,
    lowest_eigenpairs,
    renormalize,
    spectrum_scan,
)

__all__ = [
    "Basis", "FockState", "charge", "momentum", "enumerate_basis",
    "partition_count", "max_distinct_parts", "is_angel_state",
    "format_state", "parse_state",
    "ModelParams", "InertiaTriple", "SparseMatrix", "bracket",
    "self_induced_inertias", "inertia_bounds", "apply_hamiltonian",
    "build_mass_matrix", "mass_matrix_components", "sparsity",
    "sparsity_bounds", "max_abs_element", "matrix_element_HS1",
    "EigenResult", "RenormTarget", "lowest_eigenpairs", "renormalize",
    "spectrum_scan", "lambda_to_g",
    "PdfTable", "pdf", "invariant_mass_free", "qmax2", "truncate_state",
    "Delta", "QubitBudget", "enumerate_deltas", "apply_delta",
    "tuple_from_index", "index_from_tuple", "qubit_count", "qubit_count_qcd",
    "measure_occupation",
    "ResourceLimitError", "ConvergenceError", "InfeasibleSeedError",
    "DegenerateTruncationError",
]
