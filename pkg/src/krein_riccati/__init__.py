"""Hermitian solutions of ``A^*X + XA + XBX - C = 0`` via invariant
subspaces of the Hamiltonian matrix ``T = [[A, B], [C, -A^*]]``."""
from .config import DEFAULT, Tolerances
from .dense import eig, schur
from .errors import KreinRiccatiError
from .hamiltonian import HamiltonianMatrix, assemble, check_j1_skew, check_j2_accretive
from .krein import classify, gram, j1, j2
from .models import (
    ModalModel,
    gen_cubic_modal,
    gen_example_diag,
    gen_fourier_transport,
    random_hamiltonian,
)
from .riccati import (
    RiccatiSolution,
    brute_force_solutions,
    canonical_pair,
    certify_order,
    extract_graph,
    projection_representation,
    solution_for,
)
from .spectral import SpectralData, analyze_spectrum
from .subspaces import build_subspace, enumerate_scsets

__version__ = "0.1.0"
