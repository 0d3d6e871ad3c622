"""Generalized Grover search where both reflections act on several states.

The Grover reflection inverts an ``N``-dimensional source subspace and the
Oracle inverts ``M`` target basis states. The package provides the exact pair
spectrum of ``H = P_S + P_T``, continuous and gate-based evolution, and a
phase-estimation search that needs no Grover iteration.
"""
from .dynamics import (
    EvolutionTrace,
    evolve,
    grover_iterate,
    optimal_iterations,
    optimal_time,
    target_probability_trace,
)
from .experiments import (
    FitResult,
    ScalingRecord,
    fit_alpha,
    resource_table,
    scaling_study,
    spectrum_statistics,
)
from .instance import (
    SearchInstance,
    build_hamiltonian,
    grover_reflect,
    hadamard_sources,
    load_instance,
    make_instance,
    oracle_apply,
    random_orthonormal_sources,
    save_instance,
)
from .numerics import TOL, EigenDecomposition, hermitian_eig, orthonormalize, target_projection_norm
from .qpe import (
    QpeConfig,
    QpeResult,
    qpe_collapse,
    qpe_distribution,
    qpp_apply,
    register_size,
    runtime_estimate,
    search,
)
from .structure import (
    BlockDecomposition,
    PairMode,
    PairSpectrum,
    block_decompose,
    ideal_initial_state,
    pair_eigenvectors,
    pair_spectrum,
    verify_identities,
)

__version__ = "0.1.0"
