"""Entangled photon-pair emission from an F=1 -> F'=1 atom in a two-mode cavity."""

from ._core import (
    DomainError,
    IntegrationError,
    Params,
    check,
    clebsch_gordan,
    effective_hamiltonian,
    fidelity_epr,
    hamiltonian,
    hilbert_dim,
    interference_check,
    lindblad_rhs,
    paper_params,
    params_from_config,
    run,
    solve_polynomial,
    stage1_polynomial,
    stage2_polynomial,
    stage3_polynomial,
    sweep,
)

__all__ = [
    "DomainError",
    "IntegrationError",
    "Params",
    "check",
    "clebsch_gordan",
    "effective_hamiltonian",
    "fidelity_epr",
    "hamiltonian",
    "hilbert_dim",
    "interference_check",
    "lindblad_rhs",
    "paper_params",
    "params_from_config",
    "run",
    "solve_polynomial",
    "stage1_polynomial",
    "stage2_polynomial",
    "stage3_polynomial",
    "sweep",
]
