"""Hilbert-style proof checking for IL with extension schemata, and proof generators."""
from .generators import MAX_BASIS, ProofBuilder, b_prime_steps, derive_b_prime, derive_z
from .kernel import (
    MAX_TAUT_ATOMS, MP, AtomBudgetError, Ax, Derivation, Hyp, Nec, ProofError, ProofRejected,
    Taut, check_steps, is_hypothesis_free, taut, verify_derivation,
)
from .script import format_script, parse_script

__all__ = [
    "MAX_BASIS", "MAX_TAUT_ATOMS", "MP", "AtomBudgetError", "Ax", "Derivation", "Hyp", "Nec",
    "ProofBuilder", "ProofError", "ProofRejected", "Taut", "b_prime_steps", "check_steps",
    "derive_b_prime", "derive_z", "format_script", "is_hypothesis_free", "parse_script", "taut",
    "verify_derivation",
]
