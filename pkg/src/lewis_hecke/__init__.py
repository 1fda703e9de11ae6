"""Exact and numerical tools for the Lewis equation on Gamma_0(n): coset
indices, chains and their dual solution, Hecke operators on period
functions, and truncated transfer-operator spectra."""

from .core import FormalSum, IntMat2, I, M, Q, T
from .partitions import mcfe, minimal_partition
from .cosets import CosetIndex, canonicalize, enumerate_cosets
from .chains import psi_of, verify_lewis_system
from .hecke import decompose, kappa_tilde, tn_set, ttilde_set
from .transfer import build, spectrum, selberg_zeta

__version__ = "0.1.0"

__all__ = [
    "FormalSum", "IntMat2", "I", "M", "Q", "T",
    "mcfe", "minimal_partition",
    "CosetIndex", "canonicalize", "enumerate_cosets",
    "psi_of", "verify_lewis_system",
    "decompose", "kappa_tilde", "tn_set", "ttilde_set",
    "build", "spectrum", "selberg_zeta",
]
