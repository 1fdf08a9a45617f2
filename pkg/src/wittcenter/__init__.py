"""Witt vectors, Weyl algebras mod p^n, and the center of differential operators."""

from ._kernels import get_backend, set_backend
from .center import (
    CenterInvariantError,
    bracket0,
    canonical_lift,
    center_kernel,
    center_ring,
    chi,
    phi_image_submodule,
    phi_odd,
    pi_form,
    serre_map,
    symplectic_form,
)
from .poisson2 import chi2, hamiltonian_field, phi_even, restricted_square
from .poly import MultiPoly, PolyRing
from .ring import GF, ZZ, ModInt, ModRing, binomial, pdiv
from .suites import SUITES, RunConfig, run, run_suite
from .weyl import WeylElement, commutator, format_weyl, is_central, parse_weyl, weyl_mul, weyl_pow
from .witt import WittVector, ghost, parse_witt, psi, teichmuller, verschiebung, witt_add, witt_mul

__version__ = "0.1.0"

__all__ = [
    "CenterInvariantError",
    "GF",
    "ModInt",
    "ModRing",
    "MultiPoly",
    "PolyRing",
    "RunConfig",
    "SUITES",
    "WeylElement",
    "WittVector",
    "ZZ",
    "binomial",
    "bracket0",
    "canonical_lift",
    "center_kernel",
    "center_ring",
    "chi",
    "chi2",
    "commutator",
    "format_weyl",
    "get_backend",
    "ghost",
    "hamiltonian_field",
    "is_central",
    "parse_weyl",
    "parse_witt",
    "pdiv",
    "phi_even",
    "phi_image_submodule",
    "phi_odd",
    "pi_form",
    "psi",
    "restricted_square",
    "run",
    "run_suite",
    "serre_map",
    "set_backend",
    "symplectic_form",
    "teichmuller",
    "verschiebung",
    "weyl_mul",
    "weyl_pow",
    "witt_add",
    "witt_mul",
]
