"""Ergodicity and mixing of finite-dimensional quantum channels and Lindblad semigroups."""

from .channels import (
    Channel,
    adjoint,
    apply,
    compose,
    convex_combine,
    gallery,
    identity,
    is_unital,
    power,
    random_channel,
    random_unitary_channel,
    validate,
)
from .lindblad import (
    LindbladGenerator,
    evolve,
    from_channel,
    reduce_to_channel,
    semigroup_ergodic,
)
from .operators import DEFAULT_TOL, Tolerances
from .spectral import SpectralReport, Verdict, classify, fixed_space, spectrum

__version__ = "0.1.0"

__all__ = [
    "Channel", "adjoint", "apply", "compose", "convex_combine", "gallery", "identity",
    "is_unital", "power", "random_channel", "random_unitary_channel", "validate",
    "LindbladGenerator", "evolve", "from_channel", "reduce_to_channel", "semigroup_ergodic",
    "DEFAULT_TOL", "Tolerances", "SpectralReport", "Verdict", "classify", "fixed_space",
    "spectrum",
]
