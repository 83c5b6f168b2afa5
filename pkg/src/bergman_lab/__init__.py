"""Bergman kernels under proper holomorphic maps: R_II, the tetrablock and the
symmetrized bidisc."""

__version__ = "0.1.0"

from ._core import BACKEND
from .errors import (
    BergmanLabError,
    CriticalValue,
    NonFinite,
    NonMember,
    NotInRange,
    OutOfRange,
    PoleError,
)
from .geometry import SymPoint, TetraPoint, is_member, opnorm, sample_uniform
from .kernels import (
    VolumeConstant,
    bell_pushforward,
    kernel_rii,
    kernel_tetrablock_closed,
    rii_volume,
)
from .operators import Poly

__all__ = [
    "BACKEND", "BergmanLabError", "CriticalValue", "NonFinite", "NonMember", "NotInRange",
    "OutOfRange", "PoleError", "Poly", "SymPoint", "TetraPoint", "VolumeConstant",
    "bell_pushforward", "is_member", "kernel_rii", "kernel_tetrablock_closed", "opnorm",
    "rii_volume", "sample_uniform",
]
