"""Numerical verification of sharp constants in Hardy inequalities with remainder terms."""

from .constants import ConstantRecord, all_constants
from .errors import HardylabError
from .measure import LorentzIndex, StepProfile
from .radial import Domain, RadialProfile
from .report import VerificationReport
from .special import spectral_constants
from .symmetrize import FieldSample, SymmetrizationResult, symmetrize

__all__ = [
    "ConstantRecord",
    "Domain",
    "FieldSample",
    "HardylabError",
    "LorentzIndex",
    "RadialProfile",
    "StepProfile",
    "SymmetrizationResult",
    "VerificationReport",
    "all_constants",
    "spectral_constants",
    "symmetrize",
]
__version__ = "0.1.0"
