"""Finite-field weights, their PGL2 correlation spectra, and twisted sums of Hecke eigenforms."""

__version__ = "0.1.0"

from .fp import InvalidInput, PrimeContext, prime_context
from .weights import WeightTable, dft, weight_from_descriptor
from .correlation import PglElement, classify_exceptional, corr_sum, spectrum, verify_sec16
from .modular import build_V, delta_coefficients, exponent_scan, twisted_sum
from .resonance import ResonanceInstance, resonance_check
from .orbits import discrepancy_report, twisted_measure, untwisted_measure
from .kernels import BACKEND

__all__ = [
    "__version__", "BACKEND", "InvalidInput", "PrimeContext", "prime_context",
    "WeightTable", "dft", "weight_from_descriptor",
    "PglElement", "classify_exceptional", "corr_sum", "spectrum", "verify_sec16",
    "build_V", "delta_coefficients", "exponent_scan", "twisted_sum",
    "ResonanceInstance", "resonance_check",
    "discrepancy_report", "twisted_measure", "untwisted_measure",
]
