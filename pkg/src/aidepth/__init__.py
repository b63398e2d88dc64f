"""Exact algorithmic-information measures for a small reference prefix machine."""
from .dyadic import DyadicRational
from .enumerator import ComplexityTable, Horizon, HorizonError, NotFound, enumerate_programs
from .upm import MACHINE_HASH, assemble, run, run_bits

__all__ = [
    "ComplexityTable",
    "DyadicRational",
    "Horizon",
    "HorizonError",
    "MACHINE_HASH",
    "NotFound",
    "assemble",
    "enumerate_programs",
    "run",
    "run_bits",
]
