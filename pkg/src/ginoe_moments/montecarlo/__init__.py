"""GinOE Monte Carlo: counter-based sampling, real Schur eigenvalues, moment statistics."""
from ._backend import BACKEND
from .sampler import (
    MCConfig,
    MCSummary,
    RealnessMode,
    dump_samples,
    empirical_real_moments,
    empirical_trace_moments,
    real_eigenvalues,
    sample_ginoe,
)

__all__ = [
    "BACKEND",
    "MCConfig",
    "MCSummary",
    "RealnessMode",
    "dump_samples",
    "empirical_real_moments",
    "empirical_trace_moments",
    "real_eigenvalues",
    "sample_ginoe",
]
