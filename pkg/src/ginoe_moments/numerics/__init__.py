from .ball import BigReal
from .context import DEFAULT_CONTEXT, PrecisionContext
from .special import (
    double_factorial,
    erf_fn,
    erfc_fn,
    gamma_fn,
    lower_incomplete_gamma,
    upper_incomplete_gamma,
)
