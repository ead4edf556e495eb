from __future__ import annotations

from dataclasses import dataclass, replace

import mpmath


@dataclass(frozen=True)
class PrecisionContext:
    """Binary precision requested by the caller plus working guard bits.

    Results are only claimed to ``target_bits``; arithmetic runs at
    ``target_bits + guard_bits``.
    """

    target_bits: int = 128
    guard_bits: int = 64

    def __post_init__(self):
        if self.target_bits < 32 or self.guard_bits < 32:
            raise ValueError("target_bits and guard_bits must both be >= 32")

    @property
    def working_bits(self) -> int:
        return self.target_bits + self.guard_bits

    def working(self):
        return mpmath.workprec(self.working_bits)

    def with_guard(self, guard_bits: int) -> PrecisionContext:
        return replace(self, guard_bits=guard_bits)

    def extended(self, extra_bits: int) -> PrecisionContext:
        return replace(self, guard_bits=self.guard_bits + int(extra_bits))

    def doubled(self) -> PrecisionContext:
        return replace(self, target_bits=2 * self.target_bits)

    @property
    def target_eps(self) -> mpmath.mpf:
        return mpmath.ldexp(1, -self.target_bits)


DEFAULT_CONTEXT = PrecisionContext()
