"""Shared numeric helpers: compensated sums, log-space values, thread resolution."""

import math
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

THREADS_ENV_VAR = "MTL_THREADS"

# exp overflows float64 just above this
_EXP_MAX = 709.0


def compensated_sum(values: Iterable[float]) -> float:
    """Sum floats without accumulation error (Shewchuk exact summation)."""
    return math.fsum(values)


def compensated_dot(a, b) -> float:
    """Exactly-rounded sum of elementwise products of two equal-length sequences."""
    return math.fsum(x * y for x, y in zip(a, b, strict=True))


@lru_cache(maxsize=None)
def log_factorial(n: int) -> float:
    """log(n!) by exact summation of log k; stable for any n that fits in memory."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return math.fsum(math.log(k) for k in range(2, n + 1))


@dataclass(frozen=True)
class LogReal:
    """A non-negative real held as its natural log, so huge magnitudes stay finite.

    `value` materializes the float (inf past the float64 range); `log` is the
    primary representation. log = -inf encodes an exact zero.
    """

    log: float

    @property
    def value(self) -> float:
        if self.log == -math.inf:
            return 0.0
        if self.log > _EXP_MAX:
            return math.inf
        return math.exp(self.log)

    def __float__(self) -> float:
        return self.value

    def ratio_to(self, other: "LogReal") -> float:
        """self / other evaluated in log space."""
        return math.exp(self.log - other.log)


def resolve_threads(threads: int | None = None) -> int:
    """Worker count: explicit argument, else MTL_THREADS, else 1."""
    if threads is not None:
        if threads < 1:
            raise ValueError("threads must be >= 1")
        return threads
    env = os.environ.get(THREADS_ENV_VAR)
    if env:
        try:
            val = int(env)
        except ValueError:
            raise ValueError(f"{THREADS_ENV_VAR} must be an integer, got {env!r}") from None
        if val < 1:
            raise ValueError(f"{THREADS_ENV_VAR} must be >= 1")
        return val
    return 1
