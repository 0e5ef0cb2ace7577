"""Determinant statistics of random skew-symmetric sign matrices.

Matrices are n x n with +-1 entries above the diagonal and the negated
transpose below.  Two diagonal conventions are supported: "zero" (strictly
skew-symmetric; even n gives det = Pf^2 >= 0, odd n gives det = 0) and "unit"
(skew-type, A + A^T = 2I).  All determinants and accumulated statistics are
exact integers: values grow like n^(n/2), past what float LU can represent
faithfully, and the mean identities checked downstream are exact.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .numutil import LogReal, log_factorial, resolve_threads

ENUM_LIMIT = 8
MC_CHUNK = 4096

_CONVENTIONS = ("zero", "unit")


@dataclass(frozen=True)
class SkewSignMatrix:
    """Sign assignment for the strict upper triangle, row-major order."""

    n: int
    upper: tuple[int, ...]
    convention: str = "zero"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        m = self.n * (self.n - 1) // 2
        if len(self.upper) != m:
            raise ValueError(f"expected {m} upper-triangle signs, got {len(self.upper)}")
        if any(s not in (-1, 1) for s in self.upper):
            raise ValueError("upper-triangle entries must be +1 or -1")
        if self.convention not in _CONVENTIONS:
            raise ValueError(f"convention must be one of {_CONVENTIONS}")

    @classmethod
    def from_bits(cls, n: int, bits: int, convention: str = "zero") -> "SkewSignMatrix":
        """Bit i of `bits` = 1 means +1 in the i-th upper-triangle slot."""
        m = n * (n - 1) // 2
        upper = tuple(1 if (bits >> i) & 1 else -1 for i in range(m))
        return cls(n, upper, convention)

    def to_rows(self) -> list[list[int]]:
        n = self.n
        rows = [[0] * n for _ in range(n)]
        if self.convention == "unit":
            for i in range(n):
                rows[i][i] = 1
        k = 0
        for i in range(n):
            for j in range(i + 1, n):
                s = self.upper[k]
                rows[i][j] = s
                rows[j][i] = -s
                k += 1
        return rows

    def flip(self, index: int) -> "SkewSignMatrix":
        """Copy with the sign at one upper-triangle slot negated."""
        upper = list(self.upper)
        upper[index] = -upper[index]
        return SkewSignMatrix(self.n, tuple(upper), self.convention)


def _bareiss(rows: list[list[int]]) -> int:
    """Fraction-free elimination; every division below is exact."""
    a = [row[:] for row in rows]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            aik = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - aik * row_k[j]) // prev
        prev = pivot
    return sign * a[n - 1][n - 1]


def det_exact(matrix: SkewSignMatrix) -> int:
    """Exact integer determinant (Bareiss elimination)."""
    return _bareiss(matrix.to_rows())


def pfaffian_exact(matrix: SkewSignMatrix) -> int:
    """Exact Pfaffian by expansion along the first row; zero-diagonal only.

    Cost grows like (n-1)!! so keep n small (<= 12 or so); used as the
    independent cross-check det = Pf^2.
    """
    if matrix.convention != "zero":
        raise ValueError("Pfaffian is defined for the zero-diagonal convention")
    if matrix.n % 2:
        return 0
    rows = matrix.to_rows()

    def pf(active: tuple[int, ...]) -> int:
        if not active:
            return 1
        i0 = active[0]
        total = 0
        sign = 1
        rest = active[1:]
        for pos, j in enumerate(rest):
            sub = rest[:pos] + rest[pos + 1 :]
            total += sign * rows[i0][j] * pf(sub)
            sign = -sign
        return total

    return pf(tuple(range(matrix.n)))


@dataclass(frozen=True)
class DetStats:
    """Exact or sampled moments of |det| over the sign ensemble.

    s1 is the mean of |det|, s2 the quadratic mean sqrt(E det^2).  The integer
    accumulators are exact in both modes; stderr fields are present only for
    Monte Carlo estimates.
    """

    n: int
    mode: str
    convention: str
    count: int
    s1: float
    s2: float
    sum_absdet: int
    sum_det2: int
    max_abs_det: int
    stderr_s1: float | None = None
    stderr_s2: float | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.mode not in ("exact", "monte-carlo"):
            raise ValueError("mode must be 'exact' or 'monte-carlo'")
        # power-mean ordering is unconditional; violation means broken accumulators
        if self.s2 < self.s1 * (1 - 1e-12):
            raise ValueError("s2 < s1 violates the power-mean inequality")

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "mode": self.mode,
            "convention": self.convention,
            "count": self.count,
            "s1": self.s1,
            "s2": self.s2,
            "sum_absdet": str(self.sum_absdet),
            "sum_det2": str(self.sum_det2),
            "max_abs_det": str(self.max_abs_det),
            "stderr_s1": self.stderr_s1,
            "stderr_s2": self.stderr_s2,
            "seed": self.seed,
        }


def enumerate_stats(n: int, convention: str = "zero") -> DetStats:
    """Exact s1, s2 and max over every sign assignment (2^(n(n-1)/2) matrices)."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > ENUM_LIMIT:
        raise ValueError(
            f"enumeration is capped at n = {ENUM_LIMIT} "
            f"(2^{n * (n - 1) // 2} matrices); use mc_stats for larger n"
        )
    m = n * (n - 1) // 2
    count = 1 << m
    sum_abs = 0
    sum_d2 = 0
    max_abs = 0
    for bits in range(count):
        d = det_exact(SkewSignMatrix.from_bits(n, bits, convention))
        ad = abs(d)
        sum_abs += ad
        sum_d2 += d * d
        if ad > max_abs:
            max_abs = ad
    return DetStats(
        n=n,
        mode="exact",
        convention=convention,
        count=count,
        s1=sum_abs / count,
        s2=math.sqrt(sum_d2 / count),
        sum_absdet=sum_abs,
        sum_det2=sum_d2,
        max_abs_det=max_abs,
    )


def _mc_chunk(n: int, seed: int, chunk_index: int, size: int, convention: str):
    """Statistics over one counter-keyed substream; schedule-independent."""
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, chunk_index], dtype=np.uint64)
    rng = np.random.Generator(np.random.Philox(key=key))
    m = n * (n - 1) // 2
    signs = rng.integers(0, 2, size=(size, m), dtype=np.int8) * 2 - 1
    sum_abs = 0
    sum_d2 = 0
    sum_d4 = 0
    max_abs = 0
    for row in signs:
        d = _bareiss(SkewSignMatrix(n, tuple(int(s) for s in row), convention).to_rows())
        ad = abs(d)
        d2 = d * d
        sum_abs += ad
        sum_d2 += d2
        sum_d4 += d2 * d2
        if ad > max_abs:
            max_abs = ad
    return sum_abs, sum_d2, sum_d4, max_abs


def mc_stats(
    n: int,
    samples: int,
    seed: int = 0,
    convention: str = "zero",
    threads: int | None = None,
) -> DetStats:
    """Monte Carlo estimate of s1, s2 from iid uniform sign draws.

    Sampling is split into fixed chunks with per-chunk counter-based
    substreams keyed by (seed, chunk index) and exact integer accumulators,
    so the result is bit-identical for any worker count.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if samples < 100:
        raise ValueError("need at least 100 samples")
    spans = [
        (i, min(MC_CHUNK, samples - start))
        for i, start in enumerate(range(0, samples, MC_CHUNK))
    ]
    n_workers = resolve_threads(threads)
    if n_workers == 1 or len(spans) <= 1:
        parts = [_mc_chunk(n, seed, i, size, convention) for i, size in spans]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            futures = [pool.submit(_mc_chunk, n, seed, i, size, convention) for i, size in spans]
            parts = [f.result() for f in futures]

    sum_abs = sum(p[0] for p in parts)
    sum_d2 = sum(p[1] for p in parts)
    sum_d4 = sum(p[2] for p in parts)
    max_abs = max(p[3] for p in parts)

    N = samples
    m1 = Fraction(sum_abs, N)
    m2 = Fraction(sum_d2, N)
    m4 = Fraction(sum_d4, N)
    s1 = float(m1)
    s2 = math.sqrt(float(m2))
    # unbiased sample variances, computed as exact rationals first
    if N > 1:
        var1 = (m2 - m1 * m1) * N / (N - 1)
        var2 = (m4 - m2 * m2) * N / (N - 1)
        stderr_s1 = math.sqrt(max(float(var1), 0.0) / N)
        se_m2 = math.sqrt(max(float(var2), 0.0) / N)
        stderr_s2 = se_m2 / (2 * s2) if s2 > 0 else 0.0
    else:
        stderr_s1 = stderr_s2 = 0.0

    return DetStats(
        n=n,
        mode="monte-carlo",
        convention=convention,
        count=N,
        s1=s1,
        s2=s2,
        sum_absdet=sum_abs,
        sum_det2=sum_d2,
        max_abs_det=max_abs,
        stderr_s1=stderr_s1,
        stderr_s2=stderr_s2,
        seed=seed,
    )


def szekeres_s1_asym(n: int) -> LogReal:
    """Asymptotic mean of |det|: (8 pi e n)^(-1/4) e^sqrt(n) sqrt(n!)."""
    _require_even(n)
    return LogReal(
        -0.25 * math.log(8 * math.pi * math.e * n)
        + math.sqrt(n)
        + 0.5 * log_factorial(n)
    )


def szekeres_s2_asym(n: int) -> LogReal:
    """Asymptotic quadratic mean: (32 pi e^3)^(-1/2) e^(2 sqrt(n)) sqrt(n!)."""
    _require_even(n)
    return LogReal(
        -0.5 * math.log(32 * math.pi) - 1.5 + 2 * math.sqrt(n) + 0.5 * log_factorial(n)
    )


def _require_even(n: int):
    if n < 2 or n % 2:
        raise ValueError("asymptotic means are for even n >= 2")


def det_existence_bound(n: int) -> LogReal:
    """Guaranteed-achievable |det|: (n/(64 pi e^5))^(1/4) e^sqrt(n) sqrt(n!)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return LogReal(
        0.25 * (math.log(n) - math.log(64 * math.pi) - 5.0)
        + math.sqrt(n)
        + 0.5 * log_factorial(n)
    )


def second_moment_det_bound(stats: DetStats) -> float:
    """Existence bound s2^2 / s1 for the max |det| over the ensemble.

    In exact mode the recorded maximum must already meet it (finite-support
    tail bound); a miss raises, since that can only be an accounting bug.
    """
    if stats.s1 <= 0:
        raise ValueError(
            "s1 = 0 (degenerate ensemble, e.g. odd n with zero diagonal): "
            "no bound available"
        )
    bound = stats.s2**2 / stats.s1
    if stats.mode == "exact" and stats.max_abs_det < bound * (1 - 1e-6):
        raise RuntimeError(
            f"enumerated max {stats.max_abs_det} misses exact bound {bound}"
        )
    return bound


@dataclass(frozen=True)
class SearchResult:
    """Best matrix found by sign-flip hill climbing."""

    matrix: SkewSignMatrix
    abs_det: int
    evaluations: int
    ratio_to_existence_bound: float
    ratio_to_s1_asym: float | None

    def to_json_dict(self) -> dict:
        return {
            "n": self.matrix.n,
            "convention": self.matrix.convention,
            "upper": list(self.matrix.upper),
            "abs_det": str(self.abs_det),
            "evaluations": self.evaluations,
            "ratio_to_existence_bound": self.ratio_to_existence_bound,
            "ratio_to_s1_asym": self.ratio_to_s1_asym,
        }


def search_high_det(
    n: int, budget: int, seed: int = 0, convention: str = "zero"
) -> SearchResult:
    """Random-restart greedy single-flip hill climbing on |det|.

    budget counts determinant evaluations.  The trajectory depends only on
    (n, seed, convention), so the best value is non-decreasing in budget.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if budget < 1:
        raise ValueError("budget must be at least 1")
    m = n * (n - 1) // 2
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, 0], dtype=np.uint64)
    rng = np.random.Generator(np.random.Philox(key=key))

    best: SkewSignMatrix | None = None
    best_det = -1
    evals = 0

    while evals < budget:
        upper = tuple(int(s) for s in rng.integers(0, 2, size=m, dtype=np.int8) * 2 - 1)
        current = SkewSignMatrix(n, upper, convention)
        cur_det = abs(det_exact(current))
        evals += 1
        if cur_det > best_det:
            best_det, best = cur_det, current

        improved = True
        while improved and evals < budget:
            improved = False
            for idx in range(m):
                if evals >= budget:
                    break
                cand = current.flip(idx)
                d = abs(det_exact(cand))
                evals += 1
                if d > best_det:
                    best_det, best = d, cand
                if d > cur_det:
                    current, cur_det = cand, d
                    improved = True
                    break  # first improvement restarts the sweep

    assert best is not None
    bound = det_existence_bound(n)
    ratio_bound = math.exp(math.log(best_det) - bound.log) if best_det > 0 else 0.0
    if n % 2 == 0:
        s1a = szekeres_s1_asym(n)
        ratio_s1 = math.exp(math.log(best_det) - s1a.log) if best_det > 0 else 0.0
    else:
        ratio_s1 = None
    return SearchResult(
        matrix=best,
        abs_det=best_det,
        evaluations=evals,
        ratio_to_existence_bound=ratio_bound,
        ratio_to_s1_asym=ratio_s1,
    )
