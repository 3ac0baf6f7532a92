"""Lower-triangular discovery matrices built from sorted e-values.

Entry (r, j) is an e-value for the claim "rejecting the r hypotheses with
the largest e-values yields at least j true discoveries".  It is the
minimum, over every prefix extension i = 0..K-r, of the order-n merge of
the block e_{K-r+1}..e_{K-j+1} together with the i smallest e-values.

Two builders produce identical matrices (within float tolerance): a literal
transcription that re-merges every candidate from scratch, kept as a slow
cross-check, and an incremental one that reuses running elementary
symmetric polynomials for an O(n K^3) total.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import ValidationError
from .merge import binomial, e_to_p, u_statistic, validate_evalues


@dataclass(frozen=True)
class SortedEValues:
    """E-values in ascending order plus the permutation back to input order:
    ``perm[i]`` is the original (0-based) index of sorted element i."""

    values: tuple[float, ...]
    perm: tuple[int, ...]


def sort_evalues(values: Iterable[float]) -> SortedEValues:
    """Stable ascending sort; ties keep their original relative order."""
    e = validate_evalues(values)
    perm = tuple(sorted(range(len(e)), key=e.__getitem__))
    return SortedEValues(values=tuple(e[i] for i in perm), perm=perm)


class _Triangular:
    """Shared shape checks and 1-based access for lower-triangular matrices."""

    rows: tuple[tuple[float, ...], ...]

    @property
    def K(self) -> int:
        return len(self.rows)

    def entry(self, r: int, j: int) -> float:
        if not (1 <= r <= len(self.rows)):
            raise IndexError(f"row index {r} outside 1..{len(self.rows)}")
        if not (1 <= j <= r):
            raise IndexError(f"column index {j} outside 1..{r}")
        return self.rows[r - 1][j - 1]

    def _check_shape(self) -> None:
        if not self.rows:
            raise ValidationError("matrix must have at least one row")
        for r, row in enumerate(self.rows, start=1):
            if len(row) != r:
                raise ValidationError(
                    f"row {r} must have exactly {r} entries, got {len(row)}"
                )


@dataclass(frozen=True)
class DiscoveryMatrix(_Triangular):
    """Triangle of merged e-values; ``order`` is the statistic order used to
    build it (None when the matrix was parsed from a file)."""

    rows: tuple[tuple[float, ...], ...]
    order: Optional[int] = None

    def __post_init__(self):
        self._check_shape()
        for row in self.rows:
            for v in row:
                if not v >= 0.0:  # catches NaN and negatives at once
                    raise ValidationError(f"matrix entries must be >= 0, got {v!r}")


@dataclass(frozen=True)
class PMatrix(_Triangular):
    """Triangle of p-values in [0, 1]."""

    rows: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        self._check_shape()
        for row in self.rows:
            for v in row:
                if not 0.0 <= v <= 1.0:
                    raise ValidationError(f"p-matrix entries must be in [0,1], got {v!r}")


def discovery_matrix_reference(sorted_e: SortedEValues, order: int) -> DiscoveryMatrix:
    """Literal minimum-over-prefix-extensions construction.

    Every candidate multiset is merged from scratch, so the cost grows like
    K^4 per order; intended for small K as the oracle against the fast
    builder, not for production runs.
    """
    e = sorted_e.values
    k = len(e)
    rows = []
    for r in range(1, k + 1):
        row = []
        for j in range(1, r + 1):
            block = e[k - r: k - j + 1]
            best = u_statistic(block, order)
            for i in range(1, k - r + 1):
                cand = u_statistic(block + e[:i], order)
                if cand < best:
                    best = cand
            row.append(best)
        rows.append(tuple(row))
    return DiscoveryMatrix(rows=tuple(rows), order=int(order))


def _row_u1(e: tuple[float, ...], r: int) -> tuple[float, ...]:
    k = len(e)
    prefix = k - r
    seed_sum = 0.0
    out = []
    for j in range(r, 0, -1):
        seed_sum += e[k - j]
        m = r - j + 1
        running = seed_sum
        count = m
        best = running / count
        for t in range(prefix):
            running += e[t]
            count += 1
            val = running / count
            if val < best:
                best = val
        out.append(best)
    out.reverse()
    return tuple(out)


def _row_u2(e: tuple[float, ...], r: int, binoms: list[float]) -> tuple[float, ...]:
    k = len(e)
    prefix = k - r
    s1 = 0.0  # E_1 of the seed block
    s2 = 0.0  # E_2 of the seed block
    out = []
    for j in range(r, 0, -1):
        v = e[k - j]
        if v != 0.0 and s1 != 0.0:
            s2 += v * s1
        s1 += v
        m = r - j + 1
        r1, r2 = s1, s2
        count = m
        best = r1 if count < 2 else r2 / binoms[count]
        for t in range(prefix):
            w = e[t]
            if w != 0.0 and r1 != 0.0:
                r2 += w * r1
            r1 += w
            count += 1
            val = r1 if count < 2 else r2 / binoms[count]
            if val < best:
                best = val
        out.append(best)
    out.reverse()
    return tuple(out)


def _row_generic(e: tuple[float, ...], r: int, n: int, binoms: list[float]) -> tuple[float, ...]:
    k = len(e)
    prefix = k - r
    seed = [0.0] * (n + 1)
    seed[0] = 1.0
    out = []
    for j in range(r, 0, -1):
        v = e[k - j]
        m = r - j + 1
        if v != 0.0:
            for i in range(min(n, m), 0, -1):
                prev = seed[i - 1]
                if prev != 0.0:
                    seed[i] += v * prev
        run = list(seed)
        count = m
        best = run[count] if count < n else run[n] / binoms[count]
        for t in range(prefix):
            w = e[t]
            if w != 0.0:
                for i in range(min(n, count + 1), 0, -1):
                    prev = run[i - 1]
                    if prev != 0.0:
                        run[i] += w * prev
            count += 1
            val = run[count] if count < n else run[n] / binoms[count]
            if val < best:
                best = val
        out.append(best)
    out.reverse()
    return tuple(out)


def discovery_matrix_fast(
    sorted_e: SortedEValues, order: int, threads: int = 1
) -> DiscoveryMatrix:
    """Incremental builder: each cell seeds a running accumulator with its
    block and scans the prefix once, updating the elementary symmetric
    polynomials in O(order) per step.

    Rows are independent, so ``threads`` > 1 spreads them over a thread
    pool; every row is self-contained sequential arithmetic, making the
    output bit-identical for any thread count.
    """
    if int(order) != order or int(order) < 1:
        raise ValidationError(f"order must be a positive integer, got {order!r}")
    n = int(order)
    if int(threads) < 1:
        raise ValidationError(f"threads must be >= 1, got {threads!r}")
    e = sorted_e.values
    k = len(e)
    binoms = [binomial(m, n) for m in range(k + 1)]

    if n == 1:
        def build(r: int) -> tuple[float, ...]:
            return _row_u1(e, r)
    elif n == 2:
        def build(r: int) -> tuple[float, ...]:
            return _row_u2(e, r, binoms)
    else:
        def build(r: int) -> tuple[float, ...]:
            return _row_generic(e, r, n, binoms)

    if threads == 1 or k == 1:
        rows = tuple(build(r) for r in range(1, k + 1))
    else:
        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            rows = tuple(pool.map(build, range(1, k + 1)))
    return DiscoveryMatrix(rows=rows, order=n)


def calibrate_matrix(dm: DiscoveryMatrix) -> PMatrix:
    """Entrywise e-to-p calibration min(1, 1/e) of a discovery matrix."""
    return PMatrix(rows=tuple(tuple(e_to_p(v) for v in row) for row in dm.rows))
