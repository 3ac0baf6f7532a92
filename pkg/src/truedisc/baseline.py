"""Brute-force closed-testing discovery p-matrix with Simes local tests.

Entry (r, j) is the p-value for the claim "at least j true discoveries
among the r hypotheses with the smallest p-values": the maximum Simes
p-value over every hypothesis subset that intersects that rejection set in
at least r - j + 1 points.  The enumeration walks all 2^K - 1 nonempty
subsets, so a hard K <= 20 guard applies; this is a desk-scale comparison
tool, not a shortcut implementation.
"""

from __future__ import annotations

import math
from typing import Iterable

from .dm import PMatrix
from .errors import SizeGuardError, ValidationError

MAX_BRUTE_FORCE_K = 20


def _validate_pvalues(values: Iterable[float]) -> tuple[float, ...]:
    ps = tuple(float(v) for v in values)
    if not ps:
        raise ValidationError("need at least one p-value")
    for v in ps:
        if math.isnan(v) or not 0.0 <= v <= 1.0:
            raise ValidationError(f"p-values must be in [0,1], got {v!r}")
    return ps


def simes_p(pvalues: Iterable[float]) -> float:
    """Simes combination: min over ranks i of m * p_(i) / i, capped at 1."""
    ps = _validate_pvalues(pvalues)
    m = len(ps)
    best = min(m * p / i for i, p in enumerate(sorted(ps), start=1))
    return min(1.0, best)


def closed_testing_pmatrix(pvalues: Iterable[float]) -> PMatrix:
    """Discovery p-matrix by full subset enumeration.

    Rejection sets are the r smallest p-values with ties broken by original
    index.  For each subset J the Simes p-value is pushed into every cell
    (r, j) whose witness condition |J intersect R_r| >= r - j + 1 it meets.
    """
    ps = _validate_pvalues(pvalues)
    k = len(ps)
    if k > MAX_BRUTE_FORCE_K:
        raise SizeGuardError(
            f"closed-testing enumeration walks 2^K subsets and is limited to "
            f"K <= {MAX_BRUTE_FORCE_K}, got K = {k}"
        )
    order = sorted(range(k), key=lambda i: (ps[i], i))
    p_sorted = [ps[i] for i in order]

    # best[r][m]: largest Simes value among subsets meeting R_r in exactly m points
    best = [[0.0] * (r + 1) for r in range(k + 1)]
    for mask in range(1, 1 << k):
        pos = []
        mm = mask
        while mm:
            low = mm & -mm
            pos.append(low.bit_length() - 1)
            mm ^= low
        size = len(pos)
        sval = min(size * p_sorted[t] / i for i, t in enumerate(pos, start=1))
        if sval > 1.0:
            sval = 1.0
        count = 0
        ptr = 0
        for r in range(1, k + 1):
            if ptr < size and pos[ptr] == r - 1:
                count += 1
                ptr += 1
            row = best[r]
            if sval > row[count]:
                row[count] = sval

    rows = []
    for r in range(1, k + 1):
        suffix = [0.0] * (r + 2)
        for m in range(r, 0, -1):
            suffix[m] = max(best[r][m], suffix[m + 1])
        rows.append(tuple(suffix[r - j + 1] for j in range(1, r + 1)))
    return PMatrix(rows=tuple(rows))
