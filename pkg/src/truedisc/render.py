"""Serialization and SVG heatmaps for triangular matrices.

CSV format: a `r,j,value` header, then one line per defined cell, r
ascending and j ascending within r, floats in shortest round-trip decimal
with +inf written as `inf`.

SVG output is a deterministic SVG 1.1 subset made of rect elements only:
one square per cell at column j, row r (r grows downward), plus an optional
band legend drawn as a column of swatches.  Identical inputs give
byte-identical text.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import Union

from .dm import DiscoveryMatrix, PMatrix
from .errors import ValidationError

Matrix = Union[DiscoveryMatrix, PMatrix]


@dataclass(frozen=True)
class Band:
    name: str
    color: str


@dataclass(frozen=True)
class ColorScale:
    """Ordered thresholds plus one band per bucket, in ascending numeric order.

    kind "jeffreys-e" buckets e-values with left-closed intervals (an entry
    exactly at a threshold lands in the stronger bucket above it); kind
    "fisher-p" buckets p-values with right-closed intervals (a p-value
    exactly at a threshold keeps the stronger bucket below it).
    """

    kind: str
    thresholds: tuple[float, ...]
    bands: tuple[Band, ...]

    def __post_init__(self):
        if self.kind not in ("jeffreys-e", "fisher-p"):
            raise ValidationError(f"unknown scale kind {self.kind!r}")
        if len(self.bands) != len(self.thresholds) + 1:
            raise ValidationError("need exactly one band more than thresholds")
        if any(a >= b for a, b in zip(self.thresholds, self.thresholds[1:])):
            raise ValidationError("thresholds must be strictly increasing")

    def strength(self, band_index: int) -> int:
        """Evidence rank of a band, higher meaning stronger: e-bands ascend
        with the value, p-bands descend."""
        if self.kind == "jeffreys-e":
            return band_index
        return len(self.bands) - 1 - band_index


JEFFREYS_E = ColorScale(
    kind="jeffreys-e",
    thresholds=(1.0, math.sqrt(10.0), 10.0, 10.0 ** 1.5, 100.0),
    bands=(
        Band("no_evidence", "#006400"),
        Band("poor", "#2E8B57"),
        Band("substantial", "#FFD700"),
        Band("strong", "#FF4500"),
        Band("very_strong", "#8B0000"),
        Band("decisive", "#000000"),
    ),
)

FISHER_P = ColorScale(
    kind="fisher-p",
    thresholds=(0.001, 0.005, 0.01, 0.05),
    bands=(
        Band("decisive", "#000000"),
        Band("very_significant", "#8B0000"),
        Band("highly_significant", "#FF4500"),
        Band("significant", "#FFD700"),
        Band("not_significant", "#2E8B57"),
    ),
)

SCALES = {"jeffreys": JEFFREYS_E, "fisher": FISHER_P}


def classify(value: float, scale: ColorScale) -> int:
    """Bucket index of a value on the scale (0 = numerically lowest bucket)."""
    v = float(value)
    if math.isnan(v):
        raise ValidationError("cannot classify NaN")
    if scale.kind == "jeffreys-e":
        if v < 0.0:
            raise ValidationError(f"e-scale values must be >= 0, got {value!r}")
        return bisect_right(scale.thresholds, v)
    if not 0.0 <= v <= 1.0:
        raise ValidationError(f"p-scale values must be in [0,1], got {value!r}")
    return bisect_left(scale.thresholds, v)


def _check_kind(matrix: Matrix, scale: ColorScale) -> None:
    if scale.kind == "jeffreys-e" and not isinstance(matrix, DiscoveryMatrix):
        raise ValidationError("the jeffreys-e scale renders e-value matrices only")
    if scale.kind == "fisher-p" and not isinstance(matrix, PMatrix):
        raise ValidationError("the fisher-p scale renders p-value matrices only")


def matrix_to_csv(matrix: Matrix) -> str:
    lines = ["r,j,value"]
    for r, row in enumerate(matrix.rows, start=1):
        for j, v in enumerate(row, start=1):
            lines.append(f"{r},{j},{v!r}")
    return "\n".join(lines) + "\n"


def rows_from_csv(text: str) -> tuple[tuple[float, ...], ...]:
    """Parse the triangular CSV back into row tuples; the triangle must be
    complete and free of duplicates."""
    lines = text.splitlines()
    if not lines or lines[0] != "r,j,value":
        raise ValidationError("matrix CSV must start with the header 'r,j,value'")
    cells: dict[tuple[int, int], float] = {}
    for ln, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise ValidationError(f"line {ln}: expected 'r,j,value', got {line!r}")
        try:
            r, j, v = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError as exc:
            raise ValidationError(f"line {ln}: {exc}") from exc
        if math.isnan(v):
            raise ValidationError(f"line {ln}: NaN entries are not allowed")
        if not 1 <= j <= r:
            raise ValidationError(f"line {ln}: cell ({r},{j}) outside the lower triangle")
        if (r, j) in cells:
            raise ValidationError(f"line {ln}: duplicate cell ({r},{j})")
        cells[(r, j)] = v
    if not cells:
        raise ValidationError("matrix CSV has no data rows")
    k = max(r for r, _ in cells)
    if len(cells) != k * (k + 1) // 2:
        raise ValidationError(f"matrix CSV is missing cells for K = {k}")
    return tuple(tuple(cells[(r, j)] for j in range(1, r + 1)) for r in range(1, k + 1))


def ematrix_from_csv(text: str) -> DiscoveryMatrix:
    return DiscoveryMatrix(rows=rows_from_csv(text))


def pmatrix_from_csv(text: str) -> PMatrix:
    return PMatrix(rows=rows_from_csv(text))


@dataclass(frozen=True)
class RenderSpec:
    """Pixel geometry of the heatmap; the legend is a column of band
    swatches to the right of the triangle."""

    cell_size: int = 4
    margin: int = 10
    legend: bool = True

    _SWATCH: int = field(default=12, init=False, repr=False)
    _GAP: int = field(default=4, init=False, repr=False)

    def __post_init__(self):
        if self.cell_size < 1 or self.margin < 0:
            raise ValidationError("cell_size must be >= 1 and margin >= 0")


def matrix_to_svg(matrix: Matrix, scale: ColorScale, spec: RenderSpec = RenderSpec()) -> str:
    """Deterministic heatmap of the triangle on the given scale."""
    _check_kind(matrix, scale)
    k = matrix.K
    cell = spec.cell_size
    margin = spec.margin
    grid = k * cell
    width = margin + grid + margin
    height = margin + grid + margin
    if spec.legend:
        legend_x = margin + grid + margin
        width = legend_x + spec._SWATCH + margin
        legend_h = len(scale.bands) * (spec._SWATCH + spec._GAP) - spec._GAP
        height = max(height, margin + legend_h + margin)
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    ]
    for r, row in enumerate(matrix.rows, start=1):
        y = margin + (r - 1) * cell
        for j, v in enumerate(row, start=1):
            x = margin + (j - 1) * cell
            color = scale.bands[classify(v, scale)].color
            lines.append(
                f'<rect x="{x}" y="{y}" width="{cell}" height="{cell}" fill="{color}"/>'
            )
    if spec.legend:
        for b, band in enumerate(scale.bands):
            y = margin + b * (spec._SWATCH + spec._GAP)
            lines.append(
                f'<rect x="{legend_x}" y="{y}" width="{spec._SWATCH}" '
                f'height="{spec._SWATCH}" fill="{band.color}"/>'
            )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ComparisonReport:
    """Band census of two same-shape matrices plus how often the second one
    lands in a strictly stronger or weaker band than the first."""

    kind: str
    K: int
    cells: int
    counts_a: tuple[int, ...]
    counts_b: tuple[int, ...]
    band_names: tuple[str, ...]
    b_stronger: int
    b_weaker: int

    def to_text(self) -> str:
        lines = [f"kind={self.kind}", f"k={self.K}", f"cells={self.cells}"]
        for name, c in zip(self.band_names, self.counts_a):
            lines.append(f"a.{name}={c}")
        for name, c in zip(self.band_names, self.counts_b):
            lines.append(f"b.{name}={c}")
        lines.append(f"b_stronger={self.b_stronger}")
        lines.append(f"b_weaker={self.b_weaker}")
        lines.append(f"equal={self.cells - self.b_stronger - self.b_weaker}")
        return "\n".join(lines) + "\n"

    def count(self, which: str, band_name: str) -> int:
        counts = self.counts_a if which == "a" else self.counts_b
        return counts[self.band_names.index(band_name)]


def compare_report(a: Matrix, b: Matrix, scale: ColorScale) -> ComparisonReport:
    """Per-band cell counts for both matrices and the strictly
    stronger/weaker tally of b against a, cell by cell."""
    _check_kind(a, scale)
    _check_kind(b, scale)
    if a.K != b.K:
        raise ValidationError(f"matrix sizes differ: {a.K} vs {b.K}")
    counts_a = [0] * len(scale.bands)
    counts_b = [0] * len(scale.bands)
    stronger = weaker = cells = 0
    for row_a, row_b in zip(a.rows, b.rows):
        for va, vb in zip(row_a, row_b):
            ba = classify(va, scale)
            bb = classify(vb, scale)
            counts_a[ba] += 1
            counts_b[bb] += 1
            sa, sb = scale.strength(ba), scale.strength(bb)
            if sb > sa:
                stronger += 1
            elif sb < sa:
                weaker += 1
            cells += 1
    return ComparisonReport(
        kind=scale.kind,
        K=a.K,
        cells=cells,
        counts_a=tuple(counts_a),
        counts_b=tuple(counts_b),
        band_names=tuple(band.name for band in scale.bands),
        b_stronger=stronger,
        b_weaker=weaker,
    )
