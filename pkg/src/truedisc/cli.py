"""Command-line pipeline: simulate -> dm -> calibrate / baseline -> render / compare.

The interchange formats are plain CSV: the study file has header
`index,x,e,p,is_null` (index 1-based, is_null 0/1) and matrix files use the
triangular `r,j,value` layout.  Every subcommand builds its whole output in
memory before touching the output path, so no partial artifact is ever
written.

Exit codes: 0 success, 2 usage, 3 validation, 4 size guard.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass

from .baseline import closed_testing_pmatrix
from .dm import (
    DiscoveryMatrix,
    calibrate_matrix,
    discovery_matrix_fast,
    discovery_matrix_reference,
    sort_evalues,
)
from .errors import SizeGuardError, ValidationError
from .render import (
    SCALES,
    RenderSpec,
    compare_report,
    ematrix_from_csv,
    matrix_to_csv,
    matrix_to_svg,
    pmatrix_from_csv,
)
from .sim import SimConfig, SimOutput, generate_study

MAX_REFERENCE_K = 60

STUDY_HEADER = "index,x,e,p,is_null"


def study_to_csv(out: SimOutput) -> str:
    lines = [STUDY_HEADER]
    for i, (x, e, p, null) in enumerate(zip(out.x, out.e, out.p, out.is_null), start=1):
        lines.append(f"{i},{x!r},{e!r},{p!r},{int(null)}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class StudyColumns:
    x: tuple[float, ...]
    e: tuple[float, ...]
    p: tuple[float, ...]
    is_null: tuple[bool, ...]


def study_from_csv(text: str) -> StudyColumns:
    lines = text.splitlines()
    if not lines or lines[0] != STUDY_HEADER:
        raise ValidationError(f"study CSV must start with the header {STUDY_HEADER!r}")
    xs, es, ps, nulls = [], [], [], []
    for ln, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 5:
            raise ValidationError(f"line {ln}: expected 5 fields, got {len(parts)}")
        try:
            idx = int(parts[0])
            x, e, p = float(parts[1]), float(parts[2]), float(parts[3])
        except ValueError as exc:
            raise ValidationError(f"line {ln}: {exc}") from exc
        if idx != len(xs) + 1:
            raise ValidationError(f"line {ln}: expected index {len(xs) + 1}, got {idx}")
        if parts[4] not in ("0", "1"):
            raise ValidationError(f"line {ln}: is_null must be 0 or 1, got {parts[4]!r}")
        if math.isnan(e) or e < 0.0:
            raise ValidationError(f"line {ln}: e must be a nonnegative number")
        if math.isnan(p) or not 0.0 <= p <= 1.0:
            raise ValidationError(f"line {ln}: p must be in [0,1]")
        xs.append(x)
        es.append(e)
        ps.append(p)
        nulls.append(parts[4] == "1")
    if not xs:
        raise ValidationError("study CSV has no data rows")
    return StudyColumns(x=tuple(xs), e=tuple(es), p=tuple(ps), is_null=tuple(nulls))


def _parse_stat(text: str) -> int:
    if text == "u1":
        return 1
    if text == "u2":
        return 2
    if text.startswith("uN:"):
        try:
            n = int(text[3:])
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad statistic {text!r}; use u1, u2 or uN:<n>")
        if n < 1:
            raise argparse.ArgumentTypeError(f"statistic order must be >= 1, got {n}")
        return n
    raise argparse.ArgumentTypeError(f"bad statistic {text!r}; use u1, u2 or uN:<n>")


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc


def _write(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ValidationError(f"cannot write {path}: {exc}") from exc


def _cmd_simulate(args) -> int:
    cfg = SimConfig(K=args.K, n_false=args.n_false, alt_mean=args.alt_mean, seed=args.seed)
    _write(args.out, study_to_csv(generate_study(cfg)))
    return 0


def _cmd_dm(args) -> int:
    study = study_from_csv(_read(args.input))
    sorted_e = sort_evalues(study.e)
    if args.engine == "reference":
        if len(sorted_e.values) > MAX_REFERENCE_K:
            raise SizeGuardError(
                f"the reference engine re-merges every candidate from scratch and is "
                f"limited to K <= {MAX_REFERENCE_K}, got K = {len(sorted_e.values)}"
            )
        dm = discovery_matrix_reference(sorted_e, args.stat)
    else:
        dm = discovery_matrix_fast(sorted_e, args.stat, threads=args.threads)
    _write(args.out, matrix_to_csv(dm))
    return 0


def _cmd_calibrate(args) -> int:
    dm = ematrix_from_csv(_read(args.input))
    _write(args.out, matrix_to_csv(calibrate_matrix(dm)))
    return 0


def _cmd_baseline(args) -> int:
    study = study_from_csv(_read(args.input))
    _write(args.out, matrix_to_csv(closed_testing_pmatrix(study.p)))
    return 0


def _load_for_scale(path: str, scale_name: str):
    text = _read(path)
    if scale_name == "jeffreys":
        return ematrix_from_csv(text)
    return pmatrix_from_csv(text)


def _cmd_render(args) -> int:
    matrix = _load_for_scale(args.input, args.scale)
    svg = matrix_to_svg(matrix, SCALES[args.scale], RenderSpec())
    _write(args.out, svg)
    return 0


def _cmd_compare(args) -> int:
    a = _load_for_scale(args.a, args.scale)
    b = _load_for_scale(args.b, args.scale)
    report = compare_report(a, b, SCALES[args.scale])
    _write(args.report, report.to_text())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="truedisc",
        description="Discovery matrices from independent e-values",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a seeded Gaussian study CSV")
    p.add_argument("--K", type=int, required=True, help="number of hypotheses")
    p.add_argument("--false", dest="n_false", type=int, required=True,
                   help="how many hypotheses are false (observations from the alternative)")
    p.add_argument("--alt-mean", type=float, default=-3.0, help="alternative mean (default -3)")
    p.add_argument("--seed", type=int, default=1, help="64-bit seed (default 1)")
    p.add_argument("--out", required=True, help="output study CSV path")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("dm", help="build the discovery matrix from a study CSV")
    p.add_argument("--input", required=True, help="study CSV (uses the e column)")
    p.add_argument("--stat", type=_parse_stat, default=2,
                   help="merging statistic: u1, u2 or uN:<n> (default u2)")
    p.add_argument("--engine", choices=("fast", "reference"), default="fast")
    p.add_argument("--threads", type=int, default=1,
                   help="parallelism cap; the output never depends on it")
    p.add_argument("--out", required=True, help="output matrix CSV path")
    p.set_defaults(func=_cmd_dm)

    p = sub.add_parser("calibrate", help="e-to-p calibrate a matrix CSV entrywise")
    p.add_argument("--input", required=True, help="e-value matrix CSV")
    p.add_argument("--out", required=True, help="output p-matrix CSV path")
    p.set_defaults(func=_cmd_calibrate)

    p = sub.add_parser("baseline", help="closed-testing/Simes p-matrix from a study CSV")
    p.add_argument("--input", required=True, help="study CSV (uses the p column)")
    p.add_argument("--out", required=True, help="output p-matrix CSV path")
    p.set_defaults(func=_cmd_baseline)

    p = sub.add_parser("render", help="render a matrix CSV as an SVG heatmap")
    p.add_argument("--input", required=True, help="matrix CSV")
    p.add_argument("--scale", choices=("jeffreys", "fisher"), required=True)
    p.add_argument("--out", required=True, help="output SVG path")
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("compare", help="band census comparison of two matrix CSVs")
    p.add_argument("--a", required=True, help="first matrix CSV")
    p.add_argument("--b", required=True, help="second matrix CSV")
    p.add_argument("--scale", choices=("jeffreys", "fisher"), required=True)
    p.add_argument("--report", required=True, help="output report path")
    p.set_defaults(func=_cmd_compare)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except SizeGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


def run() -> None:  # console-script entry point
    sys.exit(main())


if __name__ == "__main__":
    run()
