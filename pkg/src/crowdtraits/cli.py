"""Command-line entry point: ``crowdtraits <subcommand> ...``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import shutil
import sys
import tempfile
from pathlib import Path

import jsonschema

from . import reports
from .analysis import ROI, VideoSummary, correlate_summaries, density_long_rows, density_series, long_format_csv
from .features import ProxemicsConfig
from .groups import GroupRuleConfig
from .pipeline import AnalysisConfig, analyze_scene
from .synth import SCENARIO_KINDS, ScenarioSpec, generate
from .trajectory_io import TrajectoryError, estimate_homography, load_dataset, parse_correspondences, save_dataset

log = logging.getLogger("crowdtraits")


class CliError(Exception):
    pass


def _roi(text: str) -> ROI:
    try:
        x0, y0, w, h = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("ROI must be x0,y0,width,height") from None
    try:
        return ROI(x0, y0, w, h)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_scene_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", type=Path, help="trajectory CSV (person_id,frame,x,y)")
    p.add_argument("--meta", type=Path, help="metadata sidecar JSON (default: <input>.json if present)")
    p.add_argument("--homography", type=Path, help="correspondence CSV (img_x,img_y,world_x,world_y)")
    p.add_argument("--ocean-mode", choices=("normalized", "literal"), default="normalized")
    p.add_argument("--emotion-mode", choices=("discrete", "weighted"), default="discrete")
    p.add_argument("--roi", type=_roi, help="x0,y0,width,height in meters")
    p.add_argument("--d-hall", type=float, default=3.6)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=0.3)
    p.add_argument("--w1", type=float, default=1.0)
    p.add_argument("--w2", type=float, default=1.0)
    p.add_argument("--group-distance", type=float, default=1.2)
    p.add_argument("--group-orientation", type=float, default=15.0)
    p.add_argument("--group-speed-fraction", type=float, default=0.05)
    p.add_argument("--group-min-fraction", type=float, default=0.5)
    p.add_argument("--cone", type=float, default=30.0, help="front-neighbor cone half-angle, degrees")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crowdtraits", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="run the full pipeline and write all reports")
    _add_scene_args(p)
    p.add_argument("--out", type=Path, required=True, help="output directory")
    p.add_argument("--plot-csv", action="store_true", help="also write plot.csv (series,label,x,y)")

    for name, help_ in (("groups", "detected groups as JSON"), ("ocean", "OCEAN scores as JSON"),
                        ("emotion", "emotion scores as JSON"), ("distance", "preferred front distance as JSON")):
        p = sub.add_parser(name, help=help_)
        _add_scene_args(p)
        p.add_argument("--out", type=Path, help="output file (default: stdout)")

    p = sub.add_parser("correlate", help="Pearson correlation of two summary files")
    p.add_argument("summary_a", type=Path)
    p.add_argument("summary_b", type=Path)
    p.add_argument("--out", type=Path)

    p = sub.add_parser("density", help="density table from several summary files")
    p.add_argument("summaries", type=Path, nargs="+")
    p.add_argument("--out", type=Path, help="table CSV (default: stdout)")
    p.add_argument("--long", type=Path, help="plot-ready long-format CSV")

    p = sub.add_parser("synth", help="generate a synthetic trajectory dataset")
    p.add_argument("--kind", choices=SCENARIO_KINDS, required=True)
    p.add_argument("--n", type=int, default=15)
    p.add_argument("--spacing", type=float, default=1.0)
    p.add_argument("--speed", type=float, default=0.04)
    p.add_argument("--frames", type=int, default=100)
    p.add_argument("--wanderers", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, required=True, help="output CSV; sidecar written as <out>.json")
    return parser


def config_from_args(args) -> AnalysisConfig:
    try:
        return AnalysisConfig(
            proxemics=ProxemicsConfig(args.d_hall, args.gamma, args.beta, args.w1, args.w2),
            group_rules=GroupRuleConfig(args.group_distance, args.group_orientation, args.group_speed_fraction),
            ocean_mode=args.ocean_mode,
            emotion_mode=args.emotion_mode,
            roi=args.roi,
            group_min_fraction=args.group_min_fraction,
            front_cone_half_angle=args.cone,
        )
    except ValueError as exc:
        raise CliError(str(exc)) from None


def run_scene(args):
    if not args.input.is_file():
        raise CliError(f"{args.input}: no such file")
    config = config_from_args(args)
    try:
        dataset = load_dataset(args.input, args.meta)
        homography = None
        if args.homography is not None:
            homography = estimate_homography(parse_correspondences(args.homography.read_bytes()))
    except OSError as exc:
        raise CliError(f"{exc.filename}: {exc.strerror}") from None
    except TrajectoryError as exc:
        raise CliError(f"{args.input}: {exc}") from None
    result = analyze_scene(dataset, config, homography)
    if not result.ocean.per_person:
        raise CliError(f"{args.input}: no person has enough samples to analyze")
    return result


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def cmd_analyze(args) -> None:
    result = run_scene(args)
    artifacts = {
        "features.csv": reports.features_csv(result),
        "groups.json": _checked(reports.groups_report(result), reports.GROUPS_SCHEMA),
        "ocean.json": _checked(reports.ocean_report(result), reports.OCEAN_SCHEMA),
        "emotions.json": _checked(reports.emotions_report(result), reports.EMOTIONS_SCHEMA),
        "summary.json": _checked(reports.summary_report(result), reports.SUMMARY_SCHEMA),
    }
    if args.plot_csv:
        rows = density_long_rows(density_series([result.summary]))
        artifacts["plot.csv"] = long_format_csv(rows)
    write_atomically(args.out, artifacts)
    log.info("wrote %d files to %s", len(artifacts), args.out)


def _checked(report: dict, schema: dict) -> str:
    reports.validate(report, schema)
    return reports.dumps(report)


def write_atomically(out_dir: Path, artifacts: dict[str, str]) -> None:
    """Stage every file in a temp dir, then move them in; nothing is left behind on failure."""
    created = not out_dir.exists()
    out_dir.mkdir(parents=True, exist_ok=True)
    staging = Path(tempfile.mkdtemp(prefix=".staging-", dir=out_dir))
    moved = []
    try:
        for name, text in artifacts.items():
            (staging / name).write_text(text, encoding="utf-8")
        for name in artifacts:
            os.replace(staging / name, out_dir / name)
            moved.append(out_dir / name)
    except BaseException:
        for path in moved:
            path.unlink(missing_ok=True)
        shutil.rmtree(staging, ignore_errors=True)
        if created:
            shutil.rmtree(out_dir, ignore_errors=True)
        raise
    shutil.rmtree(staging, ignore_errors=True)


def cmd_single(args) -> None:
    result = run_scene(args)
    builders = {
        "groups": (reports.groups_report, reports.GROUPS_SCHEMA),
        "ocean": (reports.ocean_report, reports.OCEAN_SCHEMA),
        "emotion": (reports.emotions_report, reports.EMOTIONS_SCHEMA),
        "distance": (reports.distance_report, reports.DISTANCE_SCHEMA),
    }
    build, schema = builders[args.command]
    _emit(_checked(build(result), schema), args.out)


def load_summary(path: Path) -> VideoSummary:
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON ({exc})") from None
    body = doc.get("summary", doc) if isinstance(doc, dict) else doc
    try:
        jsonschema.validate(body, reports.SUMMARY_BODY)
    except jsonschema.ValidationError as exc:
        raise CliError(f"{path}: not a summary file ({exc.message})") from None
    return VideoSummary.from_dict(body)


def cmd_correlate(args) -> None:
    a, b = load_summary(args.summary_a), load_summary(args.summary_b)
    report = {"schema_version": reports.SCHEMA_VERSION, "a": a.label, "b": b.label, **correlate_summaries(a, b)}
    for key in ("ocean", "emotion"):
        if not report[key]["defined"]:
            log.warning("%s correlation undefined (zero variance)", key)
    _emit(_checked(report, reports.CORRELATION_SCHEMA), args.out)


def cmd_density(args) -> None:
    rows = density_series([load_summary(p) for p in args.summaries])
    if not rows:
        raise CliError("no summaries given")
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    _emit(buf.getvalue(), args.out)
    if args.long is not None:
        args.long.write_text(long_format_csv(density_long_rows(rows)), encoding="utf-8")


def cmd_synth(args) -> None:
    try:
        spec = ScenarioSpec(kind=args.kind, n=args.n, spacing=args.spacing, speed=args.speed, frames=args.frames,
                            seed=args.seed, wanderers=args.wanderers)
        dataset = generate(spec)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    save_dataset(dataset, args.out)


COMMANDS = {
    "analyze": cmd_analyze,
    "groups": cmd_single,
    "ocean": cmd_single,
    "emotion": cmd_single,
    "distance": cmd_single,
    "correlate": cmd_correlate,
    "density": cmd_density,
    "synth": cmd_synth,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        COMMANDS[args.command](args)
    except CliError as exc:
        print(f"crowdtraits {args.command}: error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, jsonschema.ValidationError) as exc:
        print(f"crowdtraits {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
