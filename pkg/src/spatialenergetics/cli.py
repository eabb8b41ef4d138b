"""Command-line front end.

Subcommands
-----------
matrices   write the velocity coupling matrices of a pattern order
beam       report Q, k, K and a sampled profile for a beam
simulate   Monte-Carlo estimate for a scene seen through a beam
predict    closed-form diffuseness / DOA-bias sweep over (DDR, angle)
estimate   energetic estimate of an existing frame file

Exit codes: 0 success, 2 validation error, 3 numeric/degenerate error,
4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .beams import directivity_factor, k_magnitude_axisym
from .coupling import velocity_coupling_matrices
from .energetics import DEFAULT_CONSTANTS
from .errors import DegenerateError, SpatialEnergeticsError, ValidationError
from .reference import diffuseness_surface, doa_bias
from .scene_sim import GENERATOR, FrameSet, frameset_moments, run_experiment, synthesize
from .energetics import statistical_energetics
from .schemas import load_beam, load_constants, load_scene, load_sweep, parse_json_text

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


def _read_json(path, what):
    return parse_json_text(Path(path).read_text(encoding="utf-8"), what)


def _emit(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _dumps(obj):
    return json.dumps(obj, indent=2) + "\n"


def parse_beam_arg(spec, order=None):
    """Beam from ``preset:name[@theta,phi]`` (radians) or a beam JSON file."""
    if spec.startswith("preset:"):
        body = spec[len("preset:"):]
        name, _, steer = body.partition("@")
        data = {"kind": name}
        if order is not None:
            data["order"] = order
        if steer:
            try:
                theta, phi = (float(x) for x in steer.split(","))
            except ValueError as exc:
                raise ValidationError(f"bad steering '{steer}', expected THETA,PHI") from exc
            data["steer"] = {"theta": theta, "phi": phi}
        return load_beam(data)
    return load_beam(_read_json(spec, "beam file"))


def _constants(args):
    if getattr(args, "constants", None):
        return load_constants(_read_json(args.constants, "constants file"))
    return DEFAULT_CONSTANTS


def cmd_matrices(args):
    mats = velocity_coupling_matrices(args.order)
    _emit(mats.to_json() + "\n", args.out)
    return EXIT_OK


def beam_report(beam, samples=19):
    """Q, k, K and a sampled profile table for a beam."""
    report = {
        "order": beam.order,
        "Q": directivity_factor(beam.w),
        "k": [float(x) for x in beam.k_vector()],
        "K": None,
        "pattern": [],
    }
    if beam.profile is not None:
        report["K"] = k_magnitude_axisym(beam.profile)
        alphas = np.linspace(0.0, 180.0, samples)
        values = beam.profile.value(np.radians(alphas))
        report["pattern"] = [{"alpha_deg": float(a), "value": float(v)} for a, v in zip(alphas, values)]
    if beam.steer_dir is not None:
        report["steer"] = {"theta": beam.steer_dir.theta, "phi": beam.steer_dir.phi}
    return report


def cmd_beam(args):
    beam = parse_beam_arg(args.beam, args.order)
    _emit(_dumps(beam_report(beam, args.samples)), args.out)
    return EXIT_OK


def _estimate_doc(estimate, extra):
    doc = estimate.to_dict()
    doc["frames"] = estimate.moments.frames
    doc.update(extra)
    return doc


def cmd_simulate(args):
    beam = parse_beam_arg(args.beam, args.order)
    scene = load_scene(_read_json(args.scene, "scene file"), default_order=beam.order + 1)
    scene = scene.with_overrides(frames=args.frames, seed=args.seed)
    consts = _constants(args)
    estimate = run_experiment(scene, beam, consts, workers=args.workers)
    meta = {"meta": {"seed": scene.seed, "generator": GENERATOR, "order": scene.order}}
    _emit(_dumps(_estimate_doc(estimate, meta)), args.out)
    if args.dump_frames:
        frames = synthesize(scene, workers=args.workers)
        path = Path(args.dump_frames)
        if path.suffix == ".shf":
            path.write_bytes(frames.to_shf())
        else:
            path.write_text(frames.to_json(), encoding="utf-8")
    return EXIT_OK


def cmd_estimate(args):
    beam = parse_beam_arg(args.beam, args.order)
    path = Path(args.input)
    if path.suffix == ".shf":
        frames = FrameSet.from_shf(path.read_bytes())
    else:
        frames = FrameSet.from_json(path.read_text(encoding="utf-8"))
    estimate = statistical_energetics(frameset_moments(frames, beam), _constants(args))
    meta = {"meta": {"generator": frames.generator, "order": frames.order}}
    _emit(_dumps(_estimate_doc(estimate, meta)), args.out)
    return EXIT_OK


def _csv_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ValidationError(f"bad number list '{text}'") from exc


def prediction_rows(profile, gammas, alphas_deg):
    rows = []
    for gamma in gammas:
        for alpha_deg in alphas_deg:
            alpha = math.radians(alpha_deg)
            psi = diffuseness_surface(gamma, alpha, profile)
            try:
                bias = math.degrees(doa_bias(gamma, alpha, profile))
            except DegenerateError:
                bias = float("nan")
            rows.append({"gamma": gamma, "alpha_deg": alpha_deg, "diffuseness": psi, "bias_deg": bias})
    return rows


def cmd_predict(args):
    beam = parse_beam_arg(args.beam, args.order)
    if beam.profile is None:
        raise ValidationError("predict needs an axisymmetric beam")
    if args.sweep:
        sweep = load_sweep(_read_json(args.sweep, "sweep file"))
    else:
        sweep = load_sweep({"gamma": _csv_list(args.gamma), "alpha_deg": _csv_list(args.alpha_deg)})
    rows = prediction_rows(beam.profile, sweep.gamma, sweep.alpha_deg)
    if args.format == "json":
        # JSON has no NaN/inf literals
        clean = [{k: (v if math.isfinite(v) else repr(v)) for k, v in r.items()} for r in rows]
        _emit(_dumps({"rows": clean}), args.out)
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=["gamma", "alpha_deg", "diffuseness", "bias_deg"], lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow({k: repr(float(v)) for k, v in r.items()})
        _emit(buf.getvalue(), args.out)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="spatialenergetics", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_beam(p, required=True):
        p.add_argument("--beam", required=required, help="beam JSON file or preset:NAME[@THETA,PHI] (radians)")
        p.add_argument("--order", type=int, default=None, help="pattern order (hypercardioid presets)")

    p = sub.add_parser("matrices", help="write coupling matrices as JSON")
    p.add_argument("--order", type=int, required=True, help="pattern order N")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_matrices)

    p = sub.add_parser("beam", help="report directivity factor, k vector and K")
    add_beam(p)
    p.add_argument("--samples", type=int, default=19, help="profile samples over 0..180 deg")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_beam)

    p = sub.add_parser("simulate", help="Monte-Carlo estimate of a scene")
    add_beam(p)
    p.add_argument("--scene", required=True)
    p.add_argument("--frames", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--constants", default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--dump-frames", default=None, help="also write frames (.json or .shf)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("predict", help="closed-form (gamma, alpha) sweep")
    add_beam(p)
    p.add_argument("--sweep", default=None, help="JSON {gamma: [...], alpha_deg: [...]}")
    p.add_argument("--gamma", default="0,0.25,1,4")
    p.add_argument("--alpha-deg", default="0,45,90,135,180")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("estimate", help="estimate from a frame file")
    add_beam(p)
    p.add_argument("--input", required=True, help="frames as .json or .shf")
    p.add_argument("--constants", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_estimate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    for flag in ("frames", "seed"):
        value = getattr(args, flag, None)
        if value is not None and value < (1 if flag == "frames" else 0):
            print(f"error: --{flag} out of range", file=sys.stderr)
            return EXIT_VALIDATION
    try:
        return args.func(args)
    except DegenerateError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (SpatialEnergeticsError, ValueError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
