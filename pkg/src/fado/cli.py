"""Command-line harness: run, sweep, scene, bounds, and gen subcommands.

Exit codes are a stable contract: 0 on success, 1 on runtime or format
failures (one-line diagnostic on stderr), 2 on usage errors.  Data goes to
the requested files or stdout; logging stays on stderr so outputs pipe
cleanly.  All configuration is by flag - no environment variables - and
defaults follow the values used throughout the experiments (scene detection
defaults to epsilon=100 with unit constant gain; tau defaults to 0.25).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import (
    GroundTruth,
    ac_x_bound,
    ac_y_bound,
    adaptive_mistake_bound,
    mistake_bound_agnostic,
    mistake_bound_realizable,
    power_delta_bound,
    riemann_zeta,
    sigma_admissibility_ratio,
)
from .checkpoint import checkpoint_decode, checkpoint_encode
from .detector import AdaptiveRadius, Constant, Detector, FixedRadius, PowerDecay
from .experiments import (
    compare_adaptive,
    emit_results,
    sweep_center_scale,
    sweep_contamination,
    sweep_dimension,
    sweep_epsilon,
    sweep_margin,
)
from .scene import (
    gen_synthetic_clips,
    load_pgm_sequence,
    read_frames_packed,
    run_scene_detection,
    timeline_to_csv,
    write_memory_snapshot,
)
from .streams import Design, StreamSpec, generate
from .streamio import read_vectors, write_vectors


def _log(message: str) -> None:
    print(message, file=sys.stderr)


def _parse_center(text: str, dim: int) -> np.ndarray:
    if "," in text:
        center = np.asarray([float(tok) for tok in text.split(",")],
                            dtype=np.float64)
        if center.size != dim:
            raise ValueError(
                f"--center has {center.size} entries but --dim is {dim}")
        return center
    return np.full(dim, float(text), dtype=np.float64)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fado",
        description="Mistake-driven online fault detection toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a detector over a stream file")
    run_p.add_argument("--mode", choices=["fixed", "adaptive", "constant-gain"],
                       help="detector variant (omit when resuming a checkpoint)")
    run_p.add_argument("--epsilon", type=float,
                       help="radius for fixed/constant-gain modes")
    run_p.add_argument("--gamma0", type=float, default=1.0,
                       help="gain scale for the decaying schedule")
    run_p.add_argument("--tau", type=float, default=0.25,
                       help="gain decay exponent offset, in (0, 1/2)")
    run_p.add_argument("--gamma", type=float, default=1.0,
                       help="constant gain (constant-gain mode)")
    run_p.add_argument("--input", required=True,
                       help="stream file (.csv or packed binary)")
    run_p.add_argument("--output", help="outcome CSV (default stdout)")
    run_p.add_argument("--checkpoint-in", help="resume from this checkpoint")
    run_p.add_argument("--checkpoint-out", help="write final state here")

    sweep_p = sub.add_parser("sweep", help="run a figure-style sweep")
    sweep_p.add_argument("kind", choices=["margin", "center", "dim", "epsilon",
                                          "contamination", "adaptive"])
    sweep_p.add_argument("--seeds", type=int, default=5)
    sweep_p.add_argument("--count", type=int, default=10_000,
                         help="stream length per run")
    sweep_p.add_argument("--base-seed", type=int, default=0xFAD0)
    sweep_p.add_argument("--out", help="results file (.csv or .json)")

    scene_p = sub.add_parser("scene", help="scene-change detection over frames")
    scene_p.add_argument("frames", nargs="*",
                         help="ordered binary PGM files")
    scene_p.add_argument("--packed", help="packed raw frame file")
    scene_p.add_argument("--synthetic", action="store_true",
                         help="generate the synthetic clip sequence")
    scene_p.add_argument("--epsilon", type=float, default=100.0)
    scene_p.add_argument("--gamma", type=float, default=1.0)
    scene_p.add_argument("--timeline", help="timeline CSV output")
    scene_p.add_argument("--snapshot", help="final memory snapshot PGM")
    scene_p.add_argument("--checkpoint-in")
    scene_p.add_argument("--checkpoint-out")
    scene_p.add_argument("--width", type=int, default=40)
    scene_p.add_argument("--height", type=int, default=40)
    scene_p.add_argument("--clips", type=int, default=16)
    scene_p.add_argument("--frames-per-clip", type=int, default=50)
    scene_p.add_argument("--noise", type=int, default=10)
    scene_p.add_argument("--seed", type=int, default=0xFAD0)

    bounds_p = sub.add_parser("bounds", help="print the closed-form bounds")
    bounds_p.add_argument("--wnorm", type=float, required=True,
                          help="norm of the realizable center")
    bounds_p.add_argument("--mu", type=float, required=True)
    bounds_p.add_argument("--tau", type=float, default=0.25)
    bounds_p.add_argument("--gamma0", type=float, default=1.0)
    bounds_p.add_argument("--m-t", type=int,
                          help="mistake count for the power bound "
                               "(default: the mistake bound itself)")
    bounds_p.add_argument("--sigma", type=float,
                          help="fault mass for the agnostic bound")
    bounds_p.add_argument("--epsilon", type=float,
                          help="radius for the adaptive diagnostic bound")

    gen_p = sub.add_parser("gen", help="generate a synthetic stream file")
    gen_p.add_argument("--design", choices=["ball", "circle", "mixture"],
                       default="ball")
    gen_p.add_argument("--dim", type=int, required=True)
    gen_p.add_argument("--count", type=int, required=True)
    gen_p.add_argument("--center", required=True,
                       help="comma-separated center, or one value for c*ones")
    gen_p.add_argument("--epsilon", type=float, required=True)
    gen_p.add_argument("--mu", type=float, default=0.0)
    gen_p.add_argument("--fraction", type=float, default=0.0,
                       help="contamination fraction (mixture design)")
    gen_p.add_argument("--radius-max", type=float,
                       help="outlier shell radius (mixture design)")
    gen_p.add_argument("--seed", type=int, required=True)
    gen_p.add_argument("--out", required=True,
                       help="stream file (.csv or packed binary)")
    gen_p.add_argument("--labels-out",
                       help="CSV of outlier labels (mixture design)")
    return parser


def _cmd_run(args, parser) -> int:
    samples = read_vectors(args.input)
    if args.checkpoint_in:
        detector = checkpoint_decode(Path(args.checkpoint_in).read_bytes())
    else:
        if args.mode is None:
            parser.error("--mode is required unless --checkpoint-in is given")
        if args.mode in ("fixed", "constant-gain"):
            if args.epsilon is None:
                parser.error(f"--epsilon is required for mode {args.mode}")
            mode = FixedRadius(args.epsilon)
        else:
            if args.epsilon is not None:
                parser.error("--epsilon conflicts with the adaptive mode")
            mode = AdaptiveRadius()
        if args.mode == "constant-gain":
            schedule = Constant(args.gamma)
        else:
            schedule = PowerDecay(gamma0=args.gamma0, tau=args.tau)
        detector = Detector(samples.shape[1], mode, schedule)
    outcomes = detector.run_stream(samples)
    lines = ["t,alarm,distance,threshold,gain_applied"]
    start = detector.t - len(outcomes)
    for i, out in enumerate(outcomes):
        lines.append(f"{start + i + 1},{int(out.alarm)},{out.distance!r},"
                     f"{out.threshold!r},{out.gain_applied!r}")
    text = "\n".join(lines) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="ascii")
    else:
        sys.stdout.write(text)
    if args.checkpoint_out:
        Path(args.checkpoint_out).write_bytes(checkpoint_encode(detector))
    _log(f"processed {len(outcomes)} transactions, {detector.m} alarms")
    return 0


def _cmd_sweep(args) -> int:
    kwargs = {"n_seeds": args.seeds, "count": args.count,
              "base_seed": args.base_seed}
    runners = {
        "margin": sweep_margin,
        "center": sweep_center_scale,
        "dim": sweep_dimension,
        "epsilon": sweep_epsilon,
        "contamination": sweep_contamination,
        "adaptive": compare_adaptive,
    }
    result = runners[args.kind](**kwargs)
    if args.out:
        fmt = "json" if Path(args.out).suffix.lower() == ".json" else "csv"
        emit_results(result, fmt, args.out)
    for name, check in result.checks.items():
        status = "ok" if check.get("passed") else "FAIL"
        _log(f"check {name}: {status}")
    if not result.passed:
        _log("sweep assertions failed")
        return 1
    return 0


def _cmd_scene(args, parser) -> int:
    sources = sum([bool(args.frames), bool(args.packed), args.synthetic])
    if sources != 1:
        parser.error("give exactly one of: PGM frames, --packed, --synthetic")
    transitions = None
    if args.synthetic:
        frames, transitions = gen_synthetic_clips(
            args.width, args.height, args.clips, args.frames_per_clip,
            args.noise, args.seed)
    elif args.packed:
        frames = read_frames_packed(args.packed)
    else:
        frames = load_pgm_sequence(args.frames)
    detector = None
    if args.checkpoint_in:
        detector = checkpoint_decode(Path(args.checkpoint_in).read_bytes())
    timeline, detector = run_scene_detection(frames, args.epsilon, args.gamma,
                                             detector=detector)
    if args.timeline:
        timeline_to_csv(timeline, transitions, args.timeline)
    if args.snapshot:
        write_memory_snapshot(detector, frames.width, frames.height,
                              args.snapshot)
    if args.checkpoint_out:
        Path(args.checkpoint_out).write_bytes(checkpoint_encode(detector))
    _log(f"{len(frames)} frames, {timeline.alarms} alarms "
         f"(rate {timeline.alarm_rate:.4f})")
    return 0


def _cmd_bounds(args) -> int:
    zeta = riemann_zeta(1.0 + 2.0 * args.tau)
    a = args.gamma0 ** 2 * zeta
    bound = mistake_bound_realizable(args.wnorm, args.mu, args.tau,
                                     args.gamma0)
    m_t = args.m_t if args.m_t is not None else max(bound, 1)
    doc = {
        "zeta": zeta,
        "y_max": ac_y_bound(a, args.wnorm),
        "x_max": ac_x_bound(a, args.wnorm),
        "mistake_bound": bound,
        "delta_power": power_delta_bound(args.wnorm, m_t, args.tau,
                                         args.gamma0),
    }
    if args.sigma is not None:
        doc["mistake_bound_agnostic"] = mistake_bound_agnostic(
            args.wnorm, args.mu, args.tau, args.gamma0, args.sigma)
        doc["sigma_admissibility_ratio"] = sigma_admissibility_ratio(
            args.wnorm, args.sigma)
    if args.epsilon is not None:
        report = adaptive_mistake_bound(args.wnorm, args.epsilon, args.tau,
                                        args.gamma0)
        doc["adaptive_bound"] = report.bound
        doc["adaptive_bound_loose"] = report.loose
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def _cmd_gen(args, parser) -> int:
    center = _parse_center(args.center, args.dim)
    truth = GroundTruth(center, args.epsilon, args.mu)
    design = Design(args.design)
    if design is Design.MIXTURE and args.radius_max is None:
        parser.error("--radius-max is required for the mixture design")
    spec = StreamSpec(dim=args.dim, count=args.count, truth=truth,
                      seed=args.seed, design=design,
                      contamination_fraction=args.fraction,
                      outlier_radius_max=args.radius_max)
    generated = generate(spec)
    samples = generated[0]
    write_vectors(samples, args.out)
    if design is Design.MIXTURE and args.labels_out:
        labels = generated[1]
        Path(args.labels_out).write_text(
            "index,is_outlier\n" + "".join(
                f"{i},{int(flag)}\n" for i, flag in enumerate(labels)),
            encoding="ascii")
    _log(f"wrote {samples.shape[0]} x {samples.shape[1]} stream to {args.out}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args, parser)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "scene":
            return _cmd_scene(args, parser)
        if args.command == "bounds":
            return _cmd_bounds(args)
        if args.command == "gen":
            return _cmd_gen(args, parser)
        parser.error(f"unknown command {args.command!r}")
    except (ValueError, OSError) as exc:
        _log(f"error: {exc}")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
