"""Command-line interface.

Exit codes: 0 when every check passes, 1 when some check fails, 2 for an
invalid configuration or unmet hypotheses.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .complex import ComplexTooLarge, SimplicialComplex, rips_complex
from .config import ConfigError, ExperimentConfig, load_config, parse_number
from .homology import homology_report
from .metric import (
    FiniteMetricSpace,
    read_distance_csv,
    read_points,
    write_distance_csv,
    write_points_csv,
)
from .pipeline import (
    SWEEP_COLUMNS,
    HypothesisError,
    choose_window,
    prepare_sample,
    run_certify,
    run_sweep,
    run_verify,
)

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, default=float)


def _emit(args, name: str, obj) -> None:
    text = _dump(obj)
    print(text)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{name}.json").write_text(text + "\n")


def _config(args) -> ExperimentConfig:
    if not args.config:
        raise ConfigError("--config is required for this command")
    cfg = load_config(args.config)
    return cfg.with_overrides(seed=args.seed, max_dim=args.max_dim, beta=args.beta, zeta=args.zeta)


def cmd_verify(args) -> int:
    """Sample, certify, build the Rips complex and compare Betti numbers."""
    cfg = _config(args)
    try:
        report = run_verify(cfg)
    except HypothesisError as err:
        _emit(args, "verify", {"pass": False, "error": str(err)})
        return EXIT_INVALID
    _emit(args, "verify", report)
    return EXIT_OK if report["pass"] else EXIT_FAIL


def cmd_sweep(args) -> int:
    """Run verify over an (n, beta, zeta) grid and write a CSV matrix."""
    cfg = _config(args)
    rows, bad = run_sweep(cfg)
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "sweep.csv", "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=SWEEP_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    summary = {"cells": len(rows), "in_window": sum(r["in_window"] for r in rows),
               "betti_pass": sum(r["betti_pass"] for r in rows),
               "implication_violations": bad, "csv": str(out / "sweep.csv")}
    print(_dump(summary))
    return EXIT_FAIL if bad else EXIT_OK


def cmd_certify(args) -> int:
    """Run the inequality and construction checks for a model."""
    cfg = _config(args)
    try:
        report = run_certify(cfg)
    except ValueError as err:
        _emit(args, "certify", {"pass": False, "valid": False, "error": str(err)})
        return EXIT_INVALID
    _emit(args, "certify", report)
    return EXIT_OK if report["pass"] else EXIT_FAIL


def cmd_sample(args) -> int:
    """Write a (perturbed) sample and its certificates."""
    cfg = _config(args)
    prep = prepare_sample(cfg)
    pts = prep.points if prep.points is not None else prep.coords
    meta = {"model": cfg.model.to_spec(), "sampler": cfg.sampler.describe(),
            "pipeline": cfg.resolved_pipeline,
            "coordinates": "ambient" if prep.points is not None else "chart",
            "n_points": prep.metric.n, "certificates": prep.certificates}
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_points_csv(out / "sample.csv", pts)
        # chart coordinates are not Euclidean; ship the geodesic matrix alongside
        if prep.points is None:
            write_distance_csv(out / "distances.csv", prep.metric)
    _emit(args, "sample", meta)
    return EXIT_OK


def _input_metric(args) -> FiniteMetricSpace:
    if args.distances:
        return read_distance_csv(args.distances)
    if args.input:
        return FiniteMetricSpace.from_points(read_points(args.input))
    return prepare_sample(_config(args)).metric


def cmd_rips(args) -> int:
    """Build a Vietoris-Rips complex and write its maximal simplices."""
    if args.beta is None:
        raise ConfigError("rips needs --beta")
    beta = float(parse_number(args.beta, name="beta"))
    max_dim = 2 if args.max_dim is None else args.max_dim
    K = rips_complex(_input_metric(args), beta, max_dim=max_dim)
    data = {**K.to_json(), "f_vector": list(K.f_vector())}
    _emit(args, "rips", data)
    return EXIT_OK


def cmd_homology(args) -> int:
    """Betti numbers and Euler characteristic over GF(2)."""
    if args.complex:
        K = SimplicialComplex.load(args.complex)
        up_to = args.max_dim
    else:
        if args.beta is None:
            raise ConfigError("homology needs --complex or a point source with --beta")
        up_to = 2 if args.max_dim is None else args.max_dim
        K = rips_complex(_input_metric(args), float(parse_number(args.beta, name="beta")),
                         max_dim=up_to + 1)
    _emit(args, "homology", homology_report(K, up_to))
    return EXIT_OK


def cmd_window(args) -> int:
    """Admissible scale window for a configured sample."""
    cfg = _config(args)
    prep = prepare_sample(cfg)
    w = choose_window(cfg, prep.d_bound)
    report = {**w.to_dict(), "pipeline": cfg.resolved_pipeline, "d_bound": prep.d_bound,
              "midpoint": None if w.empty else w.midpoint()}
    if cfg.beta is not None:
        report["beta"] = float(cfg.beta)
        report["beta_in_window"] = cfg.beta in w
        report["margins"] = {"lower": float(cfg.beta - w.lower), "upper": float(w.upper - cfg.beta)}
    _emit(args, "window", report)
    return EXIT_OK if not w.empty else EXIT_FAIL


COMMANDS = {"verify": cmd_verify, "sweep": cmd_sweep, "certify": cmd_certify,
            "sample": cmd_sample, "rips": cmd_rips, "homology": cmd_homology,
            "window": cmd_window}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ripsrecon",
        description="Vietoris-Rips reconstruction of model manifolds with certified scale windows.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        p = sub.add_parser(name, help=fn.__doc__)
        p.add_argument("--config", help="experiment config (JSON, schema 1)")
        p.add_argument("--out", help="output directory")
        p.add_argument("--seed", type=int, help="override the sampler seed")
        p.add_argument("--max-dim", type=int, dest="max_dim", help="highest Betti number / complex dimension")
        p.add_argument("--beta", help="scale (number or fraction such as 1/2)")
        p.add_argument("--zeta", help="zeta (number or fraction such as 1/14)")
        if name in ("rips", "homology"):
            p.add_argument("--input", help="point cloud (.csv or .json)")
            p.add_argument("--distances", help="distance matrix CSV")
        if name == "homology":
            p.add_argument("--complex", help="complex JSON written by 'rips'")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ValueError, ComplexTooLarge) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
