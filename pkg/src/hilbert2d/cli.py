"""Command-line front end.

Exit codes: 0 success, 1 theorem-verification mismatch, 2 input error.
"""
import argparse
import json
import os
import sys

import numpy as np

from . import svg
from .catalogue import MAP_FAMILIES, default_catalogue, make_sampled_map, verify_theorem
from .convex_domain import domain_from_json
from .errors import HilbertError, NotInterior
from .hilbert_metric import distance, metric_ball, unique_geodesic_probe
from .webs_isometry import (TOL_COLLINEAR, TOL_ISOMETRY, TOL_RESIDUAL, ClassifyConfig,
                            SampledMap, classify_map)


class InputError(Exception):
    pass


def _default_seed():
    raw = os.environ.get("HILBERT_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"HILBERT_SEED must be an integer, got {raw!r}")


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}")


def _load_domain(path):
    obj = _load_json(path)
    if not isinstance(obj, dict):
        raise InputError(f"{path}: domain must be a JSON object")
    return domain_from_json(obj)


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}")


def _config(args, file_probe=None):
    probe = file_probe or {}
    lpp = args.lines_per_pole if args.lines_per_pole is not None else probe.get("lines_per_pole", 8)
    spl = args.samples_per_line if args.samples_per_line is not None else probe.get("samples_per_line", 7)
    seed = args.seed if args.seed is not None else _default_seed()
    if seed < 0 or seed >= 2 ** 64:
        raise InputError("seed must be a 64-bit unsigned integer")
    return ClassifyConfig(seed=seed, pairs=args.pairs, lines_per_pole=int(lpp),
                          samples_per_line=int(spl), tol_isometry=args.tol_isometry,
                          tol_residual=args.tol_residual, tol_collinear=args.tol_collinear)


def _dumps(obj):
    return json.dumps(obj, indent=2) + "\n"


# ---------------------------------------------------------------------------

def cmd_distance(args):
    dom = _load_domain(args.domain)
    d = distance(dom, args.x, args.y)
    print(f"{d:.15g}")
    return 0


def cmd_ball(args):
    dom = _load_domain(args.domain)
    pts = metric_ball(dom, args.center, args.radius, args.directions)
    if args.output and args.output.endswith(".svg"):
        _write(args.output, svg.ball_figure(dom, args.center, (args.radius,), args.directions))
        return 0
    out = {"kind": "ball", "domain": dom.to_json(), "center": [float(v) for v in args.center],
           "radius": args.radius, "polyline": pts.tolist()}
    _write(args.output, _dumps(out))
    return 0


def cmd_geodesic_probe(args):
    dom = _load_domain(args.domain)
    rep = unique_geodesic_probe(dom, args.x, args.y, args.grid, args.exclusion, args.threshold)
    _write(None, _dumps(rep.to_json()))
    return 0


def cmd_classify(args):
    obj = _load_json(args.map)
    if not isinstance(obj, dict):
        raise InputError("sampled map must be a JSON object")
    smap = SampledMap.from_json(obj)
    cfg = _config(args, smap.probe_config)
    rep = classify_map(smap, cfg.pairs, cfg)
    _write(None, _dumps(rep.to_json()))
    return 0


def _load_catalogue(path):
    obj = _load_json(path)
    if isinstance(obj, dict):
        obj = obj.get("domains", [])
    if not isinstance(obj, list):
        raise InputError("catalogue must be a list of domains")
    cat = []
    for k, entry in enumerate(obj):
        if not isinstance(entry, dict):
            raise InputError("catalogue entries must be JSON objects")
        cat.append((str(entry.get("name", f"domain-{k}")), domain_from_json(entry)))
    return cat


def cmd_verify_theorem(args):
    cfg = _config(args)
    cat = default_catalogue() if args.catalogue is None else _load_catalogue(args.catalogue)
    rows = verify_theorem(cat, cfg)
    head = f"{'domain':<18} {'shape':<34} {'map':<11} {'verdict':<22} {'iso_defect':>10} {'colline':>10} {'residual':>10} match"
    lines = [head]
    for r in rows:
        lines.append(f"{r.name:<18} {r.shape:<34} {r.family:<11} {r.verdict:<22} "
                     f"{r.isometry_defect:10.2e} {r.collineation_defect:10.2e} {r.residual:10.2e} "
                     f"{'yes' if r.match else 'NO'}")
    print("\n".join(lines))
    bad = [r for r in rows if not r.match]
    for r in bad:
        print(f"mismatch: {r.name} / {r.family}: expected {r.expected}, got {r.verdict}", file=sys.stderr)
    return 1 if bad else 0


def cmd_figure(args):
    dom = _load_domain(args.domain)
    kwargs = {}
    if args.kind == "pencil":
        kwargs["n"] = args.lines
    elif args.kind == "web5":
        kwargs["lines_per_pole"] = args.lines
    try:
        text = svg.figure(args.kind, dom, **kwargs)
    except ValueError as exc:
        raise InputError(str(exc))
    _write(args.output, text)
    return 0


def cmd_make_map(args):
    dom = _load_domain(args.domain)
    cfg = _config(args)
    params = {}
    for key in ("eps", "factor", "index"):
        val = getattr(args, key)
        if val is not None:
            params[key] = val
    smap = make_sampled_map(args.family, dom, seed=cfg.seed, n_samples=args.samples,
                            config=cfg, **params)
    _write(args.output, json.dumps(smap.to_json()) + "\n")
    return 0


# ---------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help="RNG seed (default: $HILBERT_SEED or 0)")
    common.add_argument("--tol-isometry", type=float, default=TOL_ISOMETRY)
    common.add_argument("--tol-residual", type=float, default=TOL_RESIDUAL)
    common.add_argument("--tol-collinear", type=float, default=TOL_COLLINEAR)
    common.add_argument("--pairs", type=int, default=500)
    common.add_argument("--lines-per-pole", type=int, default=None)
    common.add_argument("--samples-per-line", type=int, default=None)

    p = argparse.ArgumentParser(prog="hilbert2d", description="Two-dimensional Hilbert geometry toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("distance", parents=[common], help="Hilbert distance between two points")
    s.add_argument("domain")
    s.add_argument("x", type=float, nargs=2)
    s.add_argument("y", type=float, nargs=2)
    s.set_defaults(func=cmd_distance)

    s = sub.add_parser("ball", parents=[common], help="metric ball polyline (JSON or SVG)")
    s.add_argument("domain")
    s.add_argument("center", type=float, nargs=2)
    s.add_argument("radius", type=float)
    s.add_argument("--directions", type=int, default=64)
    s.add_argument("-o", "--output", default=None)
    s.set_defaults(func=cmd_ball)

    s = sub.add_parser("geodesic-probe", parents=[common], help="grid search for a second geodesic")
    s.add_argument("domain")
    s.add_argument("x", type=float, nargs=2)
    s.add_argument("y", type=float, nargs=2)
    s.add_argument("--grid", type=int, default=200)
    s.add_argument("--exclusion", type=float, default=1e-3)
    s.add_argument("--threshold", type=float, default=1e-9)
    s.set_defaults(func=cmd_geodesic_probe)

    s = sub.add_parser("classify", parents=[common], help="classify a sampled map")
    s.add_argument("map")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("verify-theorem", parents=[common], help="sweep shapes x map families")
    s.add_argument("catalogue", nargs="?", default=None)
    s.set_defaults(func=cmd_verify_theorem)

    s = sub.add_parser("figure", parents=[common], help="write an SVG figure")
    s.add_argument("kind", choices=sorted(svg.FIGURES))
    s.add_argument("domain")
    s.add_argument("output")
    s.add_argument("--lines", type=int, default=12)
    s.set_defaults(func=cmd_figure)

    s = sub.add_parser("make-map", parents=[common], help="sample a closed-form map family")
    s.add_argument("family", choices=MAP_FAMILIES)
    s.add_argument("domain")
    s.add_argument("-o", "--output", default=None)
    s.add_argument("--samples", type=int, default=None)
    s.add_argument("--eps", type=float, default=None)
    s.add_argument("--factor", type=float, default=None)
    s.add_argument("--index", type=int, default=None)
    s.set_defaults(func=cmd_make_map)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return args.func(args)
    except NotInterior:
        print("error: point not interior", file=sys.stderr)
        return 2
    except (InputError, HilbertError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
